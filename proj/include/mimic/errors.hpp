#pragma once

#include <stdexcept>
#include <string>

namespace mimic {

// Error taxonomy used across the pipeline. The CLI maps these to distinct
// exit codes (argument=2, format=3, io=4).

struct ArgumentError : std::invalid_argument {
    explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

struct DimensionError : ArgumentError {
    explicit DimensionError(const std::string& msg) : ArgumentError(msg) {}
};

struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IntegrityError : FormatError {
    explicit IntegrityError(const std::string& msg) : FormatError(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct StateError : std::logic_error {
    explicit StateError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace mimic
