#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mimic {

// 8-bit RGB image, row-major, top-left origin.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // height * width * 3

    static Image filled(int width, int height, std::uint8_t r, std::uint8_t g,
                        std::uint8_t b);

    std::uint8_t& at(int y, int x, int c) { return rgb[(y * width + x) * 3 + c]; }
    std::uint8_t at(int y, int x, int c) const { return rgb[(y * width + x) * 3 + c]; }

    void set_pixel(int y, int x, std::uint8_t r, std::uint8_t g, std::uint8_t b);
    void draw_line(int y0, int x0, int y1, int x1, std::uint8_t r, std::uint8_t g,
                   std::uint8_t b);
};

// Binary PPM (P6).
std::string encode_ppm(const Image& img);
void write_ppm(const Image& img, const std::string& path);
Image read_ppm(const std::string& path);

}  // namespace mimic
