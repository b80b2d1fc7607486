#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "mimic/rng.hpp"
#include "mimic/servo_layout.hpp"
#include "mimic/text_io.hpp"

using namespace mimic;

namespace {

// The binary path is injected by ctest through the environment.
std::string cli_path() {
    const char* p = std::getenv("MIMIC_BIN");
    REQUIRE_MESSAGE(p != nullptr, "MIMIC_BIN not set");
    return p;
}

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string out_path = "cli_stdout.tmp";
    const std::string cmd = cli_path() + " " + args + " > " + out_path + " 2>cli_stderr.tmp";
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    std::ifstream in(out_path);
    std::string line;
    while (std::getline(in, line)) r.out += line + "\n";
    return r;
}

std::string grep_value(const std::string& text, const std::string& key) {
    std::size_t pos = text.find(key + " ");
    if (pos == std::string::npos) return "";
    pos += key.size() + 1;
    const std::size_t end = text.find('\n', pos);
    return text.substr(pos, end - pos);
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("gen-data is deterministic and validates its arguments") {
    RunResult r = run("gen-data --n 150 --seed 5 --out cli_ds.jsonl");
    CHECK(r.exit_code == 0);
    CHECK(grep_value(r.out, "records") == "150");
    CHECK(grep_value(r.out, "violations") == "0");
    const std::string sum1 = grep_value(r.out, "checksum");
    CHECK(!sum1.empty());

    RunResult r2 = run("gen-data --n 150 --seed 5 --out cli_ds2.jsonl");
    CHECK(grep_value(r2.out, "checksum") == sum1);

    // n = 0 is an argument error and writes nothing
    std::remove("cli_ds_zero.jsonl");
    RunResult bad = run("gen-data --n 0 --out cli_ds_zero.jsonl");
    CHECK(bad.exit_code == 2);
    std::ifstream probe("cli_ds_zero.jsonl");
    CHECK(!probe.good());
}

TEST_CASE("train, eval, latency, mimic pipeline on a tiny dataset") {
    REQUIRE(run("gen-data --n 120 --seed 9 --out cli_pipe.jsonl").exit_code == 0);

    const std::string train_args =
        "train --data cli_pipe.jsonl --out cli_pipe.ckpt --history cli_pipe_hist.csv "
        "--kind attention-kan --epochs 2 --batch 32 --lr 1e-3 --train-n 100 "
        "--test-n 20 --kan-hidden 6 --d-model 4";
    RunResult t1 = run(train_args);
    CHECK(t1.exit_code == 0);
    const std::string loss1 = grep_value(t1.out, "best_test_loss");
    CHECK(!loss1.empty());

    // identical config reproduces the loss to the last digit and the
    // checkpoint byte for byte
    const std::string ckpt_bytes = read_file("cli_pipe.ckpt");
    RunResult t2 = run(train_args);
    CHECK(grep_value(t2.out, "best_test_loss") == loss1);
    CHECK(read_file("cli_pipe.ckpt") == ckpt_bytes);

    // missing dataset is an io error
    CHECK(run("train --data does_not_exist.jsonl").exit_code == 4);
    // a dataset is not a checkpoint: format error
    CHECK(run("eval --ckpt cli_pipe.jsonl --data cli_pipe.jsonl").exit_code == 3);

    std::system("mkdir -p cli_report");
    const std::string eval_args =
        "eval --ckpt cli_pipe.ckpt --data cli_pipe.jsonl --out-dir cli_report "
        "--train-n 100 --test-n 20 --render-n 5 --compare-untrained";
    RunResult ev = run(eval_args);
    CHECK(ev.exit_code == 0);
    const std::string summary_first = read_file("cli_report/summary.csv");
    CHECK(run(eval_args).exit_code == 0);  // idempotent on its outputs
    CHECK(read_file("cli_report/summary.csv") == summary_first);
    // evaluating on the training split reproduces the checkpoint's best loss
    CHECK(grep_value(ev.out, "eval_total_loss") ==
          grep_value(ev.out, "checkpoint_best_test_loss"));
    CHECK(!grep_value(ev.out, "gs").empty());
    CHECK(!grep_value(ev.out, "gt").empty());
    CHECK(!grep_value(ev.out, "gd").empty());
    const std::string summary = read_file("cli_report/summary.csv");
    CHECK(summary.find(",gs,gt,gd") != std::string::npos);
    const std::string svg = read_file("cli_report/ced.svg");
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("untrained") != std::string::npos);

    RunResult lat = run("latency --ckpt cli_pipe.ckpt --frames 200");
    CHECK(lat.exit_code == 0);
    CHECK(parse_double(grep_value(lat.out, "mean_ms")) < 20.0);

    // streaming mode: 300 valid frames, one malformed line, one out-of-range
    {
        std::ofstream stream_in("cli_stream_in.jsonl");
        SplitMix64 rng(12);
        for (int i = 0; i < 300; ++i) {
            stream_in << "{\"features\":[";
            for (int j = 0; j < 55; ++j)
                stream_in << (j ? "," : "") << format_double(rng.next_double());
            stream_in << "]}\n";
        }
        stream_in << "this is not json\n";
        stream_in << "{\"features\":[2.0";
        for (int j = 1; j < 55; ++j) stream_in << ",0.25";
        stream_in << "]}\n";
    }
    const int rc = std::system((cli_path() +
                                " mimic --ckpt cli_pipe.ckpt < cli_stream_in.jsonl "
                                "> cli_stream_out.jsonl 2>cli_stream_err.txt")
                                   .c_str());
    CHECK(WEXITSTATUS(rc) == 0);
    const std::string out = read_file("cli_stream_out.jsonl");
    int servo_lines = 0, error_lines = 0;
    std::istringstream lines(out);
    std::string line;
    const ServoLayout lay = make_default_layout();
    while (std::getline(lines, line)) {
        if (line.find("\"servo\"") != std::string::npos) {
            ++servo_lines;
            // outputs respect the channel limits
            std::size_t lb = line.find('[');
            std::size_t rb = line.find(']');
            std::istringstream vals(line.substr(lb + 1, rb - lb - 1));
            std::string tok;
            int c = 0;
            while (std::getline(vals, tok, ',')) {
                const double v = parse_double(tok);
                CHECK(v >= lay.channels[c].lo);
                CHECK(v <= lay.channels[c].hi);
                ++c;
            }
            CHECK(c == 25);
        } else if (line.find("\"error\"") != std::string::npos) {
            ++error_lines;
        }
    }
    CHECK(servo_lines == 300);
    CHECK(error_lines == 2);

    // stderr carries per-frame latency plus a mean below the 20 ms budget
    const std::string err_log = read_file("cli_stream_err.txt");
    const std::size_t mean_pos = err_log.find("mean latency_ms ");
    REQUIRE(mean_pos != std::string::npos);
    CHECK(parse_double(split_ws(err_log.substr(mean_pos + 16)).front()) < 20.0);

    for (const char* f :
         {"cli_pipe.jsonl", "cli_pipe.ckpt", "cli_pipe_hist.csv", "cli_ds.jsonl",
          "cli_ds2.jsonl", "cli_stream_in.jsonl", "cli_stream_out.jsonl",
          "cli_stream_err.txt", "cli_stdout.tmp", "cli_stderr.tmp"})
        std::remove(f);
    std::system("rm -rf cli_report");
}

TEST_CASE("export commands write loadable files") {
    CHECK(run("export-layout --out cli_layout.txt").exit_code == 0);
    const ServoLayout lay = load_layout("cli_layout.txt");
    CHECK(lay.channels.size() == 25);
    std::remove("cli_layout.txt");
}

TEST_CASE("options can come from a config file") {
    {
        std::ofstream cfg("cli_cfg.ini");
        cfg << "[gen-data]\nn=25\nseed=4\nout=cli_cfg_ds.jsonl\n";
    }
    RunResult r = run("--config cli_cfg.ini gen-data");
    CHECK(r.exit_code == 0);
    CHECK(grep_value(r.out, "records") == "25");
    std::remove("cli_cfg.ini");
    std::remove("cli_cfg_ds.jsonl");
}

TEST_SUITE_END();
