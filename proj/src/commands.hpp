#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cdg::app {

enum ExitCode : int { ok = 0, parse_failure = 2, axiom_failure = 3, verdict_failure = 4, out_of_window = 5 };

struct Options {
    std::string command;
    std::string manifest;  // path; optional for pushout-product and verify-paper
    std::optional<std::uint64_t> seed;
    int truncate = 3;
    std::string model = "both";
    std::vector<std::string> objects;
    std::optional<std::string> map, family, cofamily;
    std::optional<int> lo, hi;
    int count = 20;
    bool json = false;
    bool timings = true;
    std::string emit;  // serialized constructed objects go here
};

struct Outcome {
    int exit_code = ExitCode::ok;
    std::string text;  // the report, plain or JSON
};

/// CDG_WINDOW, or 12.
int default_window();
/// CDG_TELESCOPE_WINDOW, or 8.
int default_telescope_window();

Outcome run_command(const Options& opts);

/// Reads and parses a manifest file; parse errors give exit code 2.
Outcome parse_only(const std::string& path);

}  // namespace cdg::app
