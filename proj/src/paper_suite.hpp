#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cdg::app {

struct SuiteConfig {
    std::uint64_t seed = 20240611;
    int polynomial_window = 12;  // k[x] is known on degrees [0, window]
    int telescope_window = 8;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    double seconds = 0;
    double limit = 0;  // seconds, 0 when unconstrained
    std::string window;
    std::vector<std::string> details;
};

/// Criterion titles, 1-based.
const std::vector<std::string>& criterion_titles();

/// Runs one criterion with the library checks only.
CriterionResult run_criterion(int id, const SuiteConfig& cfg);

std::vector<CriterionResult> run_suite(const SuiteConfig& cfg, const std::vector<int>& only = {});

/// One line per criterion plus indented details.
std::string format_suite(const std::vector<CriterionResult>& results, const SuiteConfig& cfg, bool with_details);

}  // namespace cdg::app
