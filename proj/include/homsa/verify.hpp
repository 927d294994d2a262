#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace homsa {

// One oracle suite run: per-check lines plus pass/fail counts.
struct SuiteResult {
    std::string name;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::vector<std::string> lines;

    bool ok() const { return failed == 0; }
};

std::vector<std::string> suite_names();

// Runs one of the deterministic oracle suites: weyl, grid, condition,
// sampling, cech, snf, endtoend, tail. Unknown names raise input_error.
SuiteResult run_suite(const std::string& name, std::uint64_t seed = 1, unsigned threads = 0);

} // namespace homsa
