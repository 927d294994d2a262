#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "homsa/condition.hpp"
#include "homsa/homology.hpp"
#include "homsa/parser.hpp"

namespace homsa {

struct RunOptions {
    double rho = 0.01;
    double bound_B = std::numeric_limits<double>::infinity();
    unsigned level_cap = 24;
    std::optional<unsigned> ell_override;
    std::optional<double> epsilon_override;
    std::optional<std::size_t> kmax_override;
    unsigned threads = 0;
    std::size_t table_cap = 50000000;
    std::size_t face_cap = 100000000;
    std::string emit_complex_path; // empty: no dump
    std::string emit_clouds_path;  // empty: no dump
};

struct StageTimes {
    double estimate_s = 0.0;
    double complex_s = 0.0;
    double homology_s = 0.0;
    double total_s = 0.0;
};

struct CloudSizeEntry {
    std::size_t poly;
    Relation rel;
    std::size_t size;
};

struct HomologyReport {
    HomologyGroups groups;

    // condition stage
    double K = 0.0;
    EstimateStatus estimate_status = EstimateStatus::OK;
    unsigned estimate_iterations = 0;
    unsigned estimate_level = 0;
    double rho = 0.01;

    // simplicial stage
    unsigned level = 0;
    double epsilon = 0.0;
    std::size_t kmax = 0;
    bool window_ok = false;
    std::size_t table_size = 0;
    std::vector<CloudSizeEntry> cloud_sizes;
    std::vector<std::size_t> face_counts;

    // input echo
    std::size_t n_vars = 0;
    std::size_t q = 0;
    std::vector<unsigned> degrees;
    std::size_t formula_size = 0;

    std::string mode; // "paper-parameters" | "overridden"
    std::vector<std::string> notes;
    StageTimes times;
};

// Homogenize, estimate the condition, build the witness complex, compute
// integer homology. With no overrides and a successful estimate the groups
// are those of W(p, Phi); with overrides the report is labeled "overridden"
// and carries the parameter-window check for the estimated K.
HomologyReport run_homology(const ProblemInput& input, const RunOptions& options = {});

// Condition stage only (CLI `estimate`).
HomologyReport run_estimate(const ProblemInput& input, const RunOptions& options = {});

std::string format_group(const HomologyGroup& group);
std::string format_report_text(const HomologyReport& report);
// Stable schema; timing fields are the only run-to-run variation.
std::string format_report_json(const HomologyReport& report);

} // namespace homsa
