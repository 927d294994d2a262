#pragma once

#include <optional>
#include <span>
#include <vector>

#include "homsa/poly.hpp"

namespace homsa {

// Condition data of a homogeneous tuple at one unit point.
//   mu       = ||f|| ||D_x f^+ Delta||    (+inf when D_x f is not surjective)
//   kappa    = 1 / sqrt(1/mu^2 + residual^2), in [1, +inf]
//   residual = ||f(x)|| / ||f||
struct ConditionAtPoint {
    double mu;
    double kappa;
    double residual;
    std::optional<double> sigma_min;
};

// Normalization matrix diagonal (sqrt(d_1), ..., sqrt(d_q)).
std::vector<double> norm_diagonal(const PolyTuple& f);

ConditionAtPoint condition_at(const PolyTuple& f, std::span<const double> x);
double mu_condition(const PolyTuple& f, std::span<const double> x);
double kappa_at(const PolyTuple& f, std::span<const double> x);

// Number of subsets L scanned for kappa-bar: sum of C(q, i) for
// i = 1..min(q, n+1).
std::uint64_t subset_scan_count(std::size_t q, std::size_t n);

// max over x in the level-ell grid and nonempty L with |L| <= n+1 of
// kappa(f^L, x). Throws ill_posed_error when some kappa(f^L, x) is exactly
// infinite.
double kappa_bar_ell(const PolyTuple& f, unsigned level, unsigned threads = 0,
                     unsigned level_cap = 24);

enum class EstimateStatus { OK, FAIL };

struct EstimateOutcome {
    EstimateStatus status;
    double K;
    unsigned iterations;
    unsigned final_level;
};

// Grid-refinement estimation loop: starting from level 1, evaluates
// K = kappa_bar_ell(f, level) and stops once 2 D K r_level <= rho or
// bound_B <= K. On OK, (1 - rho) kappa_bar(f) <= K <= kappa_bar(f); on
// FAIL, bound_B <= K <= kappa_bar(f). Exceeding level_cap without stopping
// raises a "possibly ill-posed" resource_error.
EstimateOutcome estimate_kappa_bar(const PolyTuple& f, double rho, double bound_B,
                                   unsigned level_cap = 24, unsigned threads = 0);

// kappa_bar of H(p) for an affine tuple p; invariant under p -> lambda p.
EstimateOutcome kappa_bar_aff(const PolyTuple& p, double rho, double bound_B,
                              unsigned level_cap = 24, unsigned threads = 0);

} // namespace homsa
