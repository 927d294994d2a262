#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace homsa {

// Exponent vector of a single monomial; one entry per variable.
using Monomial = std::vector<unsigned>;

unsigned total_degree(const Monomial& m);

// Multinomial coefficient d! / (a_0! ... a_k!) where d = sum of alpha,
// computed exactly in big integers and returned as a double. Values are
// cached per exponent vector.
double multinomial(const Monomial& alpha);

// Real multivariate polynomial with double coefficients, stored as a sparse
// term map keyed by exponent vector (lexicographic order). The declared
// degree may exceed the total degree of every stored term; when the
// homogeneous flag is set, every term has total degree exactly `degree`.
class Polynomial {
public:
    using TermMap = std::map<Monomial, double>;

    Polynomial(std::size_t n_vars, unsigned degree, bool homogeneous, TermMap terms);

    std::size_t n_vars() const { return n_vars_; }
    unsigned degree() const { return degree_; }
    bool is_homogeneous() const { return homogeneous_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    unsigned actual_total_degree() const;

    double evaluate(std::span<const double> x) const;
    void gradient_into(std::span<const double> x, std::span<double> out) const;
    std::vector<double> gradient(std::span<const double> x) const;

    // p(X_1/X_0, ..., X_n/X_0) X_0^degree over n_vars+1 variables; variable 0
    // is the new homogenizing variable.
    Polynomial homogenized() const;

    bool operator==(const Polynomial& other) const;

private:
    std::size_t n_vars_;
    unsigned degree_;
    bool homogeneous_;
    TermMap terms_;
    // flattened copy of terms_ for the evaluation hot paths
    std::vector<unsigned> flat_exps_; // n_vars entries per term
    std::vector<double> flat_coeffs_;
};

// <g, h> = sum over alpha of g_alpha h_alpha / multinomial(d; alpha), for
// homogeneous g, h of equal degree and variable count.
double weyl_inner(const Polynomial& g, const Polynomial& h);

// Weyl norm of a single polynomial; affine polynomials are homogenized
// componentwise first.
double weyl_norm(const Polynomial& p);

// Tuple of polynomials over a shared variable space. Degrees are the
// declared per-component degrees d_i >= 1.
class PolyTuple {
public:
    explicit PolyTuple(std::vector<Polynomial> polys);

    std::size_t size() const { return polys_.size(); }
    std::size_t n_vars() const { return polys_.front().n_vars(); }
    bool is_homogeneous() const { return homogeneous_; }
    const Polynomial& operator[](std::size_t i) const { return polys_[i]; }
    const std::vector<Polynomial>& polys() const { return polys_; }

    std::vector<unsigned> degrees() const;
    unsigned max_degree() const;

    // Dimension N of the coefficient space: sum over i of C(n + d_i, d_i)
    // for affine tuples over n variables.
    std::uint64_t coefficient_space_dim() const;

private:
    std::vector<Polynomial> polys_;
    bool homogeneous_;
};

double weyl_norm_tuple(const PolyTuple& f);

// H(p) = (||p|| X_0, p_1^h, ..., p_q^h) with degree vector (1, d).
// Throws input_error when ||p|| = 0 (component 0 would vanish identically).
PolyTuple homogenize_tuple(const PolyTuple& p);

PolyTuple scale_tuple(const PolyTuple& p, double lambda);

// Grammar-compatible rendering, e.g. "x^2 + y^2 - 1"; used by the printer
// and the debug surfaces.
std::string to_string(const Polynomial& p, const std::vector<std::string>& var_names);

} // namespace homsa
