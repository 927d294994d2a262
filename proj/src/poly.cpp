#include "homsa/poly.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <boost/multiprecision/cpp_int.hpp>

#include "homsa/errors.hpp"

namespace homsa {

using boost::multiprecision::cpp_int;

unsigned total_degree(const Monomial& m) {
    return std::accumulate(m.begin(), m.end(), 0u);
}

namespace {

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const {
        std::size_t h = 1469598103934665603ull;
        for (unsigned e : m) {
            h ^= e;
            h *= 1099511628211ull;
        }
        return h;
    }
};

} // namespace

double multinomial(const Monomial& alpha) {
    static std::unordered_map<Monomial, double, MonomialHash> cache;
    static std::mutex cache_mutex;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(alpha);
        if (it != cache.end()) return it->second;
    }
    // Product of binomials C(s_k, a_k) with s_k the running exponent sum;
    // exact in cpp_int, converted to double once.
    cpp_int value = 1;
    unsigned running = 0;
    for (unsigned a : alpha) {
        running += a;
        cpp_int binom = 1;
        for (unsigned j = 1; j <= a; ++j) {
            binom *= running - a + j;
            binom /= j;
        }
        value *= binom;
    }
    double result = value.convert_to<double>();
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(alpha, result);
    return result;
}

Polynomial::Polynomial(std::size_t n_vars, unsigned degree, bool homogeneous, TermMap terms)
    : n_vars_(n_vars), degree_(degree), homogeneous_(homogeneous), terms_(std::move(terms)) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second == 0.0) {
            it = terms_.erase(it);
            continue;
        }
        if (it->first.size() != n_vars_)
            throw input_error("polynomial term has wrong number of variables");
        unsigned td = total_degree(it->first);
        if (td > degree_)
            throw input_error("polynomial term exceeds declared degree");
        if (homogeneous_ && td != degree_)
            throw input_error("homogeneous polynomial has term of partial degree");
        ++it;
    }
    flat_coeffs_.reserve(terms_.size());
    flat_exps_.reserve(terms_.size() * n_vars_);
    for (const auto& [mono, coeff] : terms_) {
        flat_coeffs_.push_back(coeff);
        flat_exps_.insert(flat_exps_.end(), mono.begin(), mono.end());
    }
}

unsigned Polynomial::actual_total_degree() const {
    unsigned d = 0;
    for (const auto& [mono, coeff] : terms_) d = std::max(d, total_degree(mono));
    return d;
}

double Polynomial::evaluate(std::span<const double> x) const {
    if (x.size() != n_vars_) throw input_error("evaluation point has wrong dimension");
    double sum = 0.0;
    const unsigned* exps = flat_exps_.data();
    for (double coeff : flat_coeffs_) {
        double prod = coeff;
        for (std::size_t j = 0; j < n_vars_; ++j) {
            double xj = x[j];
            for (unsigned e = exps[j]; e > 0; --e) prod *= xj;
        }
        sum += prod;
        exps += n_vars_;
    }
    return sum;
}

void Polynomial::gradient_into(std::span<const double> x, std::span<double> out) const {
    if (x.size() != n_vars_ || out.size() != n_vars_)
        throw input_error("gradient point has wrong dimension");
    std::fill(out.begin(), out.end(), 0.0);
    const unsigned* exps = flat_exps_.data();
    for (double coeff : flat_coeffs_) {
        for (std::size_t j = 0; j < n_vars_; ++j) {
            if (exps[j] == 0) continue;
            double prod = coeff * exps[j];
            for (std::size_t k = 0; k < n_vars_; ++k) {
                unsigned e = exps[k] - (k == j ? 1 : 0);
                double xk = x[k];
                for (unsigned t = e; t > 0; --t) prod *= xk;
            }
            out[j] += prod;
        }
        exps += n_vars_;
    }
}

std::vector<double> Polynomial::gradient(std::span<const double> x) const {
    std::vector<double> out(n_vars_);
    gradient_into(x, out);
    return out;
}

Polynomial Polynomial::homogenized() const {
    TermMap hterms;
    for (const auto& [mono, coeff] : terms_) {
        Monomial h(n_vars_ + 1);
        h[0] = degree_ - total_degree(mono);
        std::copy(mono.begin(), mono.end(), h.begin() + 1);
        hterms[std::move(h)] = coeff;
    }
    return Polynomial(n_vars_ + 1, degree_, true, std::move(hterms));
}

bool Polynomial::operator==(const Polynomial& other) const {
    return n_vars_ == other.n_vars_ && degree_ == other.degree_ &&
           homogeneous_ == other.homogeneous_ && terms_ == other.terms_;
}

double weyl_inner(const Polynomial& g, const Polynomial& h) {
    if (!g.is_homogeneous() || !h.is_homogeneous())
        throw input_error("Weyl inner product requires homogeneous polynomials");
    if (g.degree() != h.degree() || g.n_vars() != h.n_vars())
        throw input_error("Weyl inner product requires equal degree and variable count");
    // Iterate the sparser side; only shared monomials contribute.
    const auto& a = g.terms().size() <= h.terms().size() ? g : h;
    const auto& b = g.terms().size() <= h.terms().size() ? h : g;
    double sum = 0.0;
    for (const auto& [mono, ca] : a.terms()) {
        auto it = b.terms().find(mono);
        if (it == b.terms().end()) continue;
        sum += ca * it->second / multinomial(mono);
    }
    return sum;
}

double weyl_norm(const Polynomial& p) {
    const Polynomial& h = p.is_homogeneous() ? p : p.homogenized();
    if (!p.is_homogeneous()) return std::sqrt(weyl_inner(h, h));
    return std::sqrt(weyl_inner(p, p));
}

PolyTuple::PolyTuple(std::vector<Polynomial> polys) : polys_(std::move(polys)) {
    if (polys_.empty()) throw input_error("polynomial tuple must be nonempty");
    homogeneous_ = polys_.front().is_homogeneous();
    for (const auto& p : polys_) {
        if (p.n_vars() != polys_.front().n_vars())
            throw input_error("tuple components disagree on variable count");
        if (p.is_homogeneous() != homogeneous_)
            throw input_error("tuple mixes homogeneous and affine components");
        if (p.degree() < 1) throw input_error("tuple component has degree < 1");
    }
}

std::vector<unsigned> PolyTuple::degrees() const {
    std::vector<unsigned> d;
    d.reserve(polys_.size());
    for (const auto& p : polys_) d.push_back(p.degree());
    return d;
}

unsigned PolyTuple::max_degree() const {
    unsigned d = 1;
    for (const auto& p : polys_) d = std::max(d, p.degree());
    return d;
}

std::uint64_t PolyTuple::coefficient_space_dim() const {
    std::uint64_t total = 0;
    for (const auto& p : polys_) {
        // C(n + d, d) with n the affine variable count.
        std::uint64_t n = p.n_vars();
        cpp_int c = 1;
        for (unsigned j = 1; j <= p.degree(); ++j) {
            c *= n + j;
            c /= j;
        }
        total += c.convert_to<std::uint64_t>();
    }
    return total;
}

double weyl_norm_tuple(const PolyTuple& f) {
    double sum = 0.0;
    for (const auto& p : f.polys()) {
        double nrm = weyl_norm(p);
        sum += nrm * nrm;
    }
    return std::sqrt(sum);
}

PolyTuple homogenize_tuple(const PolyTuple& p) {
    if (p.is_homogeneous()) throw input_error("tuple is already homogeneous");
    double norm = weyl_norm_tuple(p);
    if (norm == 0.0) throw input_error("cannot homogenize the zero tuple (norm is 0)");
    std::vector<Polynomial> comps;
    comps.reserve(p.size() + 1);
    Monomial x0(p.n_vars() + 1, 0u);
    x0[0] = 1;
    comps.emplace_back(p.n_vars() + 1, 1u, true, Polynomial::TermMap{{x0, norm}});
    for (const auto& comp : p.polys()) comps.push_back(comp.homogenized());
    return PolyTuple(std::move(comps));
}

PolyTuple scale_tuple(const PolyTuple& p, double lambda) {
    std::vector<Polynomial> comps;
    comps.reserve(p.size());
    for (const auto& comp : p.polys()) {
        Polynomial::TermMap terms;
        for (const auto& [mono, coeff] : comp.terms()) terms[mono] = lambda * coeff;
        comps.emplace_back(comp.n_vars(), comp.degree(), comp.is_homogeneous(), std::move(terms));
    }
    return PolyTuple(std::move(comps));
}

std::string to_string(const Polynomial& p, const std::vector<std::string>& var_names) {
    if (var_names.size() != p.n_vars())
        throw input_error("variable name list has wrong length");
    if (p.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [mono, coeff] : p.terms()) {
        double c = coeff;
        if (first) {
            if (c < 0) {
                out << "-";
                c = -c;
            }
        } else {
            out << (c < 0 ? " - " : " + ");
            c = std::fabs(c);
        }
        first = false;
        bool has_var = total_degree(mono) > 0;
        std::ostringstream num;
        num.precision(17);
        num << c;
        if (!has_var || num.str() != "1") out << num.str();
        for (std::size_t j = 0; j < mono.size(); ++j) {
            if (mono[j] == 0) continue;
            out << var_names[j];
            if (mono[j] > 1) out << "^" << mono[j];
        }
    }
    return out.str();
}

} // namespace homsa
