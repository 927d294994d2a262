#include "homsa/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "homsa/cech.hpp"
#include "homsa/condition.hpp"
#include "homsa/errors.hpp"
#include "homsa/homology.hpp"
#include "homsa/parallel.hpp"
#include "homsa/parser.hpp"
#include "homsa/pipeline.hpp"
#include "homsa/sampling.hpp"
#include "homsa/sphere_grid.hpp"

namespace homsa {

namespace {

struct Checker {
    SuiteResult result;

    explicit Checker(std::string name) { result.name = std::move(name); }

    void check(bool ok, const std::string& what) {
        if (ok) {
            ++result.passed;
            result.lines.push_back("  [ok] " + what);
        } else {
            ++result.failed;
            result.lines.push_back("  [FAIL] " + what);
        }
    }

    void note(const std::string& what) { result.lines.push_back("  " + what); }
};

class Rng {
public:
    explicit Rng(std::uint64_t seed) : rng_(seed) {}

    double uniform01() { return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    std::uint64_t integer(std::uint64_t bound) { return rng_() % bound; }

    double normal() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        double u1 = uniform01(), u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1 + 1e-300));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    std::vector<double> unit_vector(std::size_t dim) {
        std::vector<double> v(dim);
        double norm2 = 0.0;
        for (auto& x : v) {
            x = normal();
            norm2 += x * x;
        }
        double inv = 1.0 / std::sqrt(norm2);
        for (auto& x : v) x *= inv;
        return v;
    }

private:
    std::mt19937_64 rng_;
    bool have_ = false;
    double spare_ = 0.0;
};

// --- polynomial generators -------------------------------------------------

std::vector<Monomial> monomials_of_degree(std::size_t n_vars, unsigned degree, bool exact) {
    std::vector<Monomial> out;
    Monomial current(n_vars, 0u);
    // enumerate exponent vectors with total degree <= degree (or == if exact)
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t var, unsigned left) {
        if (var + 1 == n_vars) {
            current[var] = exact ? left : 0;
            if (exact) {
                out.push_back(current);
            } else {
                for (unsigned e = 0; e <= left; ++e) {
                    current[var] = e;
                    out.push_back(current);
                }
            }
            return;
        }
        for (unsigned e = 0; e <= left; ++e) {
            current[var] = e;
            rec(var + 1, left - e);
        }
    };
    rec(0, degree);
    return out;
}

// Homogeneous polynomial with i.i.d. N(0,1) raw coefficients.
Polynomial random_homogeneous(Rng& rng, std::size_t n_vars, unsigned degree) {
    Polynomial::TermMap terms;
    for (const Monomial& mono : monomials_of_degree(n_vars, degree, true))
        terms[mono] = rng.normal();
    return Polynomial(n_vars, degree, true, std::move(terms));
}

// Affine polynomial drawn standard Gaussian with respect to the Weyl inner
// product: coefficient of X^alpha is N(0,1) * sqrt(multinomial(d; alpha^h)).
Polynomial random_weyl_affine(Rng& rng, std::size_t n_vars, unsigned degree) {
    Polynomial::TermMap terms;
    for (const Monomial& mono : monomials_of_degree(n_vars, degree, false)) {
        Monomial lifted(n_vars + 1);
        lifted[0] = degree - total_degree(mono);
        std::copy(mono.begin(), mono.end(), lifted.begin() + 1);
        terms[mono] = rng.normal() * std::sqrt(multinomial(lifted));
    }
    return Polynomial(n_vars, degree, false, std::move(terms));
}

PolyTuple random_weyl_tuple(Rng& rng, std::size_t n_vars, const std::vector<unsigned>& degrees) {
    std::vector<Polynomial> polys;
    for (unsigned d : degrees) polys.push_back(random_weyl_affine(rng, n_vars, d));
    return PolyTuple(std::move(polys));
}

// --- polynomial composition (test-only, for orthogonal invariance) ---------

Polynomial::TermMap multiply_terms(const Polynomial::TermMap& a, const Polynomial::TermMap& b) {
    Polynomial::TermMap out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            Monomial m(ma.size());
            for (std::size_t j = 0; j < m.size(); ++j) m[j] = ma[j] + mb[j];
            out[m] += ca * cb;
        }
    return out;
}

// f(u x) for an orthogonal matrix u (rows index the substituted forms).
Polynomial compose_linear(const Polynomial& f, const Eigen::MatrixXd& u) {
    std::size_t n = f.n_vars();
    Polynomial::TermMap acc; // result terms
    for (const auto& [mono, coeff] : f.terms()) {
        Polynomial::TermMap prod{{Monomial(n, 0u), coeff}};
        for (std::size_t var = 0; var < n; ++var) {
            for (unsigned e = 0; e < mono[var]; ++e) {
                Polynomial::TermMap linear;
                for (std::size_t j = 0; j < n; ++j) {
                    if (u(var, j) == 0.0) continue;
                    Monomial m(n, 0u);
                    m[j] = 1;
                    linear[m] = u(var, j);
                }
                prod = multiply_terms(prod, linear);
            }
        }
        for (const auto& [m, c] : prod) acc[m] += c;
    }
    for (auto it = acc.begin(); it != acc.end();) {
        if (it->second == 0.0)
            it = acc.erase(it);
        else
            ++it;
    }
    return Polynomial(n, f.degree(), f.is_homogeneous(), std::move(acc));
}

Eigen::MatrixXd random_orthogonal(Rng& rng, std::size_t n) {
    Eigen::MatrixXd g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (std::size_t j = 0; j < n; ++j)
        if (r(j, j) < 0) q.col(j) *= -1.0;
    return q;
}

// --- suite: weyl ------------------------------------------------------------

SuiteResult suite_weyl(std::uint64_t seed) {
    Checker c("weyl");
    Rng rng(seed);

    bool invariance_ok = true;
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 2 + rng.integer(2);      // 2..3 variables
        unsigned d = 1 + static_cast<unsigned>(rng.integer(3)); // degree 1..3
        Polynomial f = random_homogeneous(rng, n, d);
        Polynomial g = random_homogeneous(rng, n, d);
        Eigen::MatrixXd u = random_orthogonal(rng, n);
        double lhs = weyl_inner(f, g);
        double rhs = weyl_inner(compose_linear(f, u), compose_linear(g, u));
        if (std::fabs(lhs - rhs) > 1e-8 * (1.0 + std::fabs(lhs))) invariance_ok = false;
    }
    c.check(invariance_ok, "Weyl inner product is orthogonally invariant (20 random pairs)");

    bool dehom_ok = true;
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 1 + rng.integer(3);
        unsigned d = 1 + static_cast<unsigned>(rng.integer(3));
        Polynomial p = random_weyl_affine(rng, n, d);
        Polynomial ph = p.homogenized();
        std::vector<double> x(n), lifted(n + 1);
        lifted[0] = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            x[j] = rng.uniform(-2.0, 2.0);
            lifted[j + 1] = x[j];
        }
        double a = p.evaluate(x), b = ph.evaluate(lifted);
        if (std::fabs(a - b) > 1e-9 * (1.0 + std::fabs(a))) dehom_ok = false;
    }
    c.check(dehom_ok, "evaluate(homogenize(p), (1, x)) = evaluate(p, x) (50 random cases)");

    bool grad_ok = true;
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 1 + rng.integer(3);
        unsigned d = 1 + static_cast<unsigned>(rng.integer(3));
        Polynomial p = random_weyl_affine(rng, n, d);
        std::vector<double> x(n);
        for (auto& v : x) v = rng.uniform(-1.0, 1.0);
        std::vector<double> grad = p.gradient(x);
        const double h = 1e-5;
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<double> xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            double fd = (p.evaluate(xp) - p.evaluate(xm)) / (2.0 * h);
            if (std::fabs(fd - grad[j]) > 1e-6 * (1.0 + std::fabs(grad[j]))) grad_ok = false;
        }
    }
    c.check(grad_ok, "gradient matches central finite differences (step 1e-5)");

    bool scale_ok = true;
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 1 + rng.integer(3);
        PolyTuple p = random_weyl_tuple(rng, n, {1 + static_cast<unsigned>(rng.integer(3)),
                                                 1 + static_cast<unsigned>(rng.integer(3))});
        double lambda = rng.uniform(-3.0, 3.0);
        double a = weyl_norm_tuple(scale_tuple(p, lambda));
        double b = std::fabs(lambda) * weyl_norm_tuple(p);
        if (std::fabs(a - b) > 1e-12 * (1.0 + b)) scale_ok = false;
    }
    c.check(scale_ok, "weyl_norm_tuple(lambda f) = |lambda| weyl_norm_tuple(f)");

    return c.result;
}

// --- suite: grid ------------------------------------------------------------

std::vector<std::vector<double>> brute_force_grid(const GridSpec& spec) {
    std::size_t dim = spec.ambient_dim;
    std::int64_t m = static_cast<std::int64_t>(spec.side());
    std::vector<std::vector<double>> out;
    std::vector<std::int64_t> coords(dim, -m);
    while (true) {
        std::int64_t maxabs = 0;
        for (std::int64_t v : coords) maxabs = std::max<std::int64_t>(maxabs, std::llabs(v));
        if (maxabs == m) {
            double norm2 = 0.0;
            for (std::int64_t v : coords) norm2 += static_cast<double>(v) * v;
            double inv = 1.0 / std::sqrt(norm2);
            std::vector<double> pt(dim);
            for (std::size_t j = 0; j < dim; ++j) pt[j] = coords[j] * inv;
            out.push_back(std::move(pt));
        }
        std::size_t j = dim;
        bool carried = false;
        while (j-- > 0) {
            if (coords[j] < m) {
                ++coords[j];
                carried = true;
                break;
            }
            coords[j] = -m;
        }
        if (!carried) break;
    }
    return out;
}

SuiteResult suite_grid(std::uint64_t seed) {
    Checker c("grid");

    {
        GridSpec spec = GridSpec::for_sphere(2, 0);
        std::vector<std::vector<double>> pts;
        for_each_grid_point(spec, 0, spec.point_count(),
                            [&](std::uint64_t, std::span<const double> p) {
                                pts.emplace_back(p.begin(), p.end());
                            });
        bool angles_ok = pts.size() == 8;
        for (const auto& p : pts) {
            double angle = std::atan2(p[1], p[0]);
            double k = angle / (M_PI / 4.0);
            if (std::fabs(k - std::round(k)) > 1e-12) angles_ok = false;
        }
        c.check(angles_ok, "n=1, level 0: 8 unit vectors at angles k pi/4");
        c.check(GridSpec::for_sphere(2, 1).point_count() == 16, "n=1, level 1: 16 points");
    }

    bool match_ok = true, distinct_ok = true, count_ok = true, norm_ok = true;
    for (std::size_t dim = 2; dim <= 3; ++dim) {
        for (unsigned level = 0; level <= 3; ++level) {
            GridSpec spec = GridSpec::for_sphere(dim, level);
            auto oracle = brute_force_grid(spec);
            std::vector<std::vector<double>> pts;
            for_each_grid_point(spec, 0, spec.point_count(),
                                [&](std::uint64_t, std::span<const double> p) {
                                    pts.emplace_back(p.begin(), p.end());
                                });
            if (pts.size() != spec.point_count() || oracle.size() != pts.size()) count_ok = false;
            for (const auto& p : pts) {
                double norm2 = 0.0;
                for (double v : p) norm2 += v * v;
                if (std::fabs(std::sqrt(norm2) - 1.0) > 1e-12) norm_ok = false;
            }
            auto sorted_pts = pts;
            std::sort(sorted_pts.begin(), sorted_pts.end());
            std::sort(oracle.begin(), oracle.end());
            if (sorted_pts != oracle) match_ok = false;
            if (std::adjacent_find(sorted_pts.begin(), sorted_pts.end()) != sorted_pts.end())
                distinct_ok = false;
        }
    }
    c.check(count_ok, "point count equals (2M+1)^(n+1) - (2M-1)^(n+1) (n <= 2, level <= 3)");
    c.check(match_ok, "streamed points equal exhaustive enumeration (n <= 2, level <= 3)");
    c.check(distinct_ok, "no normalization collisions (n <= 2, level <= 3)");
    c.check(norm_ok, "every point has unit norm within 1e-12");

    // split consistency: three arbitrary ranges concatenate to the full stream
    {
        GridSpec spec = GridSpec::for_sphere(3, 2);
        std::uint64_t total = spec.point_count();
        std::vector<std::vector<double>> whole, pieces;
        for_each_grid_point(spec, 0, total, [&](std::uint64_t, std::span<const double> p) {
            whole.emplace_back(p.begin(), p.end());
        });
        std::uint64_t cut1 = total / 3, cut2 = 2 * total / 3 + 1;
        for (auto [b, e] : {std::pair<std::uint64_t, std::uint64_t>{0, cut1},
                            {cut1, cut2},
                            {cut2, total}})
            for_each_grid_point(spec, b, e, [&](std::uint64_t, std::span<const double> p) {
                pieces.emplace_back(p.begin(), p.end());
            });
        c.check(whole == pieces, "range-split streams concatenate to the full stream");
    }

    // Monte-Carlo covering radius (also acceptance criterion 8)
    bool covering_ok = true;
    for (std::size_t dim = 2; dim <= 4; ++dim) {
        for (unsigned level = 0; level <= 6; ++level) {
            GridSpec spec = GridSpec::for_sphere(dim, level);
            double worst = covering_radius_check(spec, 10000, seed + dim * 100 + level);
            if (worst > spec.radius()) {
                covering_ok = false;
                std::ostringstream msg;
                msg << "covering violated: n=" << dim - 1 << " level=" << level
                    << " worst=" << worst;
                c.note(msg.str());
            }
        }
    }
    c.check(covering_ok, "covering radius <= 2^-level for n <= 3, level <= 6 (1e4 samples each)");

    return c.result;
}

// --- suite: condition -------------------------------------------------------

PolyTuple tuple_x0(std::size_t ambient) {
    Monomial x0(ambient, 0u);
    x0[0] = 1;
    return PolyTuple({Polynomial(ambient, 1, true, {{x0, 1.0}})});
}

SuiteResult suite_condition(std::uint64_t seed, unsigned threads) {
    Checker c("condition");
    Rng rng(seed);

    // kappa((X0)) = 1 everywhere, checked at >= 1e4 grid points on S^2.
    {
        PolyTuple f = tuple_x0(3);
        GridSpec spec = GridSpec::for_sphere(3, 4);
        bool exact = spec.point_count() >= 10000;
        std::size_t bad = 0;
        for_each_grid_point(spec, 0, spec.point_count(),
                            [&](std::uint64_t, std::span<const double> p) {
                                if (std::fabs(kappa_at(f, p) - 1.0) > 1e-9) ++bad;
                            });
        c.check(exact && bad == 0,
                "kappa((X0)) = 1 within 1e-9 at " + std::to_string(spec.point_count()) +
                    " grid points");
    }

    // mu oracles
    {
        PolyTuple f = tuple_x0(3);
        std::vector<double> equator{0.0, 1.0, 0.0};
        c.check(std::fabs(mu_condition(f, equator) - 1.0) <= 1e-12,
                "mu((X0)) = 1 on the equator");

        Polynomial cone(3, 2, true,
                        {{Monomial{2, 0, 0}, -1.0}, {Monomial{0, 2, 0}, 1.0},
                         {Monomial{0, 0, 2}, 1.0}});
        PolyTuple fc({cone});
        std::vector<double> x{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0};
        c.check(std::fabs(mu_condition(fc, x) - std::sqrt(1.5)) <= 1e-9,
                "mu((X1^2+X2^2-X0^2)) = sqrt(3/2) at (1/sqrt2, 1/sqrt2, 0)");
        std::vector<double> pole{0.0, 0.0, 1.0};
        ConditionAtPoint at_pole = condition_at(fc, pole);
        c.check(std::isinf(at_pole.mu) &&
                    std::fabs(at_pole.kappa - std::sqrt(3.0)) <= 1e-9,
                "kappa((X1^2+X2^2-X0^2)) = sqrt(3) at the pole (mu infinite)");

        // overdetermined: q = n+1 forces mu = inf, kappa = ||f||/||f(x)||
        Monomial e0(2, 0u), e1(2, 0u);
        e0[0] = 1;
        e1[1] = 1;
        PolyTuple over({Polynomial(2, 1, true, {{e0, 1.0}}),
                        Polynomial(2, 1, true, {{e1, 1.0}}),
                        Polynomial(2, 1, true, {{e0, 1.0}, {e1, 1.0}})});
        std::vector<double> px{1.0, 0.0};
        ConditionAtPoint o = condition_at(over, px);
        c.check(std::isinf(o.mu) && std::fabs(o.kappa - 1.0 / o.residual) <= 1e-9,
                "q = n+1: mu = inf and kappa = ||f||/||f(x)||");
    }

    // kappa >= 1 and the defining identity at random tuples/points
    {
        bool ge1 = true, identity_ok = true, prop35_ok = true;
        for (int trial = 0; trial < 200; ++trial) {
            std::size_t ambient = 3;
            std::size_t q = 1 + rng.integer(3);
            std::vector<Polynomial> polys;
            for (std::size_t i = 0; i < q; ++i)
                polys.push_back(
                    random_homogeneous(rng, ambient, 1 + static_cast<unsigned>(rng.integer(3))));
            PolyTuple f{std::move(polys)};
            std::vector<double> x = rng.unit_vector(ambient);
            ConditionAtPoint cp = condition_at(f, x);
            if (!(cp.kappa >= 1.0 - 1e-9)) ge1 = false;
            if (!std::isinf(cp.kappa)) {
                double inv_k2 = 1.0 / (cp.kappa * cp.kappa);
                double sum = cp.residual * cp.residual +
                             (std::isinf(cp.mu) ? 0.0 : 1.0 / (cp.mu * cp.mu));
                if (std::fabs(inv_k2 - sum) > 1e-9 * (1.0 + inv_k2)) identity_ok = false;
            }
            if (std::sqrt(2.0) * cp.kappa * cp.residual < 1.0) {
                if (!(cp.mu <= std::sqrt(2.0) * cp.kappa * (1.0 + 1e-9))) prop35_ok = false;
                if (cp.sigma_min && !(*cp.sigma_min > 0.0)) prop35_ok = false;
            }
        }
        c.check(ge1, "kappa >= 1 at 200 random tuple/point pairs");
        c.check(identity_ok, "1/kappa^2 = 1/mu^2 + residual^2 within 1e-9");
        c.check(prop35_ok, "mu <= sqrt(2) kappa whenever sqrt(2) kappa residual < 1");
    }

    // Lipschitz spot-check for 1/kappa
    {
        bool ok = true;
        for (int trial = 0; trial < 100; ++trial) {
            unsigned d = 1 + static_cast<unsigned>(rng.integer(3));
            PolyTuple f({random_homogeneous(rng, 3, d)});
            std::vector<double> x = rng.unit_vector(3), y = rng.unit_vector(3);
            double kx = kappa_at(f, x), ky = kappa_at(f, y);
            double dist = 0.0;
            for (std::size_t j = 0; j < 3; ++j) dist += (x[j] - y[j]) * (x[j] - y[j]);
            dist = std::sqrt(dist);
            double lhs = std::fabs(1.0 / kx - 1.0 / ky);
            if (lhs > 2.0 * d * dist + 1e-6) ok = false;
        }
        c.check(ok, "|1/kappa(f,x) - 1/kappa(f,y)| <= 2 D |x-y| + 1e-6 (100 random pairs)");
    }

    c.check(subset_scan_count(2, 2) == 3 && subset_scan_count(3, 2) == 7 &&
                subset_scan_count(5, 1) == 15,
            "subset scan covers sum of C(q,i), i <= min(q, n+1)");

    // estimate on (X0): K in [0.99, 1], terminates
    {
        EstimateOutcome outcome = estimate_kappa_bar(tuple_x0(2), 0.01, 1.0 / 0.0, 24, threads);
        c.check(outcome.status == EstimateStatus::OK && outcome.K >= 0.99 &&
                    outcome.K <= 1.0 + 1e-12,
                "estimate((X0)), rho=0.01: K in [0.99, 1], stopped at level " +
                    std::to_string(outcome.final_level));
        EstimateOutcome fail = estimate_kappa_bar(tuple_x0(2), 0.01, 0.5, 24, threads);
        c.check(fail.status == EstimateStatus::FAIL && fail.K >= 0.5,
                "estimate((X0)) with B = 0.5 fails with B <= K");
    }

    // kappa-bar((X0, X1)) = sqrt(2) exactly (symbolic oracle): sandwich check
    {
        Monomial e0(3, 0u), e1(3, 0u);
        e0[0] = 1;
        e1[1] = 1;
        PolyTuple f({Polynomial(3, 1, true, {{e0, 1.0}}), Polynomial(3, 1, true, {{e1, 1.0}})});
        double kbar = std::sqrt(2.0);
        double k3 = kappa_bar_ell(f, 3, threads);
        EstimateOutcome est = estimate_kappa_bar(f, 0.05, 1.0 / 0.0, 24, threads);
        c.check(k3 <= kbar + 1e-12 && est.K <= kbar + 1e-12 && est.K >= 0.95 * kbar,
                "kappa_bar_ell <= K <= kappa_bar on (X0, X1) with kappa_bar = sqrt(2)");
    }

    // ill-posed input aborts with a diagnosable failure
    {
        Monomial x0sq(2, 0u);
        x0sq[0] = 2;
        PolyTuple f({Polynomial(2, 2, true, {{x0sq, 1.0}})});
        bool threw = false;
        try {
            estimate_kappa_bar(f, 0.01, 1.0 / 0.0, 10, threads);
        } catch (const resource_error&) {
            threw = true;
        }
        c.check(threw, "(X0^2) aborts estimation with an ill-posed diagnostic");
    }

    // acceptance criterion 3: scale invariance of the affine estimate
    {
        bool ok = true;
        int done = 0, attempts = 0;
        while (done < 20 && attempts < 60) {
            ++attempts;
            std::size_t q = 1 + rng.integer(2);
            std::vector<unsigned> degrees;
            for (std::size_t i = 0; i < q; ++i)
                degrees.push_back(1 + static_cast<unsigned>(rng.integer(3)));
            PolyTuple p = random_weyl_tuple(rng, 2, degrees);
            try {
                EstimateOutcome base = kappa_bar_aff(p, 0.5, 1e8, 8, threads);
                for (double lambda : {1e-3, 1.0, 1e3}) {
                    EstimateOutcome scaled =
                        kappa_bar_aff(scale_tuple(p, lambda), 0.5, 1e8, 8, threads);
                    if (std::fabs(scaled.K - base.K) > 1e-8 * base.K) ok = false;
                }
                ++done;
            } catch (const resource_error&) {
                continue; // redraw ill-conditioned samples deterministically
            }
        }
        c.check(ok && done == 20,
                "kappa_bar_aff(p) = kappa_bar_aff(lambda p) to 1e-8 relative (20 tuples, "
                "lambda in {1e-3, 1, 1e3})");
    }

    // The parabola separates the two condition notions: its bare
    // homogenization is well-conditioned on the sphere, but the affine
    // condition is infinite (the curve is tangent to the hyperplane at
    // infinity, so small perturbations change the topology).
    {
        ProblemInput parabola = parse("poly p = y - x^2; formula (p = 0)");
        PolyTuple bare({parabola.tuple[0].homogenized()});
        double k3 = kappa_bar_ell(bare, 3, threads);
        c.check(std::isfinite(k3) && k3 >= 1.0,
                "bare homogenization of y - x^2 has finite kappa on grids");
        bool diverged = false;
        try {
            kappa_bar_aff(parabola.tuple, 0.25, 1e9, 14, threads);
        } catch (const resource_error&) {
            diverged = true;
        }
        c.check(diverged, "kappa_bar_aff(y - x^2) aborts: affinely ill-posed");
        ProblemInput circle = parse("poly p = x^2 + y^2 - 1; formula (p = 0)");
        EstimateOutcome est2 = kappa_bar_aff(circle.tuple, 0.25, 1e9, 14, threads);
        c.check(est2.status == EstimateStatus::OK && std::isfinite(est2.K),
                "circle x^2 + y^2 - 1: finite kappa_bar_aff estimate");
    }

    return c.result;
}

// --- suite: sampling --------------------------------------------------------

LaxFormula random_formula(Rng& rng, std::size_t q, std::size_t max_atoms) {
    std::size_t n_atoms = 1 + rng.integer(max_atoms);
    std::function<LaxFormula(std::size_t)> build = [&](std::size_t atoms) -> LaxFormula {
        if (atoms == 1) {
            Atom a{rng.integer(q), static_cast<Relation>(rng.integer(3))};
            return LaxFormula::atom(a);
        }
        std::size_t left = 1 + rng.integer(atoms - 1);
        LaxFormula a = build(left), b = build(atoms - left);
        if (rng.integer(2) == 0) return LaxFormula::conjunction({a, b});
        return LaxFormula::disjunction({a, b});
    };
    return build(n_atoms);
}

SuiteResult suite_sampling(std::uint64_t seed, unsigned threads) {
    Checker c("sampling");
    Rng rng(seed);

    // frozen oracle: f = (X0) on S^1, level 2, X^= is the |x0| < 1/4 band
    {
        PolyTuple f = tuple_x0(2);
        AtomicClouds clouds = atomic_clouds(f, 2, {}, 50000000, threads);
        PointCloud eq = clouds.cloud(0, Relation::EQ);
        GridSpec spec = GridSpec::for_sphere(2, 2);
        std::vector<std::uint32_t> oracle;
        std::uint32_t next = 0;
        bool table_matches_filter = true;
        for_each_grid_point(spec, 0, spec.point_count(),
                            [&](std::uint64_t, std::span<const double> p) {
                                // every point touches some atomic neighborhood of (X0)
                                if (next >= clouds.table->size()) {
                                    table_matches_filter = false;
                                    return;
                                }
                                if (std::fabs(p[0]) < 0.25) oracle.push_back(next);
                                ++next;
                            });
        c.check(table_matches_filter && eq.members == oracle,
                "f = (X0), level 2: X^= equals the direct |x0| < 1/4 filter");
        PointCloud le = clouds.cloud(0, Relation::LE), ge = clouds.cloud(0, Relation::GE);
        c.check(cloud_intersection(le, ge).members == eq.members,
                "X^<= intersect X^>= = X^= by construction");
        c.check(cloud_union(le, ge).members.size() == clouds.table->size(),
                "X^<= union X^>= covers the whole table");
    }

    // eq:inter identity on random formulas/tuples (acceptance criterion 9)
    {
        bool ok = true;
        for (int trial = 0; trial < 50 && ok; ++trial) {
            std::size_t q = 1 + rng.integer(3);
            std::vector<Polynomial> polys;
            for (std::size_t i = 0; i < q; ++i)
                polys.push_back(
                    random_homogeneous(rng, 3, 1 + static_cast<unsigned>(rng.integer(2))));
            PolyTuple f{std::move(polys)};
            LaxFormula phi = random_formula(rng, q, 6);
            unsigned level = 1 + static_cast<unsigned>(rng.integer(5));
            AtomicClouds clouds =
                atomic_clouds(f, level, phi.used_polys(), 50000000, threads);
            PointCloud folded = cloud_for_formula(clouds, phi);
            // brute-force filter of the full grid
            GridSpec spec = GridSpec::for_sphere(3, level);
            double tol = std::sqrt(static_cast<double>(f.max_degree())) * spec.radius();
            std::vector<double> norms;
            for (const auto& poly : f.polys()) norms.push_back(weyl_norm(poly));
            std::vector<std::vector<double>> expected;
            for_each_grid_point(spec, 0, spec.point_count(),
                                [&](std::uint64_t, std::span<const double> p) {
                                    if (in_open_algebraic_neighborhood(f, phi, p, tol, norms))
                                        expected.emplace_back(p.begin(), p.end());
                                });
            if (expected.size() != folded.members.size()) {
                ok = false;
                break;
            }
            for (std::size_t i = 0; i < folded.members.size(); ++i) {
                auto pt = folded.table->point(folded.members[i]);
                for (std::size_t j = 0; j < pt.size(); ++j)
                    if (pt[j] != expected[i][j]) ok = false;
            }
        }
        c.check(ok, "cloud_for_formula equals direct grid filtering (50 random cases)");
    }

    // circle instance for the geometric inclusions
    ProblemInput circle = parse("poly p = x^2 + y^2 - 1; formula (p = 0)");
    PolyTuple f = homogenize_tuple(circle.tuple);
    LaxFormula phi_h = homogenized_formula(circle.formula);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    // eq:Prop_c: spherical r-neighborhood of S(f, phi) sits inside the open
    // algebraic neighborhood at tolerance sqrt(D) r (criterion 7, part 1)
    {
        double r = 0.05;
        double tol = std::sqrt(static_cast<double>(f.max_degree())) * r;
        std::vector<double> norms;
        for (const auto& poly : f.polys()) norms.push_back(weyl_norm(poly));
        std::size_t violations = 0;
        for (int s = 0; s < 10000; ++s) {
            double theta = rng.uniform(0.0, 2.0 * M_PI);
            std::vector<double> z{inv_sqrt2, inv_sqrt2 * std::cos(theta),
                                  inv_sqrt2 * std::sin(theta)};
            // random tangent direction
            std::vector<double> v = rng.unit_vector(3);
            double dot = 0.0;
            for (int j = 0; j < 3; ++j) dot += v[j] * z[j];
            double vn = 0.0;
            for (int j = 0; j < 3; ++j) {
                v[j] -= dot * z[j];
                vn += v[j] * v[j];
            }
            vn = std::sqrt(vn);
            if (vn < 1e-12) continue;
            double u = rng.uniform(0.0, r * 0.999);
            std::vector<double> zp(3);
            for (int j = 0; j < 3; ++j) zp[j] = std::cos(u) * z[j] + std::sin(u) * v[j] / vn;
            if (!in_open_algebraic_neighborhood(f, phi_h, zp, tol, norms)) ++violations;
        }
        c.check(violations == 0,
                "U_S(S(f,Phi), r) inside the open algebraic neighborhood at sqrt(D) r "
                "(1e4 perturbed samples, zero violations)");
    }

    // Sampling Theorem bound on the circle with a measured K (criterion 7, part 2)
    {
        EstimateOutcome est = estimate_kappa_bar(f, 0.3, 1.0 / 0.0, 14, threads);
        double kappa_upper = est.K / (1.0 - 0.3);
        double big_d = static_cast<double>(f.max_degree());
        unsigned level = 1;
        while (13.0 * big_d * big_d * kappa_upper * kappa_upper *
                   std::ldexp(1.0, -static_cast<int>(level)) >=
               1.0)
            ++level;
        double r_level = std::ldexp(1.0, -static_cast<int>(level));
        // X_ell(f, Phi) by direct grid filtering (the formula cloud is a thin
        // band; the atomic GE cloud would be half the sphere at this level)
        double tol = std::sqrt(big_d) * r_level;
        std::vector<double> norms;
        for (const auto& poly : f.polys()) norms.push_back(weyl_norm(poly));
        GridSpec spec = GridSpec::for_sphere(3, level);
        unsigned workers = resolve_threads(threads);
        std::vector<std::vector<double>> chunk_pts(workers);
        parallel_chunks(spec.point_count(), workers,
                        [&](unsigned chunk, std::uint64_t begin, std::uint64_t end) {
                            for_each_grid_point(
                                spec, begin, end,
                                [&](std::uint64_t, std::span<const double> p) {
                                    if (in_open_algebraic_neighborhood(f, phi_h, p, tol, norms))
                                        chunk_pts[chunk].insert(chunk_pts[chunk].end(),
                                                                p.begin(), p.end());
                                });
                        });
        std::vector<double> cloud;
        for (auto& part : chunk_pts)
            cloud.insert(cloud.end(), part.begin(), part.end());
        std::size_t n_cloud = cloud.size() / 3;
        // distance from a point to the circle {x0 = 1/sqrt2, |(x1,x2)| = 1/sqrt2}
        auto dist_to_set = [&](const double* p) {
            double plane = std::hypot(p[1], p[2]);
            if (plane < 1e-15) return 2.0;
            double dx1 = p[1] / plane * inv_sqrt2 - p[1];
            double dx2 = p[2] / plane * inv_sqrt2 - p[2];
            double dx0 = inv_sqrt2 - p[0];
            return std::sqrt(dx0 * dx0 + dx1 * dx1 + dx2 * dx2);
        };
        double sup_cloud = 0.0;
        for (std::size_t i = 0; i < n_cloud; ++i)
            sup_cloud = std::max(sup_cloud, dist_to_set(cloud.data() + 3 * i));
        double sup_set = 0.0;
        for (int s = 0; s < 10000; ++s) {
            double theta = 2.0 * M_PI * s / 10000.0;
            double z[3] = {inv_sqrt2, inv_sqrt2 * std::cos(theta),
                           inv_sqrt2 * std::sin(theta)};
            double best = 4.0;
            for (std::size_t i = 0; i < n_cloud; ++i) {
                const double* p = cloud.data() + 3 * i;
                double d2 = 0.0;
                for (int j = 0; j < 3; ++j) d2 += (p[j] - z[j]) * (p[j] - z[j]);
                best = std::min(best, d2);
            }
            sup_set = std::max(sup_set, std::sqrt(best));
        }
        double hausdorff = std::max(sup_cloud, sup_set);
        double bound = 3.0 * std::sqrt(big_d) * est.K * r_level;
        std::ostringstream msg;
        msg << "Hausdorff bound on the circle: d_H = " << hausdorff << " < " << bound
            << " = 3 sqrt(D) K r_l (level " << level << ", " << n_cloud << " cloud points)";
        c.check(n_cloud > 0 && hausdorff < bound, msg.str());
    }

    return c.result;
}

// --- suite: cech ------------------------------------------------------------

// Independent circumball solve (least squares in the affine hull), used by
// the brute-force oracle.
double oracle_meb_radius(const std::vector<std::vector<double>>& pts) {
    std::size_t n = pts.size(), dim = pts[0].size();
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<std::size_t> sel;
        for (std::size_t j = 0; j < n; ++j)
            if (mask & (1u << j)) sel.push_back(j);
        std::size_t k = sel.size() - 1;
        Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
        if (k > 0) {
            Eigen::MatrixXd u(k, dim);
            Eigen::VectorXd rhs(k);
            for (std::size_t i = 0; i < k; ++i) {
                for (std::size_t j = 0; j < dim; ++j)
                    u(i, j) = pts[sel[i + 1]][j] - pts[sel[0]][j];
                rhs(i) = 0.5 * u.row(i).squaredNorm();
            }
            // minimum-norm least squares keeps the center in the affine hull
            w = u.completeOrthogonalDecomposition().solve(rhs);
        }
        std::vector<double> center(dim);
        for (std::size_t j = 0; j < dim; ++j) center[j] = pts[sel[0]][j] + w(j);
        double radius = 0.0;
        bool on_boundary = true;
        for (std::size_t i = 0; i < sel.size(); ++i) {
            double d2 = 0.0;
            for (std::size_t j = 0; j < dim; ++j)
                d2 += (pts[sel[i]][j] - center[j]) * (pts[sel[i]][j] - center[j]);
            double d = std::sqrt(d2);
            if (i == 0)
                radius = d;
            else if (std::fabs(d - radius) > 1e-9 * (1.0 + radius))
                on_boundary = false;
        }
        if (!on_boundary) continue;
        bool contains_all = true;
        for (const auto& p : pts) {
            double d2 = 0.0;
            for (std::size_t j = 0; j < dim; ++j)
                d2 += (p[j] - center[j]) * (p[j] - center[j]);
            if (std::sqrt(d2) > radius * (1.0 + 1e-9) + 1e-12) contains_all = false;
        }
        if (contains_all) best = std::min(best, radius);
    }
    return best;
}

SuiteResult suite_cech(std::uint64_t seed, unsigned threads) {
    Checker c("cech");
    Rng rng(seed);

    // frozen predicate examples
    {
        std::vector<double> a{0.0, 0.0, 0.0}, b{1.0, 0.0, 0.0};
        c.check(balls_have_common_point({a}, 0.1), "single point: any radius works");
        c.check(!balls_have_common_point({a, b}, 0.5),
                "two points at distance 1, eps = 0.5: open balls just fail to meet");
        c.check(balls_have_common_point({a, b}, 0.5000001),
                "two points at distance 1, eps slightly above 0.5: balls meet");
        std::vector<double> t0{0.0, 0.0, 0.0}, t1{1.0, 0.0, 0.0},
            t2{0.5, std::sqrt(3.0) / 2.0, 0.0};
        c.check(balls_have_common_point({t0, t1, t2}, 0.6),
                "equilateral side 1: circumradius 1/sqrt(3) < 0.6");
        c.check(!balls_have_common_point({t0, t1, t2}, 0.57),
                "equilateral side 1: circumradius 1/sqrt(3) >= 0.57");
    }

    // brute-force equality on random clouds (acceptance criterion 5) and the
    // lattice identities
    bool build_ok = true, meet_ok = true, join_ok = true, mono_ok = true, meb_ok = true;
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t count = 4 + rng.integer(9); // 4..12 points
        auto table = std::make_shared<PointTable>(3, 0);
        std::vector<std::vector<double>> pts;
        for (std::size_t i = 0; i < count; ++i) {
            std::vector<double> p{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                                  rng.uniform(-1.0, 1.0)};
            table->append(p);
            pts.push_back(p);
        }
        double eps = rng.uniform(0.15, 1.2);
        std::size_t kmax = 3;
        PointCloud whole{table, {}};
        for (std::uint32_t i = 0; i < count; ++i) whole.members.push_back(i);

        SimplicialComplex built = build_cech(whole, eps, kmax, 100000000, threads);
        // oracle: test every subset of size <= kmax+1
        SimplicialComplex oracle(kmax, table->id());
        std::function<void(Face&, std::uint32_t)> rec = [&](Face& face, std::uint32_t start) {
            for (std::uint32_t v = start; v < count; ++v) {
                face.push_back(v);
                std::vector<std::vector<double>> sel;
                for (std::uint32_t idx : face) sel.push_back(pts[idx]);
                double radius = oracle_meb_radius(sel);
                if (radius < eps) {
                    oracle.insert(face);
                    if (face.size() < kmax + 1) rec(face, v + 1);
                }
                face.pop_back();
            }
        };
        Face scratch;
        rec(scratch, 0);
        if (!(built == oracle)) build_ok = false;
        if (!built.is_downward_closed()) build_ok = false;

        // MEB cross-check on the first few subsets
        for (int probe = 0; probe < 5; ++probe) {
            std::size_t sz = 1 + rng.integer(std::min<std::size_t>(count, 5));
            std::vector<std::vector<double>> sel;
            std::set<std::size_t> chosen;
            while (chosen.size() < sz) chosen.insert(rng.integer(count));
            std::vector<std::span<const double>> spans;
            for (std::size_t idx : chosen) {
                sel.push_back(pts[idx]);
                spans.emplace_back(sel.back());
            }
            double welzl_r = min_enclosing_ball_radius(spans, 0.0);
            double oracle_r = oracle_meb_radius(sel);
            if (std::fabs(welzl_r - oracle_r) > 1e-7 * (1.0 + oracle_r)) meb_ok = false;
        }

        // random subclouds for the lattice identities
        PointCloud x1{table, {}}, x2{table, {}};
        for (std::uint32_t i = 0; i < count; ++i) {
            if (rng.integer(2)) x1.members.push_back(i);
            if (rng.integer(2)) x2.members.push_back(i);
        }
        SimplicialComplex c1 = build_cech(x1, eps, kmax, 100000000, threads);
        SimplicialComplex c2 = build_cech(x2, eps, kmax, 100000000, threads);
        SimplicialComplex meet = complex_meet(c1, c2);
        SimplicialComplex inter_cloud =
            build_cech(cloud_intersection(x1, x2), eps, kmax, 100000000, threads);
        if (!(meet == inter_cloud)) meet_ok = false;

        SimplicialComplex join = complex_join(c1, c2);
        SimplicialComplex union_cloud =
            build_cech(cloud_union(x1, x2), eps, kmax, 100000000, threads);
        for (std::size_t dim = 0; dim <= kmax; ++dim)
            for (const Face& face : join.faces(dim))
                if (!union_cloud.contains(face)) join_ok = false;
        if (!join.is_downward_closed()) join_ok = false;

        // monotonicity in eps
        SimplicialComplex bigger = build_cech(whole, eps * 1.5, kmax, 100000000, threads);
        for (std::size_t dim = 0; dim <= kmax; ++dim)
            for (const Face& face : built.faces(dim))
                if (!bigger.contains(face)) mono_ok = false;
    }
    c.check(build_ok, "build_cech equals exhaustive subset enumeration (50 random clouds)");
    c.check(meb_ok, "Welzl radius matches the subset-enumeration circumball oracle");
    c.check(meet_ok, "Cech(X1) meet Cech(X2) = Cech(X1 intersect X2) exactly");
    c.check(join_ok, "Cech(X1) join Cech(X2) inside Cech(X1 union X2), downward closed");
    c.check(mono_ok, "eps <= eps' implies Cech_eps inside Cech_eps'");

    // witness instance where the join containment is strict
    {
        auto table = std::make_shared<PointTable>(3, 0);
        std::vector<double> p0{0.0, 0.0, 0.0}, p1{1.0, 0.0, 0.0};
        table->append(p0);
        table->append(p1);
        PointCloud x1{table, {0}}, x2{table, {1}};
        double eps = 0.9;
        SimplicialComplex join =
            complex_join(build_cech(x1, eps, 1), build_cech(x2, eps, 1));
        SimplicialComplex full = build_cech(cloud_union(x1, x2), eps, 1);
        c.check(!join.contains(Face{0, 1}) && full.contains(Face{0, 1}),
                "join containment is strict on a two-point witness");
    }

    // hexagon: edges between neighbors only, no triangles -> cycle graph
    {
        auto table = std::make_shared<PointTable>(2, 0);
        PointCloud cloud{table, {}};
        for (int k = 0; k < 6; ++k) {
            std::vector<double> p{std::cos(k * M_PI / 3.0), std::sin(k * M_PI / 3.0)};
            cloud.members.push_back(table->append(p));
        }
        SimplicialComplex hex = build_cech(cloud, 0.6, 2, 100000000, threads);
        c.check(hex.face_count(0) == 6 && hex.face_count(1) == 6 && hex.face_count(2) == 0,
                "hexagon at eps = 0.6 gives the cycle graph C_6");
        HomologyGroups groups = homology(hex, 1, threads);
        c.check(groups.groups[0].betti == 1 && groups.groups[1].betti == 1,
                "C_6 has beta_0 = 1, beta_1 = 1");
    }

    // Algorithm Simplicial on f = (X0, X1), Phi = (f_1 = 0) & (f_2 = 0):
    // two thickened points at +-e_2
    {
        Monomial e0(3, 0u), e1(3, 0u);
        e0[0] = 1;
        e1[1] = 1;
        PolyTuple f({Polynomial(3, 1, true, {{e0, 1.0}}), Polynomial(3, 1, true, {{e1, 1.0}})});
        LaxFormula phi = LaxFormula::conjunction(
            {LaxFormula::atom(Atom{0, Relation::EQ}), LaxFormula::atom(Atom{1, Relation::EQ})});
        SimplicialOptions opts;
        opts.ell_override = 4;
        opts.epsilon_override = 0.15;
        opts.threads = threads;
        SimplicialResult result = simplicial(f, phi, std::sqrt(2.0), opts);
        HomologyGroups groups = homology(result.complex, 1, threads);
        c.check(groups.groups[0].betti == 2 && groups.groups[1].betti == 0,
                "simplicial((X0,X1), X0=0 & X1=0): two contractible components");
        // single atom: the folded complex is the atomic complex itself
        SimplicialResult single =
            simplicial(f, LaxFormula::atom(Atom{0, Relation::EQ}), std::sqrt(2.0), opts);
        PointCloud atom_cloud = single.clouds.cloud(0, Relation::EQ);
        SimplicialComplex direct =
            build_cech(atom_cloud, single.epsilon, single.kmax, 100000000, threads);
        c.check(single.complex == direct, "single-atom formula returns the atomic complex");
    }

    // paper parameter window: the chosen (level, epsilon) always satisfy the
    // guarantee inequalities under the estimate precondition
    {
        bool ok = true;
        for (int trial = 0; trial < 200; ++trial) {
            unsigned d = 1 + static_cast<unsigned>(rng.integer(5));
            double kappa = std::exp(rng.uniform(0.0, 10.0));
            SimplicialParameters params = paper_parameters(d, kappa);
            if (!parameter_window_ok(d, kappa / 0.99, params.level, params.epsilon)) ok = false;
        }
        c.check(ok, "paper parameters satisfy the window for kappa_bar <= K/0.99");
    }

    return c.result;
}

// --- suite: snf -------------------------------------------------------------

BigInt determinant(const std::vector<std::vector<BigInt>>& m, std::vector<std::size_t> rows,
                   std::vector<std::size_t> cols) {
    if (rows.size() == 1) return m[rows[0]][cols[0]];
    BigInt det = 0;
    std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        std::vector<std::size_t> sub_cols;
        for (std::size_t t = 0; t < cols.size(); ++t)
            if (t != j) sub_cols.push_back(cols[t]);
        BigInt minor = determinant(m, sub_rows, sub_cols);
        BigInt term = m[rows[0]][cols[j]] * minor;
        det += (j % 2 == 0) ? term : -term;
    }
    return det;
}

BigInt gcd_big(BigInt a, BigInt b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        BigInt t = a % b;
        a = std::move(b);
        b = std::move(t);
    }
    return a;
}

// Determinant-divisor oracle: d_k = gcd(k-minors) / gcd((k-1)-minors).
std::vector<BigInt> minor_gcd_diagonal(const std::vector<std::vector<BigInt>>& m) {
    std::size_t rows = m.size(), cols = m[0].size();
    std::vector<BigInt> divisors{1}; // D_0
    for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
        BigInt g = 0;
        // enumerate k-subsets of rows and cols
        std::vector<std::size_t> rsel, csel;
        std::function<void(std::size_t, std::size_t)> rec_rows = [&](std::size_t start,
                                                                     std::size_t left) {
            if (left == 0) {
                std::function<void(std::size_t, std::size_t)> rec_cols =
                    [&](std::size_t cstart, std::size_t cleft) {
                        if (cleft == 0) {
                            g = gcd_big(g, determinant(m, rsel, csel));
                            return;
                        }
                        for (std::size_t cc = cstart; cc + cleft <= cols; ++cc) {
                            csel.push_back(cc);
                            rec_cols(cc + 1, cleft - 1);
                            csel.pop_back();
                        }
                    };
                rec_cols(0, k);
                return;
            }
            for (std::size_t r = start; r + left <= rows; ++r) {
                rsel.push_back(r);
                rec_rows(r + 1, left - 1);
                rsel.pop_back();
            }
        };
        rec_rows(0, k);
        if (g == 0) break;
        divisors.push_back(g);
    }
    std::vector<BigInt> diagonal;
    for (std::size_t k = 1; k < divisors.size(); ++k)
        diagonal.push_back(divisors[k] / divisors[k - 1]);
    return diagonal;
}

SuiteResult suite_snf(std::uint64_t seed) {
    Checker c("snf");
    Rng rng(seed);

    // frozen examples
    {
        SparseIntMatrix id2;
        id2.rows = id2.cols = 2;
        id2.set(0, 0, 1);
        id2.set(1, 1, 1);
        SmithForm s = smith_normal_form(id2);
        c.check(s.rank == 2 && s.diagonal == std::vector<BigInt>{1, 1},
                "identity 2x2 -> diagonal (1, 1)");

        SparseIntMatrix m;
        m.rows = m.cols = 2;
        m.set(0, 0, 2);
        m.set(0, 1, 4);
        m.set(1, 0, 6);
        m.set(1, 1, 8);
        SmithForm s2 = smith_normal_form(m);
        c.check(s2.diagonal == std::vector<BigInt>{2, 4}, "[[2,4],[6,8]] -> diagonal (2, 4)");

        SparseIntMatrix zero;
        zero.rows = 3;
        zero.cols = 2;
        SmithForm s3 = smith_normal_form(zero);
        c.check(s3.rank == 0 && s3.diagonal.empty(), "zero matrix -> empty diagonal");
    }

    // 200 random matrices against the minor-gcd oracle (criterion 4)
    bool oracle_ok = true, chain_ok = true;
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t rows = 1 + rng.integer(5), cols = 1 + rng.integer(5);
        std::vector<std::vector<BigInt>> dense(rows, std::vector<BigInt>(cols));
        SparseIntMatrix sparse;
        sparse.rows = rows;
        sparse.cols = cols;
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t col = 0; col < cols; ++col) {
                int v = static_cast<int>(rng.integer(11)) - 5;
                dense[r][col] = v;
                if (v != 0) sparse.set(r, col, v);
            }
        SmithForm snf = smith_normal_form(sparse);
        std::vector<BigInt> expected = minor_gcd_diagonal(dense);
        if (snf.diagonal != expected) oracle_ok = false;
        for (std::size_t i = 0; i + 1 < snf.diagonal.size(); ++i)
            if (snf.diagonal[i + 1] % snf.diagonal[i] != 0) chain_ok = false;
    }
    c.check(oracle_ok, "SNF diagonal matches the minor-gcd oracle on 200 random matrices");
    c.check(chain_ok, "divisibility chain d_1 | d_2 | ... holds");

    return c.result;
}

// --- suite: endtoend ---------------------------------------------------------

struct EndToEndCase {
    std::string name;
    std::string text;
    std::size_t beta0;
    std::size_t beta1;
    unsigned ell;
    double epsilon;
};

SuiteResult suite_endtoend(unsigned threads) {
    Checker c("endtoend");
    std::vector<EndToEndCase> cases = {
        {"disk", "poly p = x^2 + y^2 - 1; formula (p <= 0)", 1, 0, 3, 0.12},
        {"circle", "poly p = x^2 + y^2 - 1; formula (p = 0)", 1, 1, 3, 0.12},
        {"annulus",
         "poly p = x^2 + y^2 - 1; poly r = x^2 + y^2 - 1/4; formula (p <= 0) & (r >= 0)", 1, 1,
         4, 0.065},
        {"two disks",
         "poly a = x^2 - 4x + y^2 + 3; poly b = x^2 + 4x + y^2 + 3; "
         "formula (a <= 0) | (b <= 0)",
         2, 0, 4, 0.065},
        {"bowtie",
         "poly f = y - x; poly g = y + x; "
         "formula ((f <= 0) & (g >= 0)) | ((f >= 0) & (g <= 0))",
         1, 0, 3, 0.12},
        {"empty set", "poly p = x^2 + y^2 + 1; formula (p <= 0)", 0, 0, 3, 0.12},
    };
    for (const auto& instance : cases) {
        ProblemInput input = parse(instance.text);
        RunOptions options;
        options.rho = 0.5;
        options.level_cap = 16;
        options.ell_override = instance.ell;
        options.epsilon_override = instance.epsilon;
        options.threads = threads;
        HomologyReport report = run_homology(input, options);
        bool ok = report.groups.groups.size() == 2 &&
                  report.groups.groups[0].betti == instance.beta0 &&
                  report.groups.groups[1].betti == instance.beta1 &&
                  report.groups.groups[0].torsion.empty() &&
                  report.groups.groups[1].torsion.empty();
        std::ostringstream msg;
        msg << instance.name << ": expected (" << instance.beta0 << "," << instance.beta1
            << "), got (" << (report.groups.groups.empty() ? 0 : report.groups.groups[0].betti)
            << "," << (report.groups.groups.size() < 2 ? 0 : report.groups.groups[1].betti)
            << ") in " << report.times.total_s << "s";
        c.check(ok, msg.str());
        if (instance.name == "empty set") {
            bool noted = false;
            for (const auto& note : report.notes)
                if (note.find("may be empty") != std::string::npos) noted = true;
            c.check(noted, "empty set run carries the 'set may be empty' note");
        }
    }
    return c.result;
}

// --- suite: tail ---------------------------------------------------------------

SuiteResult suite_tail(std::uint64_t seed, unsigned threads) {
    Checker c("tail");
    const std::size_t n_samples = 2000;
    const std::size_t n = 2;
    const unsigned degree = 2;
    const double rho = 0.9;
    const unsigned cap = 8;
    const double bound_b = 1e7;

    Rng rng(seed);
    std::vector<PolyTuple> samples;
    samples.reserve(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s)
        samples.push_back(PolyTuple({random_weyl_affine(rng, n, degree)}));

    std::vector<double> estimates(n_samples, 0.0);
    std::vector<char> capped(n_samples, 0), infinite(n_samples, 0);

    unsigned workers = resolve_threads(threads);
    parallel_chunks(n_samples, workers, [&](unsigned, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            try {
                PolyTuple f = homogenize_tuple(samples[i]);
                double big_d = static_cast<double>(f.max_degree());
                double k = 0.0;
                bool resolved = false;
                for (unsigned level = 1; level <= cap; ++level) {
                    k = kappa_bar_ell(f, level, 1, cap);
                    if (bound_b <= k) {
                        infinite[i] = 1; // estimator reports kappa-bar >= B
                        resolved = true;
                        break;
                    }
                    if (2.0 * big_d * k * std::ldexp(1.0, -static_cast<int>(level)) <= rho) {
                        resolved = true;
                        break;
                    }
                }
                estimates[i] = k;
                if (!resolved) capped[i] = 1;
            } catch (const resource_error&) {
                infinite[i] = 1;
            }
        }
    });

    std::size_t finite = 0, n_capped = 0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        if (!infinite[i]) ++finite;
        if (capped[i]) ++n_capped;
    }

    // survival curve with the reference tail bound alongside
    std::uint64_t coeff_dim = samples[0].coefficient_space_dim();
    double bound_const = 44.0 * std::pow(static_cast<double>(degree), n + 1.0) *
                         static_cast<double>(coeff_dim - 1) * n *
                         std::pow(2.0 * (1.0 + 1.0), static_cast<double>(n));
    c.note("survival of kappa_bar_aff over " + std::to_string(n_samples) +
           " Weyl-Gaussian samples (n=2, q=1, D=2); reference bound C/t with C = " +
           std::to_string(bound_const));
    std::vector<double> ts{1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
    double previous = 1.1;
    bool monotone = true;
    for (double t : ts) {
        std::size_t count = 0;
        for (std::size_t i = 0; i < n_samples; ++i)
            if (infinite[i] || estimates[i] >= t) ++count;
        double p = static_cast<double>(count) / n_samples;
        std::ostringstream line;
        line.precision(4);
        line << "P{K >= " << t << "} = " << p << "   (bound " << std::min(1.0, bound_const / t)
             << ")";
        c.note(line.str());
        if (p > previous + 1e-15) monotone = false;
        previous = p;
    }
    c.check(monotone, "empirical survival curve is non-increasing in t");
    std::ostringstream finite_msg;
    finite_msg << "finite estimate for " << finite << "/" << n_samples << " samples ("
               << n_capped << " capped at level " << cap << ", lower bounds)";
    c.check(static_cast<double>(finite) >= 0.99 * n_samples, finite_msg.str());

    // scale invariance spot-check on a few samples
    bool scale_ok = true;
    for (std::size_t i = 0; i < 5; ++i) {
        if (infinite[i] || capped[i]) continue;
        try {
            EstimateOutcome a = kappa_bar_aff(samples[i], rho, bound_b, cap, threads);
            EstimateOutcome b = kappa_bar_aff(scale_tuple(samples[i], 100.0), rho, bound_b, cap,
                                              threads);
            if (std::fabs(a.K - b.K) > 1e-8 * a.K) scale_ok = false;
        } catch (const resource_error&) {
        }
    }
    c.check(scale_ok, "kappa_bar_aff(p) = kappa_bar_aff(100 p) on spot-checked samples");

    return c.result;
}

} // namespace

std::vector<std::string> suite_names() {
    return {"weyl", "grid", "condition", "sampling", "cech", "snf", "endtoend", "tail"};
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed, unsigned threads) {
    if (name == "weyl") return suite_weyl(seed);
    if (name == "grid") return suite_grid(seed);
    if (name == "condition") return suite_condition(seed, threads);
    if (name == "sampling") return suite_sampling(seed, threads);
    if (name == "cech") return suite_cech(seed, threads);
    if (name == "snf") return suite_snf(seed);
    if (name == "endtoend") return suite_endtoend(threads);
    if (name == "tail") return suite_tail(seed, threads);
    throw input_error("unknown verify suite '" + name + "'");
}

} // namespace homsa
