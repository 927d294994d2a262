#include "homsa/condition.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "homsa/errors.hpp"
#include "homsa/parallel.hpp"
#include "homsa/sphere_grid.hpp"

namespace homsa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_unit(std::span<const double> x) {
    double norm2 = 0.0;
    for (double v : x) norm2 += v * v;
    if (std::fabs(std::sqrt(norm2) - 1.0) > 1e-9)
        throw input_error("condition numbers are defined at unit sphere points");
}

// Householder QR of a column-major rows x cols matrix with rows >= cols,
// leaving R in the top triangle. Only the triangular factor is needed.
void qr_in_place(std::vector<double>& a, std::size_t rows, std::size_t cols) {
    for (std::size_t k = 0; k < cols; ++k) {
        double* col = a.data() + k * rows;
        double norm2 = 0.0;
        for (std::size_t i = k; i < rows; ++i) norm2 += col[i] * col[i];
        double norm = std::sqrt(norm2);
        if (norm == 0.0) continue;
        double alpha = col[k] >= 0.0 ? -norm : norm;
        double vk = col[k] - alpha;
        double vnorm2 = norm2 - col[k] * col[k] + vk * vk;
        if (vnorm2 == 0.0) continue;
        // v = (0,...,0, vk, col[k+1..rows-1])
        for (std::size_t j = k + 1; j < cols; ++j) {
            double* cj = a.data() + j * rows;
            double dot = vk * cj[k];
            for (std::size_t i = k + 1; i < rows; ++i) dot += col[i] * cj[i];
            double scale = 2.0 * dot / vnorm2;
            cj[k] -= scale * vk;
            for (std::size_t i = k + 1; i < rows; ++i) cj[i] -= scale * col[i];
        }
        col[k] = alpha;
        for (std::size_t i = k + 1; i < rows; ++i) col[i] = 0.0;
    }
}

// Smallest singular value of the upper-triangular cols x cols block of a
// column-major matrix with leading dimension `rows`.
double sigma_min_triangular(const std::vector<double>& a, std::size_t rows, std::size_t cols) {
    if (cols == 1) return std::fabs(a[0]);
    if (cols == 2) {
        double p = a[0], q = a[rows], s = a[rows + 1];
        double e = (p + s) / 2, f = (p - s) / 2, g = q / 2, h = -q / 2;
        double big = std::hypot(e, h), small = std::hypot(f, g);
        return std::fabs(big - small);
    }
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(cols, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i <= j; ++i) r(i, j) = a[j * rows + i];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(r);
    return svd.singularValues().minCoeff();
}

// Per-thread scratch for the kappa kernel at one point.
struct PointWork {
    std::vector<double> values;
    std::vector<double> grads;    // q rows of length dim
    std::vector<double> tangent;  // q rows of length dim-1 (tangent coords / sqrt(d_i))
    std::vector<double> mat;      // column-major (dim-1) x |L| for the QR
};

// Scans kappa over all subsets; all point-independent data is precomputed.
class KappaScanner {
public:
    explicit KappaScanner(const PolyTuple& f) : f_(f), dim_(f.n_vars()), q_(f.size()) {
        if (!f.is_homogeneous())
            throw input_error("condition numbers are defined for homogeneous tuples");
        std::size_t n = dim_ - 1;
        degrees_ = f.degrees();
        inv_sqrt_deg_.resize(q_);
        comp_norm2_.resize(q_);
        for (std::size_t i = 0; i < q_; ++i) {
            inv_sqrt_deg_[i] = 1.0 / std::sqrt(static_cast<double>(degrees_[i]));
            double nrm = weyl_norm(f[i]);
            comp_norm2_[i] = nrm * nrm;
        }
        std::size_t max_size = std::min(q_, n + 1);
        std::vector<std::size_t> current;
        build_subsets(current, 0, max_size);
        subset_norm_.resize(subsets_.size());
        for (std::size_t s = 0; s < subsets_.size(); ++s) {
            double sum = 0.0;
            for (std::size_t i : subsets_[s]) sum += comp_norm2_[i];
            subset_norm_[s] = std::sqrt(sum);
        }
    }

    std::size_t subset_count() const { return subsets_.size(); }
    std::size_t tangent_dim() const { return dim_ - 1; }

    void prepare(PointWork& w) const {
        w.values.resize(q_);
        w.grads.resize(q_ * dim_);
        w.tangent.resize(q_ * (dim_ - 1));
        w.mat.resize((dim_ - 1) * std::min(q_, dim_ - 1) + dim_ - 1);
    }

    // Evaluates values, gradients and normalized tangent rows at x.
    void load_point(PointWork& w, std::span<const double> x) const {
        double s = x[0] >= 0.0 ? 1.0 : -1.0;
        double vdot = 2.0 * (1.0 + s * x[0]); // v = x + s e_0, |v|^2 for unit x
        for (std::size_t i = 0; i < q_; ++i) {
            w.values[i] = f_[i].evaluate(x);
            std::span<double> g(w.grads.data() + i * dim_, dim_);
            f_[i].gradient_into(x, g);
            // Reflect with H = I - 2 v v^T / |v|^2; coords 1..n of Hg are the
            // coordinates of the tangential projection of g in an orthonormal
            // basis of T_x S^n.
            double dot = (x[0] + s) * g[0];
            for (std::size_t j = 1; j < dim_; ++j) dot += x[j] * g[j];
            double scale = 2.0 * dot / vdot;
            double* row = w.tangent.data() + i * (dim_ - 1);
            for (std::size_t j = 1; j < dim_; ++j)
                row[j - 1] = (g[j] - scale * x[j]) * inv_sqrt_deg_[i];
        }
    }

    // kappa(f^L, x) for subset index s using loaded work; +inf is reported
    // as numeric_limits infinity.
    double kappa_subset(PointWork& w, std::size_t s) const {
        const auto& subset = subsets_[s];
        std::size_t n = dim_ - 1;
        double sigma = 0.0;
        if (subset.size() <= n) {
            // Column-major n x |L| matrix holding the transposed rows.
            std::size_t rows = n, cols = subset.size();
            w.mat.resize(rows * cols);
            for (std::size_t c = 0; c < cols; ++c) {
                const double* row = w.tangent.data() + subset[c] * n;
                std::copy(row, row + n, w.mat.data() + c * rows);
            }
            qr_in_place(w.mat, rows, cols);
            sigma = sigma_min_triangular(w.mat, rows, cols);
        }
        double val2 = 0.0;
        for (std::size_t i : subset) val2 += w.values[i] * w.values[i];
        double den = std::sqrt(sigma * sigma + val2);
        if (den == 0.0) return kInf;
        return subset_norm_[s] / den;
    }

    double kappa_max(PointWork& w, std::span<const double> x) const {
        load_point(w, x);
        double best = 0.0;
        for (std::size_t s = 0; s < subsets_.size(); ++s)
            best = std::max(best, kappa_subset(w, s));
        return best;
    }

private:
    void build_subsets(std::vector<std::size_t>& current, std::size_t start, std::size_t max_size) {
        for (std::size_t i = start; i < q_; ++i) {
            current.push_back(i);
            subsets_.push_back(current);
            if (current.size() < max_size) build_subsets(current, i + 1, max_size);
            current.pop_back();
        }
    }

    const PolyTuple& f_;
    std::size_t dim_;
    std::size_t q_;
    std::vector<unsigned> degrees_;
    std::vector<double> inv_sqrt_deg_;
    std::vector<double> comp_norm2_;
    std::vector<std::vector<std::size_t>> subsets_;
    std::vector<double> subset_norm_;
};

struct GridMax {
    double value = 0.0;
    bool infinite = false;
    std::vector<double> witness;
};

GridMax scan_level(const KappaScanner& scanner, const PolyTuple& f, unsigned level,
                   unsigned threads) {
    GridSpec spec = GridSpec::for_sphere(f.n_vars(), level);
    std::uint64_t total = spec.point_count();
    threads = resolve_threads(threads);
    std::vector<GridMax> partial(std::max<unsigned>(1, threads));
    std::atomic<bool> stop{false};
    parallel_chunks(total, threads, [&](unsigned chunk, std::uint64_t begin, std::uint64_t end) {
        PointWork work;
        scanner.prepare(work);
        GridMax local;
        for_each_grid_point(spec, begin, end, [&](std::uint64_t, std::span<const double> pt) {
            if (stop.load(std::memory_order_relaxed)) return;
            double k = scanner.kappa_max(work, pt);
            if (std::isinf(k)) {
                local.infinite = true;
                local.witness.assign(pt.begin(), pt.end());
                stop.store(true, std::memory_order_relaxed);
                return;
            }
            local.value = std::max(local.value, k);
        });
        partial[chunk] = std::move(local);
    });
    GridMax out;
    for (auto& p : partial) {
        if (p.infinite && !out.infinite) {
            out.infinite = true;
            out.witness = p.witness;
        }
        out.value = std::max(out.value, p.value);
    }
    return out;
}

[[noreturn]] void throw_ill_posed_at(const std::vector<double>& witness, unsigned level) {
    std::ostringstream msg;
    msg << "ill-posed at sample: kappa is infinite at grid level " << level << " near (";
    for (std::size_t j = 0; j < witness.size(); ++j)
        msg << (j ? ", " : "") << witness[j];
    msg << ")";
    throw ill_posed_error(msg.str());
}

} // namespace

std::vector<double> norm_diagonal(const PolyTuple& f) {
    std::vector<double> d;
    d.reserve(f.size());
    for (unsigned deg : f.degrees()) d.push_back(std::sqrt(static_cast<double>(deg)));
    return d;
}

ConditionAtPoint condition_at(const PolyTuple& f, std::span<const double> x) {
    if (!f.is_homogeneous())
        throw input_error("condition numbers are defined for homogeneous tuples");
    if (x.size() != f.n_vars()) throw input_error("point has wrong dimension");
    require_unit(x);
    std::size_t n = f.n_vars() - 1, q = f.size();

    double tuple_norm = weyl_norm_tuple(f);
    double val2 = 0.0;
    std::vector<double> values(q);
    for (std::size_t i = 0; i < q; ++i) {
        values[i] = f[i].evaluate(x);
        val2 += values[i] * values[i];
    }
    double residual = std::sqrt(val2) / tuple_norm;

    ConditionAtPoint out{kInf, 0.0, residual, std::nullopt};
    if (q <= n) {
        KappaScanner scanner(f);
        PointWork work;
        scanner.prepare(work);
        scanner.load_point(work, x);
        std::size_t rows = n, cols = q;
        std::vector<double> mat(rows * cols);
        for (std::size_t c = 0; c < cols; ++c) {
            const double* row = work.tangent.data() + c * n;
            std::copy(row, row + n, mat.data() + c * rows);
        }
        qr_in_place(mat, rows, cols);
        double sigma = sigma_min_triangular(mat, rows, cols);
        out.sigma_min = sigma;
        out.mu = sigma > 0.0 ? tuple_norm / sigma : kInf;
    }
    double inv_mu2 = std::isinf(out.mu) ? 0.0 : 1.0 / (out.mu * out.mu);
    double inv_k2 = inv_mu2 + residual * residual;
    out.kappa = inv_k2 > 0.0 ? 1.0 / std::sqrt(inv_k2) : kInf;
    return out;
}

double mu_condition(const PolyTuple& f, std::span<const double> x) {
    return condition_at(f, x).mu;
}

double kappa_at(const PolyTuple& f, std::span<const double> x) {
    return condition_at(f, x).kappa;
}

std::uint64_t subset_scan_count(std::size_t q, std::size_t n) {
    std::size_t max_size = std::min(q, n + 1);
    std::uint64_t total = 0;
    for (std::size_t i = 1; i <= max_size; ++i) {
        std::uint64_t c = 1;
        for (std::size_t j = 0; j < i; ++j) c = c * (q - j) / (j + 1);
        total += c;
    }
    return total;
}

double kappa_bar_ell(const PolyTuple& f, unsigned level, unsigned threads, unsigned level_cap) {
    if (level > level_cap)
        throw resource_error("grid level " + std::to_string(level) + " exceeds cap " +
                             std::to_string(level_cap));
    KappaScanner scanner(f);
    GridMax result = scan_level(scanner, f, level, threads);
    if (result.infinite) throw_ill_posed_at(result.witness, level);
    return result.value;
}

EstimateOutcome estimate_kappa_bar(const PolyTuple& f, double rho, double bound_B,
                                   unsigned level_cap, unsigned threads) {
    if (!(rho > 0.0 && rho < 1.0)) throw input_error("rho must lie in (0, 1)");
    if (!(bound_B > 0.0)) throw input_error("bound B must be positive");
    KappaScanner scanner(f);
    double big_d = static_cast<double>(f.max_degree());
    unsigned level = 0;
    unsigned iterations = 0;
    while (true) {
        ++level;
        if (level > level_cap)
            throw resource_error("condition estimate did not stop by grid level " +
                                 std::to_string(level_cap) + "; input is possibly ill-posed");
        ++iterations;
        GridMax result = scan_level(scanner, f, level, threads);
        if (result.infinite) throw_ill_posed_at(result.witness, level);
        double k = result.value;
        double r_level = std::ldexp(1.0, -static_cast<int>(level));
        if (bound_B <= k)
            return EstimateOutcome{EstimateStatus::FAIL, k, iterations, level};
        if (2.0 * big_d * k * r_level <= rho)
            return EstimateOutcome{EstimateStatus::OK, k, iterations, level};
    }
}

EstimateOutcome kappa_bar_aff(const PolyTuple& p, double rho, double bound_B,
                              unsigned level_cap, unsigned threads) {
    return estimate_kappa_bar(homogenize_tuple(p), rho, bound_B, level_cap, threads);
}

} // namespace homsa
