#include "homsa/cech.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <unordered_map>

#include <Eigen/Dense>

#include "homsa/errors.hpp"
#include "homsa/parallel.hpp"

namespace homsa {

SimplicialComplex::SimplicialComplex(std::size_t kmax, std::uint64_t table_id)
    : kmax_(kmax), table_id_(table_id), by_dim_(kmax + 1) {}

SimplicialComplex SimplicialComplex::from_faces(std::size_t kmax, const std::vector<Face>& faces,
                                                std::uint64_t table_id) {
    SimplicialComplex c(kmax, table_id);
    // Insert every subface; subsets are enumerated by bitmask (faces here
    // are small by construction).
    for (const Face& f : faces) {
        Face sorted = f;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw input_error("face has repeated vertices");
        if (sorted.size() > kmax + 1)
            throw input_error("face dimension exceeds kmax");
        std::size_t n = sorted.size();
        for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
            Face sub;
            for (std::size_t j = 0; j < n; ++j)
                if (mask & (1u << j)) sub.push_back(sorted[j]);
            c.by_dim_[sub.size() - 1].insert(std::move(sub));
        }
    }
    return c;
}

const FaceSet& SimplicialComplex::faces(std::size_t dim) const {
    static const FaceSet empty;
    return dim < by_dim_.size() ? by_dim_[dim] : empty;
}

std::size_t SimplicialComplex::face_count(std::size_t dim) const { return faces(dim).size(); }

std::size_t SimplicialComplex::total_face_count() const {
    std::size_t total = 0;
    for (const auto& set : by_dim_) total += set.size();
    return total;
}

bool SimplicialComplex::contains(const Face& f) const {
    if (f.empty() || f.size() > kmax_ + 1) return false;
    return by_dim_[f.size() - 1].count(f) > 0;
}

std::vector<Face> SimplicialComplex::sorted_faces(std::size_t dim) const {
    const FaceSet& set = faces(dim);
    std::vector<Face> out(set.begin(), set.end());
    std::sort(out.begin(), out.end());
    return out;
}

void SimplicialComplex::insert(Face f) {
    if (f.empty() || f.size() > kmax_ + 1) throw input_error("face dimension out of range");
    by_dim_[f.size() - 1].insert(std::move(f));
}

bool SimplicialComplex::is_downward_closed() const {
    for (std::size_t dim = 1; dim <= kmax_; ++dim) {
        for (const Face& f : by_dim_[dim]) {
            Face sub(f.size() - 1);
            for (std::size_t drop = 0; drop < f.size(); ++drop) {
                std::size_t t = 0;
                for (std::size_t j = 0; j < f.size(); ++j)
                    if (j != drop) sub[t++] = f[j];
                if (!by_dim_[dim - 1].count(sub)) return false;
            }
        }
    }
    return true;
}

bool SimplicialComplex::operator==(const SimplicialComplex& other) const {
    if (kmax_ != other.kmax_) return false;
    for (std::size_t dim = 0; dim <= kmax_; ++dim)
        if (by_dim_[dim] != other.by_dim_[dim]) return false;
    return true;
}

namespace {

struct Ball {
    std::vector<double> center;
    double radius = -1.0; // negative: empty ball containing nothing
};

bool ball_contains(const Ball& b, std::span<const double> p, double tol) {
    if (b.radius < 0.0) return false;
    double d2 = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        double diff = p[j] - b.center[j];
        d2 += diff * diff;
    }
    double r = b.radius + tol;
    return d2 <= r * r;
}

// Smallest ball with all support points on its boundary: center in the
// affine hull of the support, solved through the Gram system.
Ball ball_from_support(const std::vector<std::span<const double>>& support) {
    Ball b;
    if (support.empty()) return b;
    std::size_t dim = support[0].size();
    b.center.assign(support[0].begin(), support[0].end());
    b.radius = 0.0;
    if (support.size() == 1) return b;
    std::size_t k = support.size() - 1;
    Eigen::MatrixXd u(k, dim);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < dim; ++j) u(i, j) = support[i + 1][j] - support[0][j];
    Eigen::MatrixXd gram = u * u.transpose();
    Eigen::VectorXd rhs(k);
    for (std::size_t i = 0; i < k; ++i) rhs(i) = 0.5 * u.row(i).squaredNorm();
    Eigen::VectorXd lambda = gram.fullPivLu().solve(rhs);
    Eigen::VectorXd w = u.transpose() * lambda;
    for (std::size_t j = 0; j < dim; ++j) b.center[j] += w(j);
    b.radius = w.norm();
    return b;
}

Ball welzl(std::vector<std::span<const double>>& pts, std::size_t end,
           std::vector<std::span<const double>>& support, std::size_t dim, double tol) {
    if (end == 0 || support.size() == dim + 1) return ball_from_support(support);
    Ball b = ball_from_support(support);
    for (std::size_t i = 0; i < end; ++i) {
        if (ball_contains(b, pts[i], tol)) continue;
        support.push_back(pts[i]);
        b = welzl(pts, i, support, dim, tol);
        support.pop_back();
        // move-to-front keeps boundary points early
        auto hit = pts[i];
        for (std::size_t j = i; j > 0; --j) pts[j] = pts[j - 1];
        pts[0] = hit;
    }
    return b;
}

} // namespace

double min_enclosing_ball_radius(const std::vector<std::span<const double>>& points,
                                 double tolerance) {
    if (points.empty()) throw input_error("min enclosing ball of no points");
    std::size_t dim = points[0].size();
    std::vector<std::span<const double>> pts = points;
    std::vector<std::span<const double>> support;
    Ball b = welzl(pts, pts.size(), support, dim, tolerance);
    return b.radius;
}

bool balls_have_common_point(const std::vector<std::span<const double>>& points, double eps) {
    if (!(eps > 0.0)) throw input_error("ball radius must be positive");
    return min_enclosing_ball_radius(points, 1e-12 * eps) < eps;
}

namespace {

// Integer cell coordinates for the neighbor hash.
struct CellHash {
    std::size_t operator()(const std::vector<std::int64_t>& c) const {
        std::size_t h = 1469598103934665603ull;
        for (std::int64_t v : c) {
            h ^= static_cast<std::uint64_t>(v);
            h *= 1099511628211ull;
        }
        return h;
    }
};

} // namespace

SimplicialComplex build_cech(const PointCloud& cloud, double eps, std::size_t kmax,
                             std::size_t face_cap, unsigned threads) {
    if (!(eps > 0.0)) throw input_error("Cech radius must be positive");
    const PointTable& table = *cloud.table;
    std::size_t dim = table.ambient_dim();
    SimplicialComplex complex(kmax, table.id());
    std::size_t total_faces = 0;
    auto bump_faces = [&](std::size_t added, std::size_t at_dim) {
        total_faces += added;
        if (total_faces > face_cap)
            throw resource_error("face count cap " + std::to_string(face_cap) +
                                 " exceeded at dimension " + std::to_string(at_dim));
    };

    for (std::uint32_t v : cloud.members) complex.insert(Face{v});
    bump_faces(cloud.members.size(), 0);
    if (kmax == 0 || cloud.members.size() < 2) return complex;

    // Edges: point pairs within 2 eps of each other, via a spatial hash
    // with cell size 2 eps.
    double cell = 2.0 * eps;
    std::unordered_map<std::vector<std::int64_t>, std::vector<std::uint32_t>, CellHash> grid;
    std::vector<std::int64_t> key(dim);
    for (std::uint32_t v : cloud.members) {
        auto pt = table.point(v);
        for (std::size_t j = 0; j < dim; ++j)
            key[j] = static_cast<std::int64_t>(std::floor(pt[j] / cell));
        grid[key].push_back(v);
    }
    std::vector<std::vector<std::uint32_t>> adjacency_of(cloud.members.size());
    std::unordered_map<std::uint32_t, std::size_t> member_pos;
    for (std::size_t i = 0; i < cloud.members.size(); ++i) member_pos[cloud.members[i]] = i;

    double lim2 = 4.0 * eps * eps;
    std::vector<std::int64_t> probe(dim);
    for (std::uint32_t v : cloud.members) {
        auto pv = table.point(v);
        for (std::size_t j = 0; j < dim; ++j)
            key[j] = static_cast<std::int64_t>(std::floor(pv[j] / cell));
        // scan the 3^dim neighborhood
        std::vector<int> off(dim, -1);
        while (true) {
            for (std::size_t j = 0; j < dim; ++j) probe[j] = key[j] + off[j];
            auto it = grid.find(probe);
            if (it != grid.end()) {
                for (std::uint32_t w : it->second) {
                    if (w <= v) continue;
                    auto pw = table.point(w);
                    double d2 = 0.0;
                    for (std::size_t j = 0; j < dim; ++j) {
                        double diff = pv[j] - pw[j];
                        d2 += diff * diff;
                    }
                    if (d2 < lim2 && balls_have_common_point({pv, pw}, eps)) {
                        complex.insert(Face{v, w});
                        bump_faces(1, 1);
                        adjacency_of[member_pos[v]].push_back(w);
                        adjacency_of[member_pos[w]].push_back(v);
                    }
                }
            }
            std::size_t j = dim;
            bool carried = false;
            while (j-- > 0) {
                if (off[j] < 1) {
                    ++off[j];
                    carried = true;
                    break;
                }
                off[j] = -1;
            }
            if (!carried) break;
        }
    }
    for (auto& adj : adjacency_of) std::sort(adj.begin(), adj.end());

    // Higher faces: extend each (k-1)-dimensional face by common neighbors
    // above its last vertex, admit after the subface and ball tests.
    for (std::size_t k = 2; k <= kmax; ++k) {
        std::vector<Face> previous = complex.sorted_faces(k - 1);
        if (previous.empty()) break;
        unsigned workers = resolve_threads(threads);
        std::vector<std::vector<Face>> found(workers);
        parallel_chunks(previous.size(), workers,
                        [&](unsigned chunk, std::uint64_t begin, std::uint64_t end) {
            std::vector<std::uint32_t> common, tmp;
            std::vector<std::span<const double>> pts;
            Face candidate, sub;
            for (std::uint64_t idx = begin; idx < end; ++idx) {
                const Face& face = previous[idx];
                common = adjacency_of[member_pos[face[0]]];
                for (std::size_t t = 1; t < face.size() && !common.empty(); ++t) {
                    const auto& adj = adjacency_of[member_pos[face[t]]];
                    tmp.clear();
                    std::set_intersection(common.begin(), common.end(), adj.begin(), adj.end(),
                                          std::back_inserter(tmp));
                    common.swap(tmp);
                }
                for (std::uint32_t w : common) {
                    if (w <= face.back()) continue;
                    candidate = face;
                    candidate.push_back(w);
                    // every k-subface must already be present
                    bool closed = true;
                    for (std::size_t drop = 0; drop + 1 < candidate.size() && closed; ++drop) {
                        sub.clear();
                        for (std::size_t j = 0; j < candidate.size(); ++j)
                            if (j != drop) sub.push_back(candidate[j]);
                        closed = complex.contains(sub);
                    }
                    if (!closed) continue;
                    pts.clear();
                    for (std::uint32_t v : candidate) pts.push_back(table.point(v));
                    if (balls_have_common_point(pts, eps)) found[chunk].push_back(candidate);
                }
            }
        });
        std::size_t added = 0;
        for (auto& chunk : found) {
            added += chunk.size();
            for (Face& f : chunk) complex.insert(std::move(f));
        }
        bump_faces(added, k);
        if (added == 0) break;
    }
    return complex;
}

namespace {

void require_compatible(const SimplicialComplex& a, const SimplicialComplex& b) {
    if (a.kmax() != b.kmax())
        throw input_error("complex lattice operation across different kmax");
    if (a.table_id() != b.table_id())
        throw input_error("complex lattice operation across different point tables");
}

} // namespace

SimplicialComplex complex_meet(const SimplicialComplex& a, const SimplicialComplex& b) {
    require_compatible(a, b);
    SimplicialComplex out(a.kmax(), a.table_id());
    for (std::size_t dim = 0; dim <= a.kmax(); ++dim) {
        const FaceSet& small = a.face_count(dim) <= b.face_count(dim) ? a.faces(dim) : b.faces(dim);
        const FaceSet& large = a.face_count(dim) <= b.face_count(dim) ? b.faces(dim) : a.faces(dim);
        for (const Face& f : small)
            if (large.count(f)) out.insert(f);
    }
    return out;
}

SimplicialComplex complex_join(const SimplicialComplex& a, const SimplicialComplex& b) {
    require_compatible(a, b);
    SimplicialComplex out(a.kmax(), a.table_id());
    for (std::size_t dim = 0; dim <= a.kmax(); ++dim) {
        for (const Face& f : a.faces(dim)) out.insert(f);
        for (const Face& f : b.faces(dim)) out.insert(f);
    }
    return out;
}

SimplicialParameters paper_parameters(unsigned max_degree, double K) {
    double big_d = static_cast<double>(max_degree);
    unsigned level = static_cast<unsigned>(std::ceil(std::log2(200.0 * big_d * big_d * K * K)));
    double epsilon = 1.0 / (20.0 * std::pow(big_d, 1.5) * K);
    return SimplicialParameters{level, epsilon};
}

bool parameter_window_ok(unsigned max_degree, double kappa_upper, unsigned level,
                         double epsilon) {
    double big_d = static_cast<double>(max_degree);
    double r_level = std::ldexp(1.0, -static_cast<int>(level));
    return 9.0 * std::sqrt(big_d) * kappa_upper * r_level < epsilon &&
           epsilon < 1.0 / (14.0 * std::pow(big_d, 1.5) * kappa_upper);
}

SimplicialResult simplicial(const PolyTuple& f, const LaxFormula& phi, double K,
                            const SimplicialOptions& options) {
    if (!f.is_homogeneous()) throw input_error("Simplicial expects a homogeneous tuple");
    if (!(K >= 1.0)) throw input_error("condition estimate K must be at least 1");
    std::size_t n = f.n_vars() - 1;

    SimplicialParameters params = paper_parameters(f.max_degree(), K);
    unsigned level = options.ell_override ? *options.ell_override : params.level;
    double epsilon = options.epsilon_override ? *options.epsilon_override : params.epsilon;
    std::size_t kmax = options.kmax_override ? *options.kmax_override : n;
    bool overridden =
        options.ell_override || options.epsilon_override || options.kmax_override;

    double kappa_upper = options.kappa_upper ? *options.kappa_upper : K / 0.99;
    bool window_ok = parameter_window_ok(f.max_degree(), kappa_upper, level, epsilon);
    if (!overridden && !window_ok)
        throw std::logic_error("parameter window violated with paper parameters");

    AtomicClouds clouds =
        atomic_clouds(f, level, phi.used_polys(), options.table_cap, options.threads);

    // Fold the formula over the lattice of complexes. The fold value is a
    // join of terms, each either a pure Cech over a cloud or an explicit
    // complex. Meets distribute over joins dimension-wise, and
    // Cech(X1) meet Cech(X2) = Cech(X1 intersect X2), so conjunctions sink
    // to cloud intersections and a complex is only ever built over the
    // (small) cloud of a conjunctive branch. The folded complex is the same
    // one the direct atomic-complex evaluation produces; term lists that
    // outgrow the cap collapse into one explicit complex.
    constexpr std::size_t kTermCap = 64;
    struct Term {
        std::optional<PointCloud> cloud; // set: pure Cech over this cloud
        std::optional<SimplicialComplex> complex;
    };
    using Terms = std::vector<Term>;
    auto build_term = [&](const Term& t) -> SimplicialComplex {
        if (t.complex) return *t.complex;
        return build_cech(*t.cloud, epsilon, kmax, options.face_cap, options.threads);
    };
    auto materialize = [&](Terms&& terms) -> SimplicialComplex {
        SimplicialComplex acc = build_term(terms.front());
        for (std::size_t i = 1; i < terms.size(); ++i)
            acc = complex_join(acc, build_term(terms[i]));
        return acc;
    };
    auto collapse_if_large = [&](Terms&& terms) -> Terms {
        if (terms.size() <= kTermCap) return std::move(terms);
        Terms out;
        out.push_back(Term{std::nullopt, materialize(std::move(terms))});
        return out;
    };
    std::function<Terms(const LaxFormula&)> fold = [&](const LaxFormula& node) -> Terms {
        switch (node.kind()) {
        case LaxFormula::Kind::ATOM:
            return Terms{
                Term{clouds.cloud(node.as_atom().poly, node.as_atom().rel), std::nullopt}};
        case LaxFormula::Kind::AND: {
            Terms acc = fold(node.children().front());
            for (std::size_t i = 1; i < node.children().size(); ++i) {
                Terms next = fold(node.children()[i]);
                Terms product;
                for (const Term& a : acc) {
                    for (const Term& b : next) {
                        if (a.cloud && b.cloud) {
                            product.push_back(
                                Term{cloud_intersection(*a.cloud, *b.cloud), std::nullopt});
                        } else {
                            product.push_back(Term{
                                std::nullopt, complex_meet(build_term(a), build_term(b))});
                        }
                    }
                }
                acc = collapse_if_large(std::move(product));
            }
            return acc;
        }
        case LaxFormula::Kind::OR: {
            Terms acc;
            for (const LaxFormula& child : node.children()) {
                Terms part = fold(child);
                acc.insert(acc.end(), std::make_move_iterator(part.begin()),
                           std::make_move_iterator(part.end()));
            }
            return collapse_if_large(std::move(acc));
        }
        }
        __builtin_unreachable();
    };
    SimplicialComplex folded = materialize(fold(phi));

    return SimplicialResult{std::move(folded), std::move(clouds), level, epsilon,
                            kmax,              overridden,        window_ok};
}

void dump_complex(const SimplicialComplex& complex, std::ostream& out) {
    for (std::size_t dim = 0; dim <= complex.kmax(); ++dim) {
        for (const Face& f : complex.sorted_faces(dim)) {
            out << dim;
            for (std::uint32_t v : f) out << " " << v;
            out << "\n";
        }
    }
}

} // namespace homsa
