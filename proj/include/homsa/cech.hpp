#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "homsa/formula.hpp"
#include "homsa/poly.hpp"
#include "homsa/sampling.hpp"

namespace homsa {

// Sorted, duplicate-free tuple of point-table indices; dimension is
// size() - 1.
using Face = std::vector<std::uint32_t>;

struct FaceHash {
    std::size_t operator()(const Face& f) const {
        std::size_t h = 1469598103934665603ull;
        for (std::uint32_t v : f) {
            h ^= v;
            h *= 1099511628211ull;
        }
        return h;
    }
};

using FaceSet = std::unordered_set<Face, FaceHash>;

// Downward-closed family of faces up to dimension kmax, over one shared
// point table (table id 0 marks a detached complex built from raw faces).
class SimplicialComplex {
public:
    SimplicialComplex(std::size_t kmax, std::uint64_t table_id = 0);

    // Builds the downward closure of the given faces.
    static SimplicialComplex from_faces(std::size_t kmax, const std::vector<Face>& faces,
                                        std::uint64_t table_id = 0);

    std::size_t kmax() const { return kmax_; }
    std::uint64_t table_id() const { return table_id_; }
    const FaceSet& faces(std::size_t dim) const;
    std::size_t face_count(std::size_t dim) const;
    std::size_t total_face_count() const;
    bool empty() const { return total_face_count() == 0; }
    bool contains(const Face& f) const;
    std::vector<Face> sorted_faces(std::size_t dim) const;

    void insert(Face f); // no closure enforcement; builders keep the invariant
    bool is_downward_closed() const;
    bool operator==(const SimplicialComplex& other) const;

private:
    std::size_t kmax_;
    std::uint64_t table_id_;
    std::vector<FaceSet> by_dim_;
};

// Smallest enclosing ball radius of up to a handful of ambient points
// (randomized Welzl with move-to-front; exact circumball solves).
double min_enclosing_ball_radius(const std::vector<std::span<const double>>& points,
                                 double tolerance = 0.0);

// Open balls of radius eps around the points share a common point iff the
// minimum enclosing ball has radius < eps. Comparisons inside the ball
// solver use tolerance 1e-12 * eps.
bool balls_have_common_point(const std::vector<std::span<const double>>& points, double eps);

// Cech complex of the cloud at radius eps, with faces up to dimension kmax.
// Candidate k-faces are generated level-wise from (k-1)-faces and pruned
// through a spatial hash on point pairs closer than 2 eps.
SimplicialComplex build_cech(const PointCloud& cloud, double eps, std::size_t kmax,
                             std::size_t face_cap = 100000000, unsigned threads = 0);

// Dimension-wise intersection/union; requires a shared table and equal kmax.
SimplicialComplex complex_meet(const SimplicialComplex& a, const SimplicialComplex& b);
SimplicialComplex complex_join(const SimplicialComplex& a, const SimplicialComplex& b);

// Parameter choices of the witness-complex construction:
// level = ceil(log2(200 D^2 K^2)), epsilon = 1 / (20 D^(3/2) K).
struct SimplicialParameters {
    unsigned level;
    double epsilon;
};

SimplicialParameters paper_parameters(unsigned max_degree, double K);

// The guarantee window 9 sqrt(D) kb 2^-level < epsilon < 1/(14 D^(3/2) kb)
// evaluated at an upper bound kb for kappa-bar.
bool parameter_window_ok(unsigned max_degree, double kappa_upper, unsigned level, double epsilon);

struct SimplicialOptions {
    std::optional<unsigned> ell_override;
    std::optional<double> epsilon_override;
    std::optional<std::size_t> kmax_override;
    std::size_t table_cap = 50000000;
    std::size_t face_cap = 100000000;
    unsigned threads = 0;
    // Upper bound for kappa-bar implied by the estimate's rho; defaults to
    // the K/0.99 of the paper-parameter call.
    std::optional<double> kappa_upper;
};

struct SimplicialResult {
    SimplicialComplex complex;
    AtomicClouds clouds;
    unsigned level;
    double epsilon;
    std::size_t kmax;
    bool overridden;
    bool window_ok; // 9 sqrt(D) kb r_ell < eps < 1 / (14 D^(3/2) kb)
};

// Level and radius from K (ell = ceil(log2(200 D^2 K^2)),
// eps = 1/(20 D^(3/2) K) unless overridden), atomic clouds for the
// polynomials used by phi, one Cech complex per distinct atom, folded
// through the formula. With paper parameters and
// 0.99 kappa_bar <= K <= kappa_bar, the result has the homology of
// S(f, phi).
SimplicialResult simplicial(const PolyTuple& f, const LaxFormula& phi, double K,
                            const SimplicialOptions& options = {});

// One face per line: dimension then ascending vertex indices, lines ordered
// by (dimension, vertex tuple); bit-exact across runs.
void dump_complex(const SimplicialComplex& complex, std::ostream& out);

} // namespace homsa
