#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "homsa/formula.hpp"
#include "homsa/poly.hpp"

namespace homsa {

// Shared table of unit-sphere points at one grid level. Clouds are index
// sets into the table, so set operations on clouds are index operations and
// Cech complexes over different clouds share vertex identity.
class PointTable {
public:
    PointTable(std::size_t ambient_dim, unsigned level);

    std::size_t size() const { return coords_.size() / dim_; }
    std::size_t ambient_dim() const { return dim_; }
    unsigned level() const { return level_; }
    std::uint64_t id() const { return id_; }

    std::span<const double> point(std::uint32_t index) const {
        return {coords_.data() + static_cast<std::size_t>(index) * dim_, dim_};
    }

    std::uint32_t append(std::span<const double> pt);

private:
    std::size_t dim_;
    unsigned level_;
    std::uint64_t id_;
    std::vector<double> coords_;
};

struct PointCloud {
    std::shared_ptr<const PointTable> table;
    std::vector<std::uint32_t> members; // strictly increasing
};

PointCloud cloud_intersection(const PointCloud& a, const PointCloud& b);
PointCloud cloud_union(const PointCloud& a, const PointCloud& b);

// The atomic clouds X_j^<=, X_j^=, X_j^>= (indexed by Relation) for every
// materialized polynomial, over one shared table.
struct AtomicClouds {
    std::shared_ptr<const PointTable> table;
    unsigned level;
    double tolerance; // D^(1/2) r_level
    std::map<std::size_t, std::array<std::vector<std::uint32_t>, 3>> members_by_poly;

    PointCloud cloud(std::size_t poly, Relation rel) const;
};

// Membership of x in the open algebraic neighborhood of S(f, phi) with
// tolerance r: atoms f_i = 0 become |f_i(x)| < r ||f_i||, f_i >= 0 becomes
// f_i(x) > -r ||f_i||, f_i <= 0 becomes f_i(x) < r ||f_i||.
bool in_open_algebraic_neighborhood(const PolyTuple& f, const LaxFormula& phi,
                                    std::span<const double> x, double r);
bool in_open_algebraic_neighborhood(const PolyTuple& f, const LaxFormula& phi,
                                    std::span<const double> x, double r,
                                    const std::vector<double>& component_norms);

// One pass over the level-ell grid; a point enters the table iff it lies in
// at least one atomic open neighborhood at tolerance D^(1/2) r_ell among the
// materialized polynomials (default: all of them).
AtomicClouds atomic_clouds(const PolyTuple& f, unsigned level,
                           const std::vector<std::size_t>& polys = {},
                           std::size_t table_cap = 50000000, unsigned threads = 0);

// Cloud of the formula by folding atoms through index-set operations;
// equals direct grid filtering through the open algebraic neighborhood.
PointCloud cloud_for_formula(const AtomicClouds& clouds, const LaxFormula& phi);

// Debug CSV: index, coordinates, then LE/EQ/GE bits per materialized
// polynomial in index order.
void dump_clouds_csv(const AtomicClouds& clouds, std::ostream& out);

} // namespace homsa
