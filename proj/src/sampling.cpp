#include "homsa/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>

#include "homsa/errors.hpp"
#include "homsa/parallel.hpp"
#include "homsa/sphere_grid.hpp"

namespace homsa {

namespace {

std::atomic<std::uint64_t> next_table_id{1};

std::vector<double> component_weyl_norms(const PolyTuple& f) {
    std::vector<double> norms;
    norms.reserve(f.size());
    for (const auto& p : f.polys()) norms.push_back(weyl_norm(p));
    return norms;
}

} // namespace

PointTable::PointTable(std::size_t ambient_dim, unsigned level)
    : dim_(ambient_dim), level_(level), id_(next_table_id.fetch_add(1)) {}

std::uint32_t PointTable::append(std::span<const double> pt) {
    if (pt.size() != dim_) throw input_error("point has wrong dimension for table");
    coords_.insert(coords_.end(), pt.begin(), pt.end());
    return static_cast<std::uint32_t>(size() - 1);
}

PointCloud cloud_intersection(const PointCloud& a, const PointCloud& b) {
    if (a.table->id() != b.table->id())
        throw input_error("cloud operation across different point tables");
    PointCloud out{a.table, {}};
    std::set_intersection(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                          std::back_inserter(out.members));
    return out;
}

PointCloud cloud_union(const PointCloud& a, const PointCloud& b) {
    if (a.table->id() != b.table->id())
        throw input_error("cloud operation across different point tables");
    PointCloud out{a.table, {}};
    std::set_union(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                   std::back_inserter(out.members));
    return out;
}

PointCloud AtomicClouds::cloud(std::size_t poly, Relation rel) const {
    auto it = members_by_poly.find(poly);
    if (it == members_by_poly.end())
        throw input_error("atomic cloud for polynomial " + std::to_string(poly) +
                          " was not materialized");
    return PointCloud{table, it->second[static_cast<std::size_t>(rel)]};
}

bool in_open_algebraic_neighborhood(const PolyTuple& f, const LaxFormula& phi,
                                    std::span<const double> x, double r,
                                    const std::vector<double>& component_norms) {
    if (!(r > 0.0)) throw input_error("neighborhood tolerance must be positive");
    return eval_lattice<bool>(
        phi,
        [&](const Atom& a) {
            if (a.poly >= f.size()) throw input_error("atom references missing component");
            double v = f[a.poly].evaluate(x);
            double t = r * component_norms[a.poly];
            switch (a.rel) {
            case Relation::LE: return v < t;
            case Relation::EQ: return std::fabs(v) < t;
            case Relation::GE: return v > -t;
            }
            return false;
        },
        [](bool a, bool b) { return a && b; }, [](bool a, bool b) { return a || b; });
}

bool in_open_algebraic_neighborhood(const PolyTuple& f, const LaxFormula& phi,
                                    std::span<const double> x, double r) {
    return in_open_algebraic_neighborhood(f, phi, x, r, component_weyl_norms(f));
}

AtomicClouds atomic_clouds(const PolyTuple& f, unsigned level,
                           const std::vector<std::size_t>& polys, std::size_t table_cap,
                           unsigned threads) {
    if (!f.is_homogeneous()) throw input_error("clouds are sampled from homogeneous tuples");
    std::vector<std::size_t> used = polys;
    if (used.empty())
        for (std::size_t i = 0; i < f.size(); ++i) used.push_back(i);
    for (std::size_t i : used)
        if (i >= f.size()) throw input_error("cloud requested for missing component");

    GridSpec spec = GridSpec::for_sphere(f.n_vars(), level);
    double tol = std::sqrt(static_cast<double>(f.max_degree())) * spec.radius();
    std::vector<double> norms = component_weyl_norms(f);
    std::vector<double> thresholds;
    thresholds.reserve(used.size());
    for (std::size_t i : used) thresholds.push_back(tol * norms[i]);

    struct Hit {
        std::vector<double> coords;
        std::vector<std::uint16_t> bits; // 2 bits (LE, GE) per used poly
    };
    threads = resolve_threads(threads);
    std::uint64_t total = spec.point_count();
    std::vector<Hit> partial(threads);

    parallel_chunks(total, threads, [&](unsigned chunk, std::uint64_t begin, std::uint64_t end) {
        Hit local;
        std::vector<double> values(used.size());
        for_each_grid_point(spec, begin, end, [&](std::uint64_t, std::span<const double> pt) {
            std::uint16_t any = 0;
            for (std::size_t u = 0; u < used.size(); ++u) {
                values[u] = f[used[u]].evaluate(pt);
                std::uint16_t le = values[u] < thresholds[u] ? 1 : 0;
                std::uint16_t ge = values[u] > -thresholds[u] ? 1 : 0;
                any |= le | ge;
            }
            if (!any) return;
            local.coords.insert(local.coords.end(), pt.begin(), pt.end());
            for (std::size_t u = 0; u < used.size(); ++u) {
                std::uint16_t le = values[u] < thresholds[u] ? 1 : 0;
                std::uint16_t ge = values[u] > -thresholds[u] ? 1 : 0;
                local.bits.push_back(static_cast<std::uint16_t>(le | (ge << 1)));
            }
        });
        partial[chunk] = std::move(local);
    });

    auto table = std::make_shared<PointTable>(f.n_vars(), level);
    AtomicClouds out;
    out.level = level;
    out.tolerance = tol;
    for (std::size_t i : used) out.members_by_poly[i] = {};

    std::size_t dim = f.n_vars();
    for (const Hit& part : partial) {
        std::size_t count = part.bits.size() / used.size();
        for (std::size_t k = 0; k < count; ++k) {
            if (table->size() >= table_cap)
                throw resource_error("point table exceeds cap of " + std::to_string(table_cap));
            std::uint32_t idx =
                table->append({part.coords.data() + k * dim, dim});
            for (std::size_t u = 0; u < used.size(); ++u) {
                std::uint16_t bits = part.bits[k * used.size() + u];
                auto& slots = out.members_by_poly[used[u]];
                bool le = bits & 1, ge = bits & 2;
                if (le) slots[static_cast<std::size_t>(Relation::LE)].push_back(idx);
                if (ge) slots[static_cast<std::size_t>(Relation::GE)].push_back(idx);
                if (le && ge) slots[static_cast<std::size_t>(Relation::EQ)].push_back(idx);
            }
        }
    }
    out.table = table;
    return out;
}

PointCloud cloud_for_formula(const AtomicClouds& clouds, const LaxFormula& phi) {
    return eval_lattice<PointCloud>(
        phi, [&](const Atom& a) { return clouds.cloud(a.poly, a.rel); },
        [](PointCloud a, PointCloud b) { return cloud_intersection(a, b); },
        [](PointCloud a, PointCloud b) { return cloud_union(a, b); });
}

void dump_clouds_csv(const AtomicClouds& clouds, std::ostream& out) {
    out << "index";
    for (std::size_t j = 0; j < clouds.table->ambient_dim(); ++j) out << ",x" << j;
    for (const auto& [poly, slots] : clouds.members_by_poly)
        out << ",p" << poly << "_le,p" << poly << "_eq,p" << poly << "_ge";
    out << "\n";
    out.precision(17);
    for (std::uint32_t i = 0; i < clouds.table->size(); ++i) {
        out << i;
        for (double c : clouds.table->point(i)) out << "," << c;
        for (const auto& [poly, slots] : clouds.members_by_poly) {
            for (std::size_t rel = 0; rel < 3; ++rel) {
                bool in = std::binary_search(slots[rel].begin(), slots[rel].end(), i);
                out << "," << (in ? 1 : 0);
            }
        }
        out << "\n";
    }
}

} // namespace homsa
