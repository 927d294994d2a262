#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace homsa {

// Level-ell grid on S^n: normalized integer points of the cube boundary
// ||x||_inf = M with M = ceil(2^ell sqrt(n)), covering the sphere within
// r = 2^-ell. ambient_dim is n+1.
struct GridSpec {
    std::size_t ambient_dim;
    unsigned level;

    std::uint64_t side() const;                 // M
    double radius() const;                      // 2^-level
    std::uint64_t point_count() const;          // (2M+1)^(n+1) - (2M-1)^(n+1)

    static GridSpec for_sphere(std::size_t ambient_dim, unsigned level);
};

// Stateless decoder: writes the index-th grid point (unit vector) into out.
// Points are ordered face-major: faces (axis a, sign -M then +M) for
// a = 0..n, and within a face the free coordinates advance as a mixed-radix
// odometer; coordinates before the face axis stay in [-(M-1), M-1] so each
// integer point is owned by exactly one face.
void grid_point_at(const GridSpec& spec, std::uint64_t index, std::span<double> out);

// Streams indices [begin, end) of the grid through fn without materializing
// anything; fn(index, point).
void for_each_grid_point(const GridSpec& spec, std::uint64_t begin, std::uint64_t end,
                         const std::function<void(std::uint64_t, std::span<const double>)>& fn);

// Draws `samples` uniform points on S^n (deterministic in seed) and returns
// the largest distance from a sample to the grid, measured by local search
// around the sample's radial cube projection; the result is an upper bound
// on the true covering radius restricted to the samples.
double covering_radius_check(const GridSpec& spec, std::size_t samples, std::uint64_t seed = 2024);

} // namespace homsa
