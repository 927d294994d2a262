#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "homsa/errors.hpp"
#include "homsa/sphere_grid.hpp"

using namespace homsa;

TEST_CASE("grid spec arithmetic") {
    GridSpec s10 = GridSpec::for_sphere(2, 0); // S^1
    CHECK(s10.side() == 1);
    CHECK(s10.radius() == 1.0);
    CHECK(s10.point_count() == 8);

    GridSpec s11 = GridSpec::for_sphere(2, 1);
    CHECK(s11.side() == 2);
    CHECK(s11.point_count() == 16);

    GridSpec s23 = GridSpec::for_sphere(3, 3); // S^2, level 3
    CHECK(s23.side() == 12); // ceil(8 sqrt 2)
    CHECK(s23.point_count() == 25u * 25 * 25 - 23u * 23 * 23);
    CHECK(s23.radius() == 0.125);

    CHECK_THROWS_AS(GridSpec::for_sphere(4, 24).point_count(), resource_error);
}

TEST_CASE("level-0 circle grid is the 8 compass points") {
    GridSpec spec = GridSpec::for_sphere(2, 0);
    std::multiset<std::pair<long, long>> angles;
    std::vector<double> pt(2);
    for (std::uint64_t i = 0; i < spec.point_count(); ++i) {
        grid_point_at(spec, i, pt);
        CHECK(std::fabs(std::hypot(pt[0], pt[1]) - 1.0) <= 1e-12);
        double a = std::atan2(pt[1], pt[0]) / (M_PI / 4.0);
        CHECK(std::fabs(a - std::round(a)) <= 1e-12);
        angles.insert({std::lround(std::round(a)), 0});
    }
    CHECK(angles.size() == 8); // no duplicates
}

TEST_CASE("streaming respects index ranges") {
    GridSpec spec = GridSpec::for_sphere(3, 1);
    std::uint64_t total = spec.point_count();
    std::vector<std::vector<double>> whole;
    for_each_grid_point(spec, 0, total, [&](std::uint64_t idx, std::span<const double> p) {
        CHECK(idx == whole.size());
        whole.emplace_back(p.begin(), p.end());
    });
    CHECK(whole.size() == total);

    // random-access decoding agrees with the stream
    std::vector<double> pt(3);
    for (std::uint64_t idx : {std::uint64_t(0), total / 3, total / 2, total - 1}) {
        grid_point_at(spec, idx, pt);
        CHECK(pt == whole[idx]);
    }
    CHECK_THROWS_AS(grid_point_at(spec, total, pt), input_error);

    std::vector<std::vector<double>> back;
    for_each_grid_point(spec, total / 2, total, [&](std::uint64_t, std::span<const double> p) {
        back.emplace_back(p.begin(), p.end());
    });
    CHECK(back.size() == total - total / 2);
    CHECK(back.front() == whole[total / 2]);
}

TEST_CASE("covering radius bound at small levels") {
    // distances from random sphere points to the grid stay below 2^-level
    for (unsigned level = 0; level <= 4; ++level) {
        GridSpec spec = GridSpec::for_sphere(3, level);
        double worst = covering_radius_check(spec, 2000, 99 + level);
        CHECK(worst <= spec.radius());
    }
    // a grid point itself is at distance 0
    GridSpec spec = GridSpec::for_sphere(2, 2);
    CHECK(covering_radius_check(spec, 1, 5) <= spec.radius());
}
