#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "homsa/cech.hpp"
#include "homsa/errors.hpp"

using namespace homsa;

namespace {

std::shared_ptr<PointTable> table_of(const std::vector<std::vector<double>>& pts) {
    auto table = std::make_shared<PointTable>(pts.front().size(), 0);
    for (const auto& p : pts) table->append(p);
    return table;
}

PointCloud whole_cloud(const std::shared_ptr<PointTable>& table) {
    PointCloud cloud{table, {}};
    for (std::uint32_t i = 0; i < table->size(); ++i) cloud.members.push_back(i);
    return cloud;
}

} // namespace

TEST_CASE("minimum enclosing ball") {
    std::vector<double> a{0, 0, 0}, b{1, 0, 0}, c{0.5, std::sqrt(3.0) / 2.0, 0};
    CHECK(min_enclosing_ball_radius({a}) == doctest::Approx(0.0));
    CHECK(min_enclosing_ball_radius({a, b}) == doctest::Approx(0.5));
    CHECK(min_enclosing_ball_radius({a, b, c}) == doctest::Approx(1.0 / std::sqrt(3.0)));
    // an interior point does not change the ball
    std::vector<double> mid{0.5, 0.2, 0.0};
    CHECK(min_enclosing_ball_radius({a, b, c, mid}) ==
          doctest::Approx(1.0 / std::sqrt(3.0)));

    CHECK(balls_have_common_point({a, b}, 0.5000001));
    CHECK(!balls_have_common_point({a, b}, 0.5));
    CHECK(balls_have_common_point({a, b, c}, 0.6));
    CHECK(!balls_have_common_point({a, b, c}, 0.577));
}

TEST_CASE("build_cech on a single point and on the hexagon") {
    auto single = table_of({{0.2, 0.3}});
    SimplicialComplex one = build_cech(whole_cloud(single), 0.5, 2);
    CHECK(one.face_count(0) == 1);
    CHECK(one.face_count(1) == 0);

    std::vector<std::vector<double>> hex;
    for (int k = 0; k < 6; ++k)
        hex.push_back({std::cos(k * M_PI / 3.0), std::sin(k * M_PI / 3.0)});
    SimplicialComplex cycle = build_cech(whole_cloud(table_of(hex)), 0.6, 2);
    CHECK(cycle.face_count(0) == 6);
    CHECK(cycle.face_count(1) == 6);
    CHECK(cycle.face_count(2) == 0);
    for (int k = 0; k < 6; ++k) {
        Face edge{static_cast<std::uint32_t>(k), static_cast<std::uint32_t>((k + 1) % 6)};
        std::sort(edge.begin(), edge.end());
        CHECK(cycle.contains(edge));
    }
}

TEST_CASE("lattice operations") {
    std::vector<std::vector<double>> pts = {
        {0, 0, 0}, {0.5, 0, 0}, {1.0, 0, 0}, {0.25, 0.4, 0}, {0.75, 0.4, 0}};
    auto table = table_of(pts);
    PointCloud left{table, {0, 1, 3}}, right{table, {1, 2, 4}};
    double eps = 0.45;
    SimplicialComplex cl = build_cech(left, eps, 2);
    SimplicialComplex cr = build_cech(right, eps, 2);

    SimplicialComplex meet = complex_meet(cl, cr);
    CHECK(meet == build_cech(cloud_intersection(left, right), eps, 2));
    CHECK(complex_meet(cl, cl) == cl);
    CHECK(meet.is_downward_closed());

    SimplicialComplex join = complex_join(cl, cr);
    CHECK(join.is_downward_closed());
    SimplicialComplex full = build_cech(cloud_union(left, right), eps, 2);
    for (std::size_t dim = 0; dim <= 2; ++dim)
        for (const Face& f : join.faces(dim)) CHECK(full.contains(f));
    // strict containment witness: vertices 0 and 1 are 2 eps-close but live
    // in different clouds' complexes only jointly
    CHECK(complex_join(cl, cr) == complex_join(cr, cl));
    SimplicialComplex empty(2, table->id());
    CHECK(complex_join(cl, empty) == cl);
    CHECK(complex_meet(cl, empty) == empty);

    SimplicialComplex wrong_kmax(1, table->id());
    CHECK_THROWS_AS(complex_meet(cl, wrong_kmax), input_error);
}

TEST_CASE("from_faces closes downward and boundary checks work") {
    SimplicialComplex c = SimplicialComplex::from_faces(2, {{0, 1, 2}});
    CHECK(c.face_count(0) == 3);
    CHECK(c.face_count(1) == 3);
    CHECK(c.face_count(2) == 1);
    CHECK(c.is_downward_closed());
    CHECK_THROWS_AS(SimplicialComplex::from_faces(2, {{0, 0, 1}}), input_error);
    CHECK_THROWS_AS(SimplicialComplex::from_faces(1, {{0, 1, 2}}), input_error);
}

TEST_CASE("face cap raises a resource error naming the dimension") {
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 8; ++i) pts.push_back({0.01 * i, 0.0});
    try {
        build_cech(whole_cloud(table_of(pts)), 1.0, 2, 10);
        FAIL("expected resource_error");
    } catch (const resource_error& e) {
        CHECK(std::string(e.what()).find("dimension") != std::string::npos);
    }
}

TEST_CASE("paper parameters and the guarantee window") {
    SimplicialParameters params = paper_parameters(2, 3.0);
    // level = ceil(log2(200 * 4 * 9)) = ceil(12.8) = 13
    CHECK(params.level == 13);
    CHECK(params.epsilon == doctest::Approx(1.0 / (20.0 * std::pow(2.0, 1.5) * 3.0)));
    CHECK(parameter_window_ok(2, 3.0 / 0.99, params.level, params.epsilon));
    // a crude override violates the window
    CHECK(!parameter_window_ok(2, 3.0 / 0.99, 3, 0.12));
}

TEST_CASE("complex dump is sorted and bit-exact") {
    SimplicialComplex c = SimplicialComplex::from_faces(2, {{2, 5, 7}, {1, 2}});
    std::ostringstream first, second;
    dump_complex(c, first);
    dump_complex(c, second);
    CHECK(first.str() == second.str());
    CHECK(first.str() ==
          "0 1\n0 2\n0 5\n0 7\n1 1 2\n1 2 5\n1 2 7\n1 5 7\n2 2 5 7\n");
}

TEST_CASE("term fold equals the direct lattice fold over atomic complexes") {
    // Algorithm Simplicial's result must agree with eval_lattice applied to
    // the per-atom Cech complexes, including through Or nodes.
    Monomial e0(3, 0u), e1(3, 0u);
    e0[0] = 1;
    e1[1] = 1;
    Polynomial::TermMap t0{{e0, 1.0}}, t1{{e1, 1.0}};
    PolyTuple f({Polynomial(3, 1, true, t0), Polynomial(3, 1, true, t1)});
    LaxFormula phi = LaxFormula::disjunction(
        {LaxFormula::conjunction({LaxFormula::atom(Atom{0, Relation::EQ}),
                                  LaxFormula::atom(Atom{1, Relation::EQ})}),
         LaxFormula::conjunction({LaxFormula::atom(Atom{0, Relation::LE}),
                                  LaxFormula::atom(Atom{1, Relation::GE})})});
    SimplicialOptions opts;
    opts.ell_override = 3;
    opts.epsilon_override = 0.2;
    opts.threads = 1;
    SimplicialResult via_fold = simplicial(f, phi, std::sqrt(2.0), opts);

    std::map<std::pair<std::size_t, Relation>, SimplicialComplex> atomic;
    for (const Atom& a : phi.atoms())
        atomic.emplace(std::make_pair(a.poly, a.rel),
                       build_cech(via_fold.clouds.cloud(a.poly, a.rel), *opts.epsilon_override,
                                  2, 100000000, 1));
    SimplicialComplex direct = eval_lattice<SimplicialComplex>(
        phi, [&](const Atom& a) { return atomic.at({a.poly, a.rel}); },
        [](SimplicialComplex a, SimplicialComplex b) { return complex_meet(a, b); },
        [](SimplicialComplex a, SimplicialComplex b) { return complex_join(a, b); });
    CHECK(via_fold.complex == direct);
}
