#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "homsa/errors.hpp"
#include "homsa/poly.hpp"

using namespace homsa;

namespace {

Polynomial make(std::size_t n_vars, unsigned degree, bool homogeneous,
                std::initializer_list<std::pair<Monomial, double>> terms) {
    Polynomial::TermMap map;
    for (const auto& [m, c] : terms) map[m] = c;
    return Polynomial(n_vars, degree, homogeneous, std::move(map));
}

} // namespace

TEST_CASE("evaluate") {
    // x^2 + y^2 - 1 at a point of the unit circle
    Polynomial circle = make(2, 2, false, {{{2, 0}, 1.0}, {{0, 2}, 1.0}, {{0, 0}, -1.0}});
    CHECK(circle.evaluate(std::vector<double>{1.0, 0.0}) == doctest::Approx(0.0));

    Polynomial x0 = make(2, 1, true, {{{1, 0}, 1.0}});
    CHECK(x0.evaluate(std::vector<double>{0.6, 0.8}) == doctest::Approx(0.6));

    // z y - x^2 at (1,1,1), variables ordered (x, y, z)
    Polynomial parabola_h = make(3, 2, true, {{{0, 1, 1}, 1.0}, {{2, 0, 0}, -1.0}});
    CHECK(parabola_h.evaluate(std::vector<double>{1.0, 1.0, 1.0}) == doctest::Approx(0.0));

    CHECK_THROWS_AS(circle.evaluate(std::vector<double>{1.0}), input_error);
}

TEST_CASE("gradient") {
    Polynomial sum_sq = make(2, 2, false, {{{2, 0}, 1.0}, {{0, 2}, 1.0}});
    auto g = sum_sq.gradient(std::vector<double>{1.0, 2.0});
    CHECK(g[0] == doctest::Approx(2.0));
    CHECK(g[1] == doctest::Approx(4.0));

    Polynomial x0 = make(3, 1, true, {{{1, 0, 0}, 1.0}});
    auto g2 = x0.gradient(std::vector<double>{0.3, 0.4, std::sqrt(0.75)});
    CHECK(g2[0] == doctest::Approx(1.0));
    CHECK(g2[1] == doctest::Approx(0.0));
    CHECK(g2[2] == doctest::Approx(0.0));

    // X1^2 + X2^2 - X0^2 at (0, 1/sqrt2, 1/sqrt2)
    Polynomial cone =
        make(3, 2, true, {{{2, 0, 0}, -1.0}, {{0, 2, 0}, 1.0}, {{0, 0, 2}, 1.0}});
    double inv = 1.0 / std::sqrt(2.0);
    auto g3 = cone.gradient(std::vector<double>{0.0, inv, inv});
    CHECK(g3[0] == doctest::Approx(0.0));
    CHECK(g3[1] == doctest::Approx(std::sqrt(2.0)));
    CHECK(g3[2] == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("weyl inner product") {
    Polynomial x0sq = make(2, 2, true, {{{2, 0}, 1.0}});
    CHECK(weyl_inner(x0sq, x0sq) == doctest::Approx(1.0));

    Polynomial x0x1 = make(2, 2, true, {{{1, 1}, 1.0}});
    CHECK(weyl_inner(x0x1, x0x1) == doctest::Approx(0.5));

    Polynomial cone =
        make(3, 2, true, {{{2, 0, 0}, -1.0}, {{0, 2, 0}, 1.0}, {{0, 0, 2}, 1.0}});
    CHECK(weyl_inner(cone, cone) == doctest::Approx(3.0));

    Polynomial affine = make(2, 2, false, {{{1, 0}, 1.0}});
    CHECK_THROWS_AS(weyl_inner(affine, affine), input_error);
    Polynomial deg1 = make(2, 1, true, {{{1, 0}, 1.0}});
    CHECK_THROWS_AS(weyl_inner(x0sq, deg1), input_error);
}

TEST_CASE("weyl norm of tuples") {
    Polynomial x0 = make(2, 1, true, {{{1, 0}, 1.0}});
    Polynomial x1 = make(2, 1, true, {{{0, 1}, 1.0}});
    CHECK(weyl_norm_tuple(PolyTuple({x0})) == doctest::Approx(1.0));
    CHECK(weyl_norm_tuple(PolyTuple({x0, x1})) == doctest::Approx(std::sqrt(2.0)));

    Polynomial cone =
        make(3, 2, true, {{{2, 0, 0}, -1.0}, {{0, 2, 0}, 1.0}, {{0, 0, 2}, 1.0}});
    CHECK(weyl_norm_tuple(PolyTuple({cone})) == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("homogenize") {
    // y - x^2 homogenizes to (X0 X2) - X1^2 with the new variable first
    Polynomial parabola = make(2, 2, false, {{{0, 1}, 1.0}, {{2, 0}, -1.0}});
    Polynomial h = parabola.homogenized();
    CHECK(h.is_homogeneous());
    CHECK(h.degree() == 2);
    CHECK(h == make(3, 2, true, {{{1, 0, 1}, 1.0}, {{0, 2, 0}, -1.0}}));

    // the constant 1 declared with degree 1 becomes X0
    Polynomial one = make(1, 1, false, {{{0}, 1.0}});
    CHECK(one.homogenized() == make(2, 1, true, {{{1, 0}, 1.0}}));

    // an already-full-degree polynomial keeps its terms, with X0 exponent 0
    Polynomial linear = make(2, 1, false, {{{1, 0}, 1.0}, {{0, 1}, 1.0}});
    CHECK(linear.homogenized() == make(3, 1, true, {{{0, 1, 0}, 1.0}, {{0, 0, 1}, 1.0}}));
}

TEST_CASE("homogenize_tuple") {
    Polynomial x1 = make(1, 1, false, {{{1}, 1.0}});
    PolyTuple h = homogenize_tuple(PolyTuple({x1}));
    CHECK(h.size() == 2);
    CHECK(h.degrees() == std::vector<unsigned>{1, 1});
    CHECK(h[0] == make(2, 1, true, {{{1, 0}, 1.0}}));
    CHECK(h[1] == make(2, 1, true, {{{0, 1}, 1.0}}));

    Polynomial circle = make(2, 2, false, {{{2, 0}, 1.0}, {{0, 2}, 1.0}, {{0, 0}, -1.0}});
    PolyTuple hc = homogenize_tuple(PolyTuple({circle}));
    CHECK(hc.degrees() == std::vector<unsigned>{1, 2});
    CHECK(hc[0] == make(3, 1, true, {{{1, 0, 0}, std::sqrt(3.0)}}));
    CHECK(hc[1] ==
          make(3, 2, true, {{{2, 0, 0}, -1.0}, {{0, 2, 0}, 1.0}, {{0, 0, 2}, 1.0}}));

    Polynomial zero = make(2, 1, false, {});
    CHECK_THROWS_AS(homogenize_tuple(PolyTuple({zero})), input_error);
}

TEST_CASE("invariants of the representation") {
    CHECK_THROWS_AS(make(2, 1, false, {{{2, 0}, 1.0}}), input_error); // term degree > declared
    CHECK_THROWS_AS(make(2, 2, true, {{{1, 0}, 1.0}}), input_error);  // non-full homogeneous
    Polynomial p = make(2, 2, false, {{{1, 1}, 0.0}, {{1, 0}, 2.0}});
    CHECK(p.terms().size() == 1); // zero coefficients are dropped

    CHECK(multinomial(Monomial{2, 0}) == doctest::Approx(1.0));
    CHECK(multinomial(Monomial{1, 1}) == doctest::Approx(2.0));
    CHECK(multinomial(Monomial{1, 1, 1}) == doctest::Approx(6.0));
    CHECK(multinomial(Monomial{2, 1}) == doctest::Approx(3.0));
}

TEST_CASE("coefficient space dimension") {
    // N = C(n + d, d) summed per component
    Polynomial circle = make(2, 2, false, {{{2, 0}, 1.0}, {{0, 2}, 1.0}, {{0, 0}, -1.0}});
    CHECK(PolyTuple({circle}).coefficient_space_dim() == 6);
    Polynomial lin = make(2, 1, false, {{{1, 0}, 1.0}});
    CHECK(PolyTuple({lin, lin}).coefficient_space_dim() == 6);
}
