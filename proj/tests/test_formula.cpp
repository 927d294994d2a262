#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "homsa/errors.hpp"
#include "homsa/formula.hpp"
#include "homsa/parser.hpp"

using namespace homsa;

namespace {

LaxFormula atom(std::size_t poly, Relation rel) { return LaxFormula::atom(Atom{poly, rel}); }

// Truth of an atom under a sign pattern in {-1, 0, +1}^q; a zero sign
// satisfies all three relations on that component.
bool atom_true(const Atom& a, const std::vector<int>& signs) {
    int s = signs[a.poly];
    switch (a.rel) {
    case Relation::LE: return s <= 0;
    case Relation::EQ: return s == 0;
    case Relation::GE: return s >= 0;
    }
    return false;
}

bool eval_on_signs(const LaxFormula& phi, const std::vector<int>& signs) {
    return eval_lattice<bool>(
        phi, [&](const Atom& a) { return atom_true(a, signs); },
        [](bool a, bool b) { return a && b; }, [](bool a, bool b) { return a || b; });
}

bool is_dnf(const LaxFormula& phi) {
    if (phi.kind() == LaxFormula::Kind::ATOM) return true;
    auto clause_ok = [](const LaxFormula& clause) {
        if (clause.kind() == LaxFormula::Kind::ATOM) return true;
        if (clause.kind() != LaxFormula::Kind::AND) return false;
        for (const auto& lit : clause.children())
            if (lit.kind() != LaxFormula::Kind::ATOM) return false;
        return true;
    };
    if (phi.kind() == LaxFormula::Kind::AND) return clause_ok(phi);
    for (const auto& clause : phi.children())
        if (!clause_ok(clause)) return false;
    return true;
}

LaxFormula random_formula(std::mt19937_64& rng, std::size_t q, std::size_t atoms) {
    if (atoms == 1)
        return LaxFormula::atom(
            Atom{rng() % q, static_cast<Relation>(rng() % 3)});
    std::size_t left = 1 + rng() % (atoms - 1);
    LaxFormula a = random_formula(rng, q, left);
    LaxFormula b = random_formula(rng, q, atoms - left);
    return rng() % 2 ? LaxFormula::conjunction({a, b}) : LaxFormula::disjunction({a, b});
}

} // namespace

TEST_CASE("size counts binary connectives") {
    LaxFormula a = atom(0, Relation::LE);
    CHECK(a.size() == 0);
    LaxFormula tri = LaxFormula::conjunction(
        {atom(0, Relation::LE), atom(1, Relation::EQ), atom(2, Relation::GE)});
    CHECK(tri.size() == 2); // arity 3 counts as 2 connectives
    LaxFormula nested = LaxFormula::disjunction({tri, atom(0, Relation::GE)});
    CHECK(nested.size() == 3); // (arity 2 - 1) + size of the And subtree
}

TEST_CASE("to_dnf") {
    // a & (b | c) -> (a&b) | (a&c)
    LaxFormula phi = LaxFormula::conjunction(
        {atom(0, Relation::LE),
         LaxFormula::disjunction({atom(1, Relation::LE), atom(2, Relation::LE)})});
    LaxFormula dnf = to_dnf(phi);
    CHECK(is_dnf(dnf));
    CHECK(dnf.kind() == LaxFormula::Kind::OR);
    CHECK(dnf.children().size() == 2);

    // single atom is returned as-is
    LaxFormula single = to_dnf(atom(1, Relation::EQ));
    CHECK(single.kind() == LaxFormula::Kind::ATOM);

    // (a|b) & (c|d) -> 4 clauses
    LaxFormula cross = LaxFormula::conjunction(
        {LaxFormula::disjunction({atom(0, Relation::LE), atom(1, Relation::LE)}),
         LaxFormula::disjunction({atom(2, Relation::LE), atom(3, Relation::LE)})});
    LaxFormula cross_dnf = to_dnf(cross);
    CHECK(cross_dnf.children().size() == 4);

    // duplicate atoms inside a clause are dropped
    LaxFormula dup = LaxFormula::conjunction({atom(0, Relation::LE), atom(0, Relation::LE)});
    CHECK(to_dnf(dup).kind() == LaxFormula::Kind::ATOM);

    // clause cap
    std::mt19937_64 rng(7);
    LaxFormula big = random_formula(rng, 4, 18);
    CHECK_THROWS_AS(to_dnf(big, 2), resource_error);
}

TEST_CASE("to_dnf equivalence by 3-valued truth table") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t q = 1 + rng() % 3;
        LaxFormula phi = random_formula(rng, q, 1 + rng() % 6);
        LaxFormula dnf = to_dnf(phi);
        CHECK(is_dnf(dnf));
        std::size_t patterns = 1;
        for (std::size_t i = 0; i < q; ++i) patterns *= 3;
        for (std::size_t code = 0; code < patterns; ++code) {
            std::vector<int> signs(q);
            std::size_t c = code;
            for (std::size_t i = 0; i < q; ++i) {
                signs[i] = static_cast<int>(c % 3) - 1;
                c /= 3;
            }
            REQUIRE(eval_on_signs(phi, signs) == eval_on_signs(dnf, signs));
        }
    }
}

TEST_CASE("homogenized formula") {
    LaxFormula phi = atom(0, Relation::LE);
    LaxFormula h = homogenized_formula(phi);
    CHECK(h.kind() == LaxFormula::Kind::AND);
    CHECK(h.children().size() == 2);
    CHECK(h.children()[0].as_atom().poly == 1);
    CHECK(h.children()[0].as_atom().rel == Relation::LE);
    CHECK(h.children()[1].as_atom().poly == 0);
    CHECK(h.children()[1].as_atom().rel == Relation::GE);
    CHECK(h.size() == phi.size() + 1);

    LaxFormula eq = homogenized_formula(atom(2, Relation::EQ));
    CHECK(eq.children()[0].as_atom().poly == 3);
    CHECK(eq.size() == 1);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        LaxFormula f = random_formula(rng, 3, 1 + rng() % 6);
        CHECK(homogenized_formula(f).size() == f.size() + 1);
    }
}

TEST_CASE("parser basics") {
    ProblemInput disk = parse("poly p = x^2 + y^2 - 1; formula (p <= 0)");
    CHECK(disk.tuple.size() == 1);
    CHECK(disk.tuple.degrees() == std::vector<unsigned>{2});
    CHECK(disk.var_names == std::vector<std::string>{"x", "y"});
    CHECK(disk.formula.kind() == LaxFormula::Kind::ATOM);
    CHECK(disk.formula.as_atom().rel == Relation::LE);

    // precedence: & binds tighter than |
    ProblemInput prec = parse(
        "poly p = x; poly r = y; poly s = x + y; formula (p = 0) & (r >= 0) | (s <= 0)");
    CHECK(prec.formula.kind() == LaxFormula::Kind::OR);
    CHECK(prec.formula.children()[0].kind() == LaxFormula::Kind::AND);
    CHECK(prec.formula.children()[1].as_atom().poly == 2);

    // rationals are parsed exactly
    ProblemInput rat = parse("poly p = x^2 - 1/4; formula (p <= 0)");
    CHECK(rat.tuple[0].terms().at(Monomial{0}) == -0.25);
}

TEST_CASE("parser errors") {
    CHECK_THROWS_WITH_AS(parse("poly p = x; formula !(p <= 0)"),
                         doctest::Contains("lax formulas admit no negation"), input_error);
    CHECK_THROWS_WITH_AS(parse("poly p = x; formula (q <= 0)"),
                         doctest::Contains("unknown polynomial"), input_error);
    CHECK_THROWS_WITH_AS(parse("poly p = x^2 deg 1; formula (p <= 0)"),
                         doctest::Contains("smaller than the actual degree"), input_error);
    CHECK_THROWS_AS(parse("poly p = x; formula (p < 0)"), input_error);
    CHECK_THROWS_AS(parse("formula (p <= 0)"), input_error);
}

TEST_CASE("vars decl fixes the variable order") {
    ProblemInput swapped = parse("vars y x; poly p = x + 2y; formula (p >= 0)");
    CHECK(swapped.var_names == std::vector<std::string>{"y", "x"});
    CHECK(swapped.tuple[0].terms().at(Monomial{1, 0}) == 2.0);
    CHECK(swapped.tuple[0].terms().at(Monomial{0, 1}) == 1.0);
    CHECK_THROWS_AS(parse("vars x; poly p = x + y; formula (p <= 0)"), input_error);
}

TEST_CASE("degree annotations") {
    ProblemInput padded = parse("poly p = x + y deg 3; formula (p = 0)");
    CHECK(padded.tuple.degrees() == std::vector<unsigned>{3});
    ProblemInput constant = parse("vars x; poly c = 1; formula (c >= 0)");
    CHECK(constant.tuple.degrees() == std::vector<unsigned>{1});
}

TEST_CASE("parse-print round trip") {
    std::vector<std::string> inputs = {
        "poly p = x^2 + y^2 - 1; formula (p <= 0)",
        "poly p = x^2 + y^2 - 1; poly r = x^2 + y^2 - 1/4; formula (p <= 0) & (r >= 0)",
        "poly f = y - x; poly g = y + x; "
        "formula ((f <= 0) & (g >= 0)) | ((f >= 0) & (g <= 0))",
        "poly p = x + y deg 3; formula (p = 0) | (p >= 0) & (p <= 0)",
        "poly p = 0.125x^2 - 2.5y; formula (p = 0)",
    };
    for (const auto& text : inputs) {
        ProblemInput first = parse(text);
        std::string printed = print_problem(first);
        ProblemInput second = parse(printed);
        CHECK(print_problem(second) == printed);
        CHECK(second.tuple.polys() == first.tuple.polys());
        CHECK(to_string(second.formula, second.poly_names) ==
              to_string(first.formula, first.poly_names));
    }
}

TEST_CASE("eval_lattice drives membership") {
    ProblemInput bow = parse(
        "vars x y; poly f = y - x; poly g = y + x; "
        "formula ((f <= 0) & (g >= 0)) | ((f >= 0) & (g <= 0))");
    auto member = [&](double x, double y) {
        std::vector<double> values;
        for (const auto& p : bow.tuple.polys())
            values.push_back(p.evaluate(std::vector<double>{x, y}));
        return satisfies(bow.formula, values);
    };
    CHECK(member(0.0, 0.0));
    CHECK(member(1.0, 0.0));  // right cone: f = -1 <= 0, g = 1 >= 0
    CHECK(member(-1.0, 0.0)); // left cone
    CHECK(!member(0.0, 1.0)); // above both lines
    CHECK(!member(0.0, -1.0));
}
