#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

#include "homsa/cech.hpp"
#include "homsa/errors.hpp"
#include "homsa/homology.hpp"
#include "homsa/pipeline.hpp"

using namespace homsa;

namespace {

RunOptions fast_options(unsigned level, double eps) {
    RunOptions options;
    options.rho = 0.5;
    options.level_cap = 16;
    options.ell_override = level;
    options.epsilon_override = eps;
    options.threads = 2;
    return options;
}

std::string strip_times(std::string text) {
    // timing fields are the only run-to-run variation
    return std::regex_replace(text, std::regex("\"[a-z_]+_s\": [0-9.e+-]+|times:.*"), "T");
}

} // namespace

TEST_CASE("disk end to end") {
    ProblemInput disk = parse("poly p = x^2 + y^2 - 1; formula (p <= 0)");
    HomologyReport report = run_homology(disk, fast_options(3, 0.12));
    REQUIRE(report.groups.groups.size() == 2);
    CHECK(report.groups.groups[0].betti == 1);
    CHECK(report.groups.groups[1].betti == 0);
    CHECK(report.mode == "overridden");
    CHECK(report.level == 3);
    CHECK(report.kmax == 2);
    CHECK(report.n_vars == 2);
    CHECK(report.q == 1);
    CHECK(report.face_counts.size() == 3);
    CHECK(report.estimate_status == EstimateStatus::OK);
    CHECK(report.K >= 1.0);
    // overridden parameters violate the paper window and the report says so
    CHECK(!report.window_ok);
    bool noted = false;
    for (const auto& note : report.notes)
        if (note.find("guarantee window") != std::string::npos) noted = true;
    CHECK(noted);
}

TEST_CASE("unit circle end to end") {
    ProblemInput circle = parse("poly p = x^2 + y^2 - 1; formula (p = 0)");
    HomologyReport report = run_homology(circle, fast_options(3, 0.12));
    CHECK(report.groups.groups[0].betti == 1);
    CHECK(report.groups.groups[1].betti == 1);
}

TEST_CASE("empty set reports zeros with a note") {
    ProblemInput empty = parse("poly p = x^2 + y^2 + 1; formula (p <= 0)");
    HomologyReport report = run_homology(empty, fast_options(3, 0.12));
    CHECK(report.groups.groups[0].betti == 0);
    CHECK(report.groups.groups[1].betti == 0);
    bool noted = false;
    for (const auto& note : report.notes)
        if (note.find("set may be empty") != std::string::npos) noted = true;
    CHECK(noted);
}

TEST_CASE("estimate-only runs the condition stage") {
    ProblemInput circle = parse("poly p = x^2 + y^2 - 1; formula (p = 0)");
    RunOptions options;
    options.rho = 0.5;
    options.threads = 2;
    HomologyReport report = run_estimate(circle, options);
    CHECK(report.K >= 1.0);
    CHECK(report.estimate_status == EstimateStatus::OK);
    CHECK(report.groups.groups.empty());
    CHECK(report.face_counts.empty());
}

TEST_CASE("estimate bound B failure becomes a resource error") {
    ProblemInput circle = parse("poly p = x^2 + y^2 - 1; formula (p = 0)");
    RunOptions options = fast_options(3, 0.12);
    options.bound_B = 1.0;
    CHECK_THROWS_AS(run_homology(circle, options), resource_error);
}

TEST_CASE("reports are deterministic modulo timing") {
    ProblemInput bow = parse(
        "poly f = y - x; poly g = y + x; "
        "formula ((f <= 0) & (g >= 0)) | ((f >= 0) & (g <= 0))");
    HomologyReport a = run_homology(bow, fast_options(3, 0.12));
    HomologyReport b = run_homology(bow, fast_options(3, 0.12));
    CHECK(strip_times(format_report_json(a)) == strip_times(format_report_json(b)));
    CHECK(strip_times(format_report_text(a)) == strip_times(format_report_text(b)));
}

TEST_CASE("stage composition equals the pipeline") {
    ProblemInput circle = parse("poly p = x^2 + y^2 - 1; formula (p = 0)");
    RunOptions options = fast_options(3, 0.12);
    HomologyReport report = run_homology(circle, options);

    PolyTuple f = homogenize_tuple(circle.tuple);
    LaxFormula phi_h = homogenized_formula(circle.formula);
    EstimateOutcome est = estimate_kappa_bar(f, options.rho, options.bound_B,
                                             options.level_cap, options.threads);
    CHECK(est.K == report.K);
    SimplicialOptions simp;
    simp.ell_override = options.ell_override;
    simp.epsilon_override = options.epsilon_override;
    simp.threads = options.threads;
    simp.kappa_upper = est.K / (1.0 - options.rho);
    SimplicialResult manual = simplicial(f, phi_h, est.K, simp);
    for (std::size_t dim = 0; dim <= manual.kmax; ++dim)
        CHECK(manual.complex.face_count(dim) == report.face_counts[dim]);
    HomologyGroups groups = homology(manual.complex, 1, options.threads);
    CHECK(groups.groups[0].betti == report.groups.groups[0].betti);
    CHECK(groups.groups[1].betti == report.groups.groups[1].betti);
}

TEST_CASE("torsion formatting end to end through the report formatter") {
    HomologyGroup plain{1, {}};
    CHECK(format_group(plain) == "Z");
    HomologyGroup betti2{2, {}};
    CHECK(format_group(betti2) == "Z^2");
    HomologyGroup torsion{0, {BigInt(2)}};
    CHECK(format_group(torsion) == "Z/2");
    HomologyGroup mixed{3, {BigInt(2), BigInt(4)}};
    CHECK(format_group(mixed) == "Z^3 + Z/2 + Z/4");
    HomologyGroup zero{0, {}};
    CHECK(format_group(zero) == "0");
}

TEST_CASE("json report carries the stable field names") {
    ProblemInput disk = parse("poly p = x^2 + y^2 - 1; formula (p <= 0)");
    HomologyReport report = run_homology(disk, fast_options(3, 0.12));
    std::string json = format_report_json(report);
    for (const char* field :
         {"\"mode\"", "\"input\"", "\"estimate\"", "\"parameters\"", "\"clouds\"",
          "\"face_counts\"", "\"homology\"", "\"notes\"", "\"times\"", "\"betti\"",
          "\"torsion\"", "\"window_ok\"", "\"epsilon\""})
        CHECK(json.find(field) != std::string::npos);
}

TEST_CASE("emitted artifacts are written and bit-stable") {
    ProblemInput circle = parse("poly p = x^2 + y^2 - 1; formula (p = 0)");
    RunOptions options = fast_options(2, 0.3);
    options.emit_complex_path = "/tmp/homsa_test_complex.txt";
    options.emit_clouds_path = "/tmp/homsa_test_clouds.csv";
    run_homology(circle, options);
    std::ifstream complex_in(options.emit_complex_path), clouds_in(options.emit_clouds_path);
    REQUIRE(complex_in.good());
    REQUIRE(clouds_in.good());
    std::stringstream first;
    first << complex_in.rdbuf();
    run_homology(circle, options);
    std::ifstream again(options.emit_complex_path);
    std::stringstream second;
    second << again.rdbuf();
    CHECK(first.str() == second.str());
    CHECK(first.str().find("0 ") == 0); // vertices lead the dump
    std::remove(options.emit_complex_path.c_str());
    std::remove(options.emit_clouds_path.c_str());
}

TEST_CASE("n = 1 inputs are accepted and flagged") {
    ProblemInput interval = parse("vars x; poly p = x^2 - 1; formula (p <= 0)");
    RunOptions options = fast_options(4, 0.3);
    HomologyReport report = run_homology(interval, options);
    // the interval [-1, 1] is contractible: H_0 = Z
    REQUIRE(!report.groups.groups.empty());
    CHECK(report.groups.groups[0].betti == 1);
    bool flagged = false;
    for (const auto& note : report.notes)
        if (note.find("n = 1") != std::string::npos) flagged = true;
    CHECK(flagged);
}

TEST_CASE("paper parameters end to end on the line") {
    // W = {x = 0} in R^1: the homogenized pair (||p|| X0, X1) has
    // kappa_bar = sqrt(2) exactly, so the guaranteed parameter choices stay
    // at a desk-sized circle grid and the full certified pipeline runs.
    ProblemInput point = parse("vars x; poly p = x; formula (p = 0)");
    RunOptions options;
    options.threads = 2; // defaults otherwise: rho = 0.01, no overrides
    HomologyReport report = run_homology(point, options);
    CHECK(report.mode == "paper-parameters");
    CHECK(report.window_ok);
    CHECK(report.K == doctest::Approx(std::sqrt(2.0)));
    REQUIRE(report.groups.groups.size() == 1);
    CHECK(report.groups.groups[0].betti == 1); // a single point
    CHECK(report.groups.groups[0].torsion.empty());
}

TEST_CASE("paper parameters on an interval") {
    // W = [-1, 1] in R^1 is contractible as well, but with a quadratic
    // description; still within the certified regime on S^1.
    ProblemInput interval = parse("vars x; poly p = x^2 - 1; formula (p <= 0)");
    RunOptions options;
    options.threads = 2;
    HomologyReport report = run_homology(interval, options);
    CHECK(report.mode == "paper-parameters");
    CHECK(report.window_ok);
    REQUIRE(!report.groups.groups.empty());
    CHECK(report.groups.groups[0].betti == 1);
}
