#include "homsa/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "homsa/cech.hpp"
#include "homsa/errors.hpp"
#include "homsa/sampling.hpp"

namespace homsa {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void fill_input_echo(HomologyReport& report, const ProblemInput& input) {
    report.n_vars = input.tuple.n_vars();
    report.q = input.tuple.size();
    report.degrees = input.tuple.degrees();
    report.formula_size = input.formula.size();
    if (report.n_vars == 1)
        report.notes.push_back("n = 1 input accepted as an extension of the n >= 2 contract");
}

} // namespace

HomologyReport run_estimate(const ProblemInput& input, const RunOptions& options) {
    HomologyReport report;
    fill_input_echo(report, input);
    report.rho = options.rho;
    report.mode = "paper-parameters";
    auto t0 = std::chrono::steady_clock::now();
    EstimateOutcome outcome =
        kappa_bar_aff(input.tuple, options.rho, options.bound_B, options.level_cap,
                      options.threads);
    report.times.estimate_s = seconds_since(t0);
    report.times.total_s = report.times.estimate_s;
    report.K = outcome.K;
    report.estimate_status = outcome.status;
    report.estimate_iterations = outcome.iterations;
    report.estimate_level = outcome.final_level;
    if (outcome.status == EstimateStatus::FAIL)
        report.notes.push_back("estimate stopped at bound B <= K; kappa-bar is at least K");
    return report;
}

HomologyReport run_homology(const ProblemInput& input, const RunOptions& options) {
    HomologyReport report;
    fill_input_echo(report, input);
    report.rho = options.rho;

    auto t_total = std::chrono::steady_clock::now();

    PolyTuple f = homogenize_tuple(input.tuple);
    LaxFormula phi_h = homogenized_formula(input.formula);

    auto t0 = std::chrono::steady_clock::now();
    EstimateOutcome outcome = estimate_kappa_bar(f, options.rho, options.bound_B,
                                                 options.level_cap, options.threads);
    report.times.estimate_s = seconds_since(t0);
    report.K = outcome.K;
    report.estimate_status = outcome.status;
    report.estimate_iterations = outcome.iterations;
    report.estimate_level = outcome.final_level;
    if (outcome.status == EstimateStatus::FAIL)
        throw resource_error("condition estimate reached bound B (K = " +
                             std::to_string(outcome.K) + "); homology not certified");

    SimplicialOptions simp;
    simp.ell_override = options.ell_override;
    simp.epsilon_override = options.epsilon_override;
    simp.kmax_override = options.kmax_override;
    simp.table_cap = options.table_cap;
    simp.face_cap = options.face_cap;
    simp.threads = options.threads;
    simp.kappa_upper = outcome.K / (1.0 - options.rho);

    t0 = std::chrono::steady_clock::now();
    SimplicialResult simplicial_result = simplicial(f, phi_h, outcome.K, simp);
    report.times.complex_s = seconds_since(t0);

    report.level = simplicial_result.level;
    report.epsilon = simplicial_result.epsilon;
    report.kmax = simplicial_result.kmax;
    report.window_ok = simplicial_result.window_ok;
    report.mode = simplicial_result.overridden ? "overridden" : "paper-parameters";
    report.table_size = simplicial_result.clouds.table->size();
    for (const auto& [poly, slots] : simplicial_result.clouds.members_by_poly)
        for (std::size_t rel = 0; rel < 3; ++rel)
            report.cloud_sizes.push_back(
                CloudSizeEntry{poly, static_cast<Relation>(rel), slots[rel].size()});
    for (std::size_t dim = 0; dim <= simplicial_result.complex.kmax(); ++dim)
        report.face_counts.push_back(simplicial_result.complex.face_count(dim));

    if (simplicial_result.overridden && !simplicial_result.window_ok)
        report.notes.push_back(
            "overridden parameters violate the guarantee window "
            "9 sqrt(D) kb r_l < eps < 1/(14 D^(3/2) kb); homology rests on the caller");
    if (simplicial_result.complex.empty())
        report.notes.push_back("final complex is empty: the set may be empty");

    if (!options.emit_clouds_path.empty()) {
        std::ofstream out(options.emit_clouds_path);
        if (!out) throw input_error("cannot write clouds to " + options.emit_clouds_path);
        dump_clouds_csv(simplicial_result.clouds, out);
    }
    if (!options.emit_complex_path.empty()) {
        std::ofstream out(options.emit_complex_path);
        if (!out) throw input_error("cannot write complex to " + options.emit_complex_path);
        dump_complex(simplicial_result.complex, out);
    }

    std::size_t sphere_dim = f.n_vars() - 1;
    std::size_t top_dim = sphere_dim == 0 ? 0 : sphere_dim - 1;
    top_dim = std::min(top_dim, simplicial_result.kmax);
    t0 = std::chrono::steady_clock::now();
    report.groups = homology(simplicial_result.complex, top_dim, options.threads);
    report.times.homology_s = seconds_since(t0);

    report.times.total_s = seconds_since(t_total);
    return report;
}

std::string format_group(const HomologyGroup& group) {
    std::ostringstream out;
    if (group.betti == 0 && group.torsion.empty()) return "0";
    bool first = true;
    if (group.betti == 1) {
        out << "Z";
        first = false;
    } else if (group.betti > 1) {
        out << "Z^" << group.betti;
        first = false;
    }
    for (const BigInt& t : group.torsion) {
        if (!first) out << " + ";
        out << "Z/" << t;
        first = false;
    }
    return out.str();
}

namespace {

std::string relation_key(Relation rel) {
    switch (rel) {
    case Relation::LE: return "le";
    case Relation::EQ: return "eq";
    case Relation::GE: return "ge";
    }
    return "?";
}

} // namespace

std::string format_report_text(const HomologyReport& report) {
    std::ostringstream out;
    out.precision(12);
    out << "mode: " << report.mode << "\n";
    out << "input: n=" << report.n_vars << " q=" << report.q << " degrees=[";
    for (std::size_t i = 0; i < report.degrees.size(); ++i)
        out << (i ? "," : "") << report.degrees[i];
    out << "] size(formula)=" << report.formula_size << "\n";
    out << "estimate: K=" << report.K << " status="
        << (report.estimate_status == EstimateStatus::OK ? "ok" : "fail")
        << " iterations=" << report.estimate_iterations << " level=" << report.estimate_level
        << " rho=" << report.rho << "\n";
    if (!report.face_counts.empty() || report.level > 0) {
        out << "parameters: level=" << report.level << " epsilon=" << report.epsilon
            << " kmax=" << report.kmax << " window=" << (report.window_ok ? "ok" : "violated")
            << "\n";
        out << "clouds: table=" << report.table_size;
        for (const auto& entry : report.cloud_sizes)
            out << " p" << entry.poly << relation_text(entry.rel) << "0:" << entry.size;
        out << "\n";
        out << "faces:";
        for (std::size_t dim = 0; dim < report.face_counts.size(); ++dim)
            out << " dim" << dim << "=" << report.face_counts[dim];
        out << "\n";
    }
    if (!report.groups.groups.empty()) {
        out << "homology:\n";
        for (std::size_t k = 0; k < report.groups.groups.size(); ++k)
            out << "  H_" << k << " = " << format_group(report.groups.groups[k]) << "\n";
    }
    for (const auto& note : report.notes) out << "note: " << note << "\n";
    out.precision(3);
    out << "times: estimate=" << report.times.estimate_s << "s complex="
        << report.times.complex_s << "s homology=" << report.times.homology_s
        << "s total=" << report.times.total_s << "s\n";
    return out.str();
}

std::string format_report_json(const HomologyReport& report) {
    nlohmann::ordered_json j;
    j["mode"] = report.mode;
    j["input"] = {{"n", report.n_vars},
                  {"q", report.q},
                  {"degrees", report.degrees},
                  {"formula_size", report.formula_size}};
    j["estimate"] = {{"K", report.K},
                     {"status", report.estimate_status == EstimateStatus::OK ? "ok" : "fail"},
                     {"iterations", report.estimate_iterations},
                     {"level", report.estimate_level},
                     {"rho", report.rho}};
    j["parameters"] = {{"level", report.level},
                       {"epsilon", report.epsilon},
                       {"kmax", report.kmax},
                       {"window_ok", report.window_ok}};
    nlohmann::ordered_json clouds = nlohmann::ordered_json::array();
    for (const auto& entry : report.cloud_sizes)
        clouds.push_back({{"poly", entry.poly},
                          {"relation", relation_key(entry.rel)},
                          {"size", entry.size}});
    j["clouds"] = {{"table_size", report.table_size}, {"atomic", clouds}};
    j["face_counts"] = report.face_counts;
    nlohmann::ordered_json groups = nlohmann::ordered_json::array();
    for (const auto& group : report.groups.groups) {
        nlohmann::ordered_json torsion = nlohmann::ordered_json::array();
        for (const BigInt& t : group.torsion) torsion.push_back(t.str());
        groups.push_back({{"betti", group.betti}, {"torsion", torsion}});
    }
    j["homology"] = groups;
    j["notes"] = report.notes;
    j["times"] = {{"estimate_s", report.times.estimate_s},
                  {"complex_s", report.times.complex_s},
                  {"homology_s", report.times.homology_s},
                  {"total_s", report.times.total_s}};
    return j.dump(2) + "\n";
}

} // namespace homsa
