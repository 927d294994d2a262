#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "homsa/errors.hpp"
#include "homsa/parser.hpp"
#include "homsa/pipeline.hpp"
#include "homsa/verify.hpp"

namespace {

homsa::ProblemInput read_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw homsa::input_error("cannot open input file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return homsa::parse(buffer.str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"homsa: integer homology of closed semialgebraic sets"};
    app.require_subcommand(1);

    std::string run_file, estimate_file;
    homsa::RunOptions options;
    bool json = false;
    double bound = 0.0;
    bool have_bound = false;
    unsigned ell = 0;
    bool have_ell = false;
    double epsilon = 0.0;
    bool have_epsilon = false;

    CLI::App* run = app.add_subcommand("run", "compute the homology of the input set");
    run->add_option("file", run_file, "problem description file")->required();
    run->add_option("--rho", options.rho, "estimate precision in (0,1)");
    run->add_option("--bound", bound, "bound B for the condition estimate")
        ->each([&](const std::string&) { have_bound = true; });
    run->add_option("--level-cap", options.level_cap, "maximum grid refinement level");
    run->add_option("--ell", ell, "override the sampling grid level")
        ->each([&](const std::string&) { have_ell = true; });
    run->add_option("--epsilon", epsilon, "override the Cech radius")
        ->each([&](const std::string&) { have_epsilon = true; });
    run->add_option("--threads", options.threads, "worker count (default HOMSA_THREADS)");
    run->add_flag("--json", json, "emit the report as JSON");
    run->add_option("--emit-complex", options.emit_complex_path,
                    "write the witness complex to a file");
    run->add_option("--emit-clouds", options.emit_clouds_path,
                    "write the atomic clouds to a CSV file");

    std::string suite;
    std::uint64_t seed = 1;
    unsigned verify_threads = 0;
    CLI::App* verify = app.add_subcommand("verify", "run an oracle suite");
    verify->add_option("suite", suite, "one of: weyl grid condition sampling cech snf endtoend tail")
        ->required();
    verify->add_option("--seed", seed, "random seed");
    verify->add_option("--threads", verify_threads, "worker count");

    CLI::App* estimate = app.add_subcommand("estimate", "condition estimate only");
    estimate->add_option("file", estimate_file, "problem description file")->required();
    estimate->add_option("--rho", options.rho, "estimate precision in (0,1)");
    estimate->add_option("--bound", bound, "bound B for the condition estimate")
        ->each([&](const std::string&) { have_bound = true; });
    estimate->add_option("--level-cap", options.level_cap, "maximum grid refinement level");
    estimate->add_option("--threads", options.threads, "worker count");
    estimate->add_flag("--json", json, "emit the report as JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (have_bound) options.bound_B = bound;
        if (have_ell) options.ell_override = ell;
        if (have_epsilon) options.epsilon_override = epsilon;

        if (run->parsed()) {
            homsa::HomologyReport report = homsa::run_homology(read_problem(run_file), options);
            std::cout << (json ? homsa::format_report_json(report)
                               : homsa::format_report_text(report));
            return 0;
        }
        if (estimate->parsed()) {
            homsa::HomologyReport report =
                homsa::run_estimate(read_problem(estimate_file), options);
            std::cout << (json ? homsa::format_report_json(report)
                               : homsa::format_report_text(report));
            return 0;
        }
        if (verify->parsed()) {
            homsa::SuiteResult result = homsa::run_suite(suite, seed, verify_threads);
            std::cout << "suite " << result.name << "\n";
            for (const auto& line : result.lines) std::cout << line << "\n";
            std::cout << result.passed << " passed, " << result.failed << " failed\n";
            return result.ok() ? 0 : 2;
        }
    } catch (const homsa::ill_posed_error& e) {
        std::cerr << "error (possibly ill-posed): " << e.what() << "\n";
        return 2;
    } catch (const homsa::resource_error& e) {
        std::cerr << "error (resource): " << e.what() << "\n";
        return 2;
    } catch (const homsa::input_error& e) {
        std::cerr << "error (input): " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
