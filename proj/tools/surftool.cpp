// command line front end.  reads scenario files, runs the requested
// computation, renders the report (canonical json or markdown) and maps
// results to exit codes: 0 success, 1 refutation, 2 usage or schema error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "surf/cli.hpp"

namespace {

surf::Json load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw surf::SchemaError("cannot open scenario file: " + path);
    surf::Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw surf::SchemaError("scenario parse error: " + std::string(e.what()));
    }
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact-arithmetic toolkit for surfaces with chi = 5, K^2 = 9 and a canonical involution"};
    app.require_subcommand(1);

    std::string out_path;
    bool as_json = false, as_md = false;
    long chi_v = 5, k2_v = 9;
    std::string tau = "all";
    std::string scenario_path;
    long seed = -1;
    long target = 5;
    std::string perturb;

    auto add_common = [&](CLI::App* sub, bool with_scenario, bool with_seed) {
        sub->add_option("--out", out_path, "also write the report to this file");
        sub->add_flag("--json", as_json, "canonical json output");
        sub->add_flag("--markdown", as_md, "markdown output (the default)");
        if (with_scenario)
            sub->add_option("scenario", scenario_path, "scenario json file")->required();
        if (with_seed) sub->add_option("--seed", seed, "override the scenario seed");
    };

    CLI::App* c_classify =
        app.add_subcommand("classify", "enumerate involution branches and quotient cases");
    c_classify->add_option("--chi", chi_v, "chi(O) of the surface (default 5)");
    c_classify->add_option("--k2", k2_v, "K^2 of the surface (default 9)");
    c_classify->add_option("--tau", tau, "restrict to one fixed-point count, or \"all\"");
    add_common(c_classify, false, false);

    CLI::App* c_rr = app.add_subcommand(
        "riemann-roch", "Euler characteristics and genera of scenario divisors");
    add_common(c_rr, true, false);

    CLI::App* c_nef =
        app.add_subcommand("nef-check", "interpolate and certify a nef decomposition");
    add_common(c_nef, true, true);

    CLI::App* c_bpf =
        app.add_subcommand("bpf-check", "run a base-point-freeness derivation chain");
    add_common(c_bpf, true, true);

    CLI::App* c_moduli =
        app.add_subcommand("moduli", "dimensions of the six branch-data families");
    add_common(c_moduli, false, false);

    CLI::App* c_deform =
        app.add_subcommand("deform", "equisingular deformation bounds, two routes");
    add_common(c_deform, false, false);

    CLI::App* c_enum = app.add_subcommand(
        "enumerate-singularities", "singular-fibre budgets of a genus-2 fibration");
    c_enum->add_option("--target", target, "total weight to distribute (default 5)");
    add_common(c_enum, false, false);

    CLI::App* c_repro = app.add_subcommand(
        "reproduce-paper", "recompute every headline quantity and diff against the record");
    c_repro->add_option("--perturb", perturb,
                        "perturb one expected quantity (self-test of the diff)");
    add_common(c_repro, false, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        surf::Outcome o;
        if (*c_classify) {
            o = surf::cmd_classify(chi_v, k2_v, tau);
        } else if (*c_rr) {
            o = surf::cmd_riemann_roch(surf::parse_scenario(load_scenario_file(scenario_path)));
        } else if (*c_nef) {
            surf::Scenario s = surf::parse_scenario(load_scenario_file(scenario_path));
            std::optional<std::uint64_t> ov;
            if (seed >= 0) ov = static_cast<std::uint64_t>(seed);
            o = surf::cmd_nef_check(s, ov);
        } else if (*c_bpf) {
            surf::Scenario s = surf::parse_scenario(load_scenario_file(scenario_path));
            if (seed >= 0) s.seed = static_cast<std::uint64_t>(seed);
            o = surf::cmd_bpf_check(s);
        } else if (*c_moduli) {
            o = surf::cmd_moduli();
        } else if (*c_deform) {
            o = surf::cmd_deform();
        } else if (*c_enum) {
            if (target < 1) throw surf::SchemaError("--target: expected a positive integer");
            o = surf::cmd_enumerate(target);
        } else if (*c_repro) {
            o = surf::cmd_reproduce(perturb);
        }
        std::string text = surf::render_report(o.report, !as_json);
        std::cout << text;
        if (!out_path.empty()) {
            std::ofstream f(out_path);
            if (!f) throw surf::SchemaError("cannot open output file: " + out_path);
            f << text;
        }
        return o.exit_code;
    } catch (const surf::SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
