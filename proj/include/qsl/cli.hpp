#pragma once

// Command-line surface of the `qsl` executable:
//   qsl evolve --spec spec.json --out run.csv [--steps N]
//   qsl bound  --spec spec.json --sweep min:max:count[:log] --out curve.csv [--steps N]
//   qsl verify --suite mt|gain_loss|bethe_lamb|mixed|all [--tolerance X] [--out report.json]
//   qsl mixed  --spec rho_trajectory.json [--out report.json]
// Exit codes: 0 success, 1 verification failure, 2 input/schema error,
// 3 numerical failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsl/errors.hpp"
#include "qsl/model_spec.hpp"
#include "qsl/runner.hpp"
#include "qsl/verify.hpp"

namespace qsl {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitNumericFailure = 3;

namespace cli_detail {

inline ModelSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw invalid_input("cannot open spec file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_model_spec(text);
}

inline void write_or_print(const json& j, const std::string& out_path) {
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out)
            throw invalid_input("cannot open output file '" + out_path + "'");
        out << text;
    }
}

} // namespace cli_detail

inline int cli_main(std::vector<std::string> args) {
    CLI::App app{"Generalized quantum speed limits for arbitrary finite-dimensional evolution"};
    app.require_subcommand(1);

    std::string spec_path, out_path, sweep_text, suite = "all";
    std::optional<int> steps;
    double tolerance_scale = 1.0;

    auto* evolve_cmd = app.add_subcommand("evolve", "Evolve a model and write the speed profile CSV");
    evolve_cmd->add_option("--spec", spec_path, "Model spec JSON file")->required();
    evolve_cmd->add_option("--out", out_path, "Output CSV path")->required();
    evolve_cmd->add_option("--steps", steps, "Override the grid step count");

    auto* bound_cmd = app.add_subcommand("bound", "Sweep the window length and write the bound CSV");
    bound_cmd->add_option("--spec", spec_path, "Model spec JSON file")->required();
    bound_cmd->add_option("--sweep", sweep_text, "Sweep as min:max:count[:log]")->required();
    bound_cmd->add_option("--out", out_path, "Output CSV path")->required();
    bound_cmd->add_option("--steps", steps, "Override the per-window step count");

    auto* verify_cmd = app.add_subcommand("verify", "Run oracle cross-checks and the formula audit");
    verify_cmd->add_option("--suite", suite, "mt|gain_loss|bethe_lamb|mixed|all");
    verify_cmd->add_option("--tolerance", tolerance_scale, "Multiplier applied to all tolerances");
    verify_cmd->add_option("--out", out_path, "Report JSON path (stdout if omitted)");

    auto* mixed_cmd = app.add_subcommand("mixed", "Bound report for a density-matrix trajectory");
    mixed_cmd->add_option("--spec", spec_path, "Density trajectory JSON file")->required();
    mixed_cmd->add_option("--out", out_path, "Report JSON path (stdout if omitted)");

    try {
        std::vector<const char*> argv;
        argv.push_back("qsl");
        for (const auto& a : args)
            argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadInput;
    }

    try {
        if (evolve_cmd->parsed()) {
            run_evolve(cli_detail::load_spec(spec_path), out_path, steps);
        } else if (bound_cmd->parsed()) {
            run_bound(cli_detail::load_spec(spec_path), SweepSpec::parse(sweep_text), out_path,
                      steps);
        } else if (verify_cmd->parsed()) {
            const VerifyReport report = run_verify(suite, tolerance_scale);
            cli_detail::write_or_print(to_json(report), out_path);
            return report.pass ? kExitOk : kExitVerifyFailed;
        } else if (mixed_cmd->parsed()) {
            cli_detail::write_or_print(mixed_report_json(ingest_density_trajectory(spec_path)),
                                       out_path);
        }
        return kExitOk;
    } catch (const invalid_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const numeric_failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumericFailure;
    }
}

} // namespace qsl
