// medwit — command-line front end for the scenario catalog.

#include "medwit/scenarios.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInvariant = 3;

int cmd_run(const std::string& path, const std::string& out_dir, const std::optional<std::uint64_t>& seed) {
    medwit::ScenarioConfig cfg = medwit::load_config(path, seed);
    if (!out_dir.empty()) cfg.output = out_dir;
    medwit::validate(cfg);

    const medwit::RunReport rep = medwit::run(cfg);
    medwit::write_outputs(rep, cfg.output);

    std::cout << cfg.scenario << ": " << rep.rows.size() << " rows, " << rep.checks.size() << " checks, "
              << rep.wall_time_s << " s -> " << cfg.output << "\n";
    int failed = 0;
    for (const auto& c : rep.checks) {
        if (!c.passed) {
            ++failed;
            std::cerr << "invariant failed: " << c.name << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
        }
    }
    return failed ? kExitInvariant : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Witnesses of non-decomposable mediated quantum dynamics"};
    app.set_version_flag("--version", medwit::kVersion);
    app.require_subcommand(1);

    std::string run_path, out_dir;
    std::optional<std::uint64_t> seed;
    auto* run = app.add_subcommand("run", "Run the scenario described by a JSON config");
    run->add_option("config", run_path, "Path to the config file")->required();
    run->add_option("--out", out_dir, "Output directory (overrides the config)");
    run->add_option("--seed", seed, "Master seed (overrides the config)");

    app.add_subcommand("list-scenarios", "List the available scenarios");

    std::string validate_path;
    auto* val = app.add_subcommand("validate", "Check a config and print it with defaults filled in");
    val->add_option("config", validate_path, "Path to the config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (*run) return cmd_run(run_path, out_dir, seed);
        if (app.got_subcommand("list-scenarios")) {
            for (const auto& name : medwit::scenario_names()) {
                std::cout << name << (medwit::scenario_needs_seed(name) ? " [seed]" : "") << "\n    "
                          << medwit::scenario_summary(name) << "\n";
            }
            return kExitOk;
        }
        if (*val) {
            const medwit::ScenarioConfig cfg = medwit::load_config(validate_path);
            std::cout << medwit::to_json(cfg).dump(2) << "\n";
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
