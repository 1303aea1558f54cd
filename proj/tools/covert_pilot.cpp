// Command-line front end: pilot/data design queries, figure-data sweeps and
// the Monte Carlo verification suite. All results are CSV.

#include "covert/commands.hpp"
#include "covert/design_optimizer.hpp"
#include "covert/monte_carlo.hpp"
#include "covert/run_config.hpp"
#include "covert/specfun.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

using namespace covert;

int main(int argc, char** argv) {
    CLI::App app{"Pilot/data allocation for covert links under a warden's detection constraint"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> trials;
    std::string units = "linear";

    app.add_option("--config", config_path, "INI config file (all keys optional)");
    app.add_option("--out", out_path, "write CSV here instead of stdout");
    app.add_option("--seed", seed, "Monte Carlo seed");
    app.add_option("--trials", trials, "Monte Carlo trials per point");
    app.add_option("--units", units, "unit for unsuffixed powers in config and CSV")
        ->check(CLI::IsMember({"dbm", "linear"}));

    auto* design = app.add_subcommand("design", "optimal power and pilot count for [system]");
    auto* fig1 = app.add_subcommand("fig1", "detection error vs power split (Monte Carlo LRT)");
    auto* fig2 = app.add_subcommand("fig2", "effective SINR vs pilot count per epsilon");
    auto* fig3 = app.add_subcommand("fig3", "optimal pilot count vs epsilon per slot length");
    auto* sweep = app.add_subcommand("sweep", "full design over an epsilon x n grid");
    auto* verify = app.add_subcommand("verify", "Monte Carlo vs closed-form checks");
    for (auto* sub : {design, fig1, fig2, fig3, sweep, verify}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::kExitConfig;
    }

    cli::RunConfig rc;
    try {
        const auto u = units == "dbm" ? cli::Units::Dbm : cli::Units::Linear;
        if (config_path.empty()) {
            rc = cli::parse_run_config("", u);
        } else {
            rc = cli::load_run_config(config_path, u);
        }
        if (seed) rc.mc.seed = *seed;
        if (trials) rc.mc.trials = *trials;
        cli::validate(rc);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return cli::kExitConfig;
    }
    for (const auto& w : rc.warnings) std::cerr << "warning: " << w << '\n';

    cli::CommandOutput out;
    try {
        if (*design) out = cli::cmd_design(rc);
        else if (*fig1) out = cli::cmd_fig1(rc);
        else if (*fig2) out = cli::cmd_fig2(rc);
        else if (*fig3) out = cli::cmd_fig3(rc);
        else if (*sweep) out = cli::cmd_sweep(rc);
        else out = cli::cmd_verify(rc);
    } catch (const mc::BudgetError& e) {
        std::cerr << "refused: " << e.what() << '\n';
        return cli::kExitBudget;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return cli::kExitSolver;
    } catch (const specfun::ConvergenceError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return cli::kExitSolver;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return cli::kExitConfig;
    }

    if (!out.text.empty()) std::cout << out.text;
    if (out_path.empty()) {
        if (!out.text.empty()) std::cout << '\n';
        std::cout << out.csv;
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) {
            std::cerr << "cannot write " << out_path << '\n';
            return cli::kExitConfig;
        }
        f << out.csv;
    }
    return out.ok ? cli::kExitOk : cli::kExitCheckFailed;
}
