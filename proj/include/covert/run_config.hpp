#pragma once

#include "covert/link_model.hpp"
#include "covert/monte_carlo.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace covert::cli {

enum class Units { Linear, Dbm };

double dbm_to_linear(double dbm);
double linear_to_dbm(double linear);

struct Fig1Settings {
    double rho = 0.05;
    std::vector<int> n_p{20, 50};
    std::vector<double> eta;  ///< 0.05, 0.10, ..., 0.95 by default
};

struct Fig2Settings {
    std::vector<double> epsilon{0.05, 0.1, 0.2};
};

struct Fig3Settings {
    std::vector<double> epsilon;  ///< 0.02, 0.03, ..., 0.30 by default
    std::vector<int> n{100, 200, 400};
};

struct SweepSettings {
    std::vector<double> epsilon;
    std::vector<int> n{50, 100, 500};
};

struct VerifySettings {
    std::vector<int> n{10, 100, 500};
    std::vector<double> rho{0.05, 0.2};
    double pilot_fraction = 0.2;  ///< n_p = max(1, round(fraction * n))
    double z_limit = 3.0;
    double sinr_rel_tol = 0.02;
};

/// Everything a subcommand needs, fully resolved (defaults applied, powers
/// converted to linear).
struct RunConfig {
    SystemConfig system;
    mc::McConfig mc;
    Units units = Units::Linear;
    Fig1Settings fig1;
    Fig2Settings fig2;
    Fig3Settings fig3;
    SweepSettings sweep;
    VerifySettings verify;
    std::vector<std::string> warnings;

    RunConfig();

    /// Canonical text form; the basis of config_hash().
    std::string canonical() const;
    /// FNV-1a 64 of canonical(), as 16 hex digits.
    std::string config_hash() const;
};

/// Parses the INI-style config. Unsuffixed power values (rho, sigma_b2,
/// sigma_w2) use `units`; a `dBm` or `lin` suffix overrides it. Lists are
/// comma separated; `start:step:stop` expands to an inclusive range.
/// Throws ConfigError naming the offending key.
RunConfig parse_run_config(const std::string& text, Units units = Units::Linear);
RunConfig load_run_config(const std::filesystem::path& path, Units units = Units::Linear);

/// Re-checks every field and grid. Throws ConfigError.
void validate(const RunConfig& rc);

}  // namespace covert::cli
