#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace covert {

class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Slot-level physical parameters. All powers and variances are linear.
struct SystemConfig {
    int n = 100;              ///< channel uses per slot
    double lambda_ab = 1.0;   ///< E|h_ab|^2
    double sigma_b2 = 1.0;    ///< noise variance at Bob
    double sigma_w2 = 1.0;    ///< noise variance at Willie
    double epsilon = 0.1;     ///< covertness parameter

    /// Throws ConfigError naming the first offending field.
    void validate() const;
};

/// Split of the slot energy between pilots and data.
///
/// Constructed either from (rho, eta, n_p) or from explicit per-symbol powers.
/// Total-energy consistency rho_p * n_p + rho_d * n_d = rho * n holds in both
/// cases.
class PowerAllocation {
public:
    static PowerAllocation from_fraction(int n, double rho, double eta, int n_p);
    static PowerAllocation from_powers(int n, int n_p, double rho_p, double rho_d);
    /// rho_p = rho_d = rho, i.e. eta = n_d / n.
    static PowerAllocation equal_power(int n, double rho, int n_p);

    int n() const noexcept { return n_; }
    int n_p() const noexcept { return n_p_; }
    int n_d() const noexcept { return n_ - n_p_; }
    double rho() const noexcept { return rho_; }
    double eta() const noexcept { return eta_; }
    double rho_p() const noexcept { return rho_p_; }
    double rho_d() const noexcept { return rho_d_; }

    bool is_equal_power(double rel_tol = 1e-9) const noexcept;

private:
    PowerAllocation(int n, int n_p, double rho, double eta, double rho_p, double rho_d)
        : n_(n), n_p_(n_p), rho_(rho), eta_(eta), rho_p_(rho_p), rho_d_(rho_d) {}

    int n_;
    int n_p_;
    double rho_;
    double eta_;
    double rho_p_;
    double rho_d_;
};

/// Second-order statistics of the MMSE split h = h_hat + h_tilde.
struct EstimationStats {
    double var_h_hat = 0.0;
    double var_h_tilde = 0.0;
    double var_eff_noise = 0.0;  ///< sigma_b2 + rho_d * var_h_tilde
};

EstimationStats estimation_stats(const SystemConfig& cfg, const PowerAllocation& alloc);

/// Post-estimation SINR at Bob.
double sinr(const SystemConfig& cfg, const PowerAllocation& alloc);

/// SINR written directly in (rho, eta, n_p), evaluated in the same shape as
/// the closed form: lambda^2 rho n eta (1-eta) /
/// ((n-n_p) sigma_b2 [lambda (1-eta) + sigma_b2/(rho n) + lambda eta/(n-n_p)]).
double sinr_eta(const SystemConfig& cfg, double rho, double eta, int n_p);

/// SINR scaled by the data fraction (n - n_p) / n.
double effective_sinr(const SystemConfig& cfg, const PowerAllocation& alloc);

/// Effective SINR with rho_p = rho_d = rho and a real-valued pilot count,
/// used for the continuous relaxation.
double effective_sinr_equal_power(const SystemConfig& cfg, double rho, double n_p);

}  // namespace covert
