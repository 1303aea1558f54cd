#include "covert/link_model.hpp"

#include <cmath>

namespace covert {

namespace {

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

void check_counts(int n, int n_p) {
    if (n < 2) throw ConfigError("n", "need at least one pilot and one data symbol (n >= 2)");
    if (n_p < 1 || n_p > n - 1) throw ConfigError("n_p", "must lie in [1, n-1]");
}

}  // namespace

void SystemConfig::validate() const {
    if (n < 2) throw ConfigError("n", "must be >= 2");
    if (!positive_finite(lambda_ab)) throw ConfigError("lambda_ab", "must be positive");
    if (!positive_finite(sigma_b2)) throw ConfigError("sigma_b2", "must be positive");
    if (!positive_finite(sigma_w2)) throw ConfigError("sigma_w2", "must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon", "must lie in (0, 1)");
}

PowerAllocation PowerAllocation::from_fraction(int n, double rho, double eta, int n_p) {
    check_counts(n, n_p);
    if (!(rho >= 0.0) || !std::isfinite(rho)) throw ConfigError("rho", "must be non-negative");
    if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("eta", "must lie in (0, 1)");
    const int n_d = n - n_p;
    const double rho_p = (1.0 - eta) * rho * n / n_p;
    const double rho_d = eta * rho * n / n_d;
    return {n, n_p, rho, eta, rho_p, rho_d};
}

PowerAllocation PowerAllocation::from_powers(int n, int n_p, double rho_p, double rho_d) {
    check_counts(n, n_p);
    if (!(rho_p >= 0.0) || !std::isfinite(rho_p)) throw ConfigError("rho_p", "must be non-negative");
    if (!(rho_d >= 0.0) || !std::isfinite(rho_d)) throw ConfigError("rho_d", "must be non-negative");
    const int n_d = n - n_p;
    const double energy = rho_p * n_p + rho_d * n_d;
    const double rho = energy / n;
    // eta is undefined without energy; report the equal-power fraction.
    const double eta = energy > 0.0 ? rho_d * n_d / energy : static_cast<double>(n_d) / n;
    return {n, n_p, rho, eta, rho_p, rho_d};
}

PowerAllocation PowerAllocation::equal_power(int n, double rho, int n_p) {
    check_counts(n, n_p);
    if (!(rho >= 0.0) || !std::isfinite(rho)) throw ConfigError("rho", "must be non-negative");
    return {n, n_p, rho, static_cast<double>(n - n_p) / n, rho, rho};
}

bool PowerAllocation::is_equal_power(double rel_tol) const noexcept {
    if (rho_ == 0.0) return rho_p_ == rho_d_;
    return std::abs(rho_p_ - rho_d_) / rho_ < rel_tol;
}

EstimationStats estimation_stats(const SystemConfig& cfg, const PowerAllocation& alloc) {
    const double lambda = cfg.lambda_ab;
    const double pilot_energy = alloc.n_p() * alloc.rho_p();
    const double denom = lambda * pilot_energy + cfg.sigma_b2;
    EstimationStats st;
    st.var_h_hat = lambda * lambda * pilot_energy / denom;
    st.var_h_tilde = lambda * cfg.sigma_b2 / denom;
    st.var_eff_noise = cfg.sigma_b2 + alloc.rho_d() * st.var_h_tilde;
    return st;
}

double sinr(const SystemConfig& cfg, const PowerAllocation& alloc) {
    const double lambda = cfg.lambda_ab;
    const double s2 = cfg.sigma_b2;
    const double pilot_energy = alloc.n_p() * alloc.rho_p();
    const double rho_d = alloc.rho_d();
    const double num = rho_d * lambda * lambda * pilot_energy;
    if (num == 0.0) return 0.0;
    return num / (s2 * s2 + rho_d * lambda * s2 + s2 * lambda * pilot_energy);
}

double sinr_eta(const SystemConfig& cfg, double rho, double eta, int n_p) {
    check_counts(cfg.n, n_p);
    const double lambda = cfg.lambda_ab;
    const double s2 = cfg.sigma_b2;
    const double n = cfg.n;
    const double n_d = n - n_p;
    const double num = lambda * lambda * rho * n * eta * (1.0 - eta);
    if (num == 0.0) return 0.0;
    const double bracket = lambda * (1.0 - eta) + s2 / (rho * n) + lambda * eta / n_d;
    return num / (n_d * s2 * bracket);
}

double effective_sinr(const SystemConfig& cfg, const PowerAllocation& alloc) {
    return static_cast<double>(alloc.n_d()) / alloc.n() * sinr(cfg, alloc);
}

double effective_sinr_equal_power(const SystemConfig& cfg, double rho, double n_p) {
    const double lambda = cfg.lambda_ab;
    const double s2 = cfg.sigma_b2;
    const double n = cfg.n;
    const double gamma = lambda * lambda * rho * rho * n_p / (s2 * (s2 + lambda * rho * (n_p + 1.0)));
    return (n - n_p) / n * gamma;
}

}  // namespace covert
