#pragma once

#include "covert/link_model.hpp"

#include <optional>

namespace covert {

/// Willie-side summary for one allocation. The threshold and the exact
/// minimum error are only available in the equal-power regime; elsewhere the
/// caller has to fall back to simulation.
struct DetectionReport {
    double d01 = 0.0;
    double xi_lower_bound = 1.0;
    std::optional<double> tau_star;
    std::optional<double> xi_star;
    std::optional<double> alpha;
    std::optional<double> beta;
};

/// Relative tolerance on |rho_p - rho_d| / rho below which an allocation is
/// treated as equal-power.
inline constexpr double kEqualPowerTolerance = 1e-9;

/// KL divergence from the no-transmission observation law to the
/// transmission law (complex Gaussian, per-segment variances).
double kl_divergence(const SystemConfig& cfg, const PowerAllocation& alloc);

/// Same divergence written in terms of (rho, eta, n_p).
double kl_divergence_eta(const SystemConfig& cfg, double rho, double eta, int n_p);

/// d/d eta of kl_divergence_eta, closed form. Vanishes at eta = n_d / n.
double kl_divergence_deta(const SystemConfig& cfg, double rho, double eta, int n_p);

/// max(0, 1 - sqrt(d01 / 2)).
double covertness_lower_bound(double d01);

/// Radiometer threshold on the mean received power that minimises
/// alpha + beta when all n symbols carry power rho.
double optimal_threshold(double rho, double sigma_w2);

/// alpha and beta of the radiometer (1/n) sum |y|^2 > threshold when every
/// symbol has transmit power rho.
struct ErrorPair {
    double alpha;
    double beta;
};
ErrorPair radiometer_errors(int n, double rho, double sigma_w2, double threshold);

/// Closed-form minimum alpha + beta at Willie with rho_p = rho_d = rho.
/// Depends on the slot length only, never on the pilot/data split.
DetectionReport min_detection_error(const SystemConfig& cfg, double rho);

/// Full report for an arbitrary allocation. tau_star / xi_star / alpha / beta
/// are filled only when the allocation is equal-power.
DetectionReport detection_report(const SystemConfig& cfg, const PowerAllocation& alloc);

}  // namespace covert
