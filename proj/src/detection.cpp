#include "covert/detection.hpp"

#include "covert/specfun.hpp"

#include <algorithm>
#include <cmath>

namespace covert {

namespace {

// ln(1 + x) - x / (1 + x): per-symbol KL divergence for an SNR of x.
double segment_divergence(double snr) {
    if (snr == 0.0) return 0.0;
    if (snr < 1e-4) {
        // x^2/2 - 2x^3/3 + 3x^4/4; avoids the cancellation in the closed form.
        return snr * snr * (0.5 - snr * (2.0 / 3.0 - 0.75 * snr));
    }
    return std::log1p(snr) - snr / (1.0 + snr);
}

}  // namespace

double kl_divergence(const SystemConfig& cfg, const PowerAllocation& alloc) {
    return alloc.n_p() * segment_divergence(alloc.rho_p() / cfg.sigma_w2) +
           alloc.n_d() * segment_divergence(alloc.rho_d() / cfg.sigma_w2);
}

double kl_divergence_eta(const SystemConfig& cfg, double rho, double eta, int n_p) {
    return kl_divergence(cfg, PowerAllocation::from_fraction(cfg.n, rho, eta, n_p));
}

double kl_divergence_deta(const SystemConfig& cfg, double rho, double eta, int n_p) {
    const double n = cfg.n;
    const double np = n_p;
    const double nd = n - np;
    const double s2 = cfg.sigma_w2;
    const double nr = n * rho;
    const double num = n * n * rho * rho * (n * eta - nd) *
                       (nr * nr * eta * eta - nr * nr * eta + nd * np * s2 * s2);
    const double a = n * eta * rho + nd * s2;
    const double b = (1.0 - eta) * nr + np * s2;
    return num / (a * a * b * b);
}

double covertness_lower_bound(double d01) {
    if (!(d01 >= 0.0)) throw specfun::DomainError("covertness_lower_bound: d01 must be >= 0");
    return std::max(0.0, 1.0 - std::sqrt(d01 / 2.0));
}

double optimal_threshold(double rho, double sigma_w2) {
    const double snr = rho / sigma_w2;
    // ln(1+x)/x -> 1 as x -> 0, which recovers tau* -> sigma_w2.
    const double log_ratio = snr < 1e-8 ? 1.0 - snr / 2.0 : std::log1p(snr) / snr;
    return (sigma_w2 + rho) * log_ratio;
}

ErrorPair radiometer_errors(int n, double rho, double sigma_w2, double threshold) {
    // n * mean power / variance is Gamma(n, 1) under either hypothesis.
    const double alpha = specfun::reg_gamma(n, n * threshold / sigma_w2).upper;
    const double beta = specfun::reg_gamma(n, n * threshold / (rho + sigma_w2)).lower;
    return {alpha, beta};
}

DetectionReport min_detection_error(const SystemConfig& cfg, double rho) {
    DetectionReport r;
    const double snr = rho / cfg.sigma_w2;
    r.d01 = cfg.n * segment_divergence(snr);
    r.xi_lower_bound = covertness_lower_bound(r.d01);
    if (rho == 0.0) {
        r.tau_star = cfg.sigma_w2;
        r.alpha = 0.0;
        r.beta = 1.0;
        r.xi_star = 1.0;
        return r;
    }
    const double tau = optimal_threshold(rho, cfg.sigma_w2);
    const auto [alpha, beta] = radiometer_errors(cfg.n, rho, cfg.sigma_w2, tau);
    r.tau_star = tau;
    r.alpha = alpha;
    r.beta = beta;
    r.xi_star = alpha + beta;
    return r;
}

DetectionReport detection_report(const SystemConfig& cfg, const PowerAllocation& alloc) {
    if (alloc.is_equal_power(kEqualPowerTolerance)) {
        DetectionReport r = min_detection_error(cfg, alloc.rho());
        r.d01 = kl_divergence(cfg, alloc);
        r.xi_lower_bound = covertness_lower_bound(r.d01);
        return r;
    }
    DetectionReport r;
    r.d01 = kl_divergence(cfg, alloc);
    r.xi_lower_bound = covertness_lower_bound(r.d01);
    return r;
}

}  // namespace covert
