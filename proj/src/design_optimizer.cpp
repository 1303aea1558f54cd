#include "covert/design_optimizer.hpp"

#include "covert/detection.hpp"

#include <algorithm>
#include <cmath>

namespace covert {

namespace {

// Enough halvings to exhaust double precision on any bracket inside the cap.
constexpr int kMaxBisections = 200;

double covertness_gap(const SystemConfig& cfg, double rho) {
    return *min_detection_error(cfg, rho).xi_star - (1.0 - cfg.epsilon);
}

}  // namespace

double solve_rho_star(const SystemConfig& cfg) {
    cfg.validate();
    const double cap = 1e3 * cfg.sigma_w2;
    double lo = 1e-12 * cfg.sigma_w2;
    double hi = cfg.sigma_w2;

    // xi* decreases in rho: the gap is positive at lo and must turn negative.
    if (covertness_gap(cfg, lo) < 0.0) {
        throw SolverError("solve_rho_star: covertness constraint violated even at rho = " +
                          std::to_string(lo));
    }
    while (covertness_gap(cfg, hi) > 0.0) {
        if (hi >= cap) {
            throw SolverError("solve_rho_star: no sign change below rho = " + std::to_string(cap));
        }
        lo = hi;
        hi = std::min(2.0 * hi, cap);
    }

    for (int i = 0; i < kMaxBisections; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gap = covertness_gap(cfg, mid);
        if (gap == 0.0) return mid;
        if (gap > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Both ends now bracket the root to within one ulp; take the closer one.
    return std::abs(covertness_gap(cfg, hi)) < std::abs(covertness_gap(cfg, lo)) ? hi : lo;
}

double np_continuous(const SystemConfig& cfg, double rho_star) {
    const double lr = cfg.lambda_ab * rho_star;
    const double kappa = lr + cfg.sigma_b2;
    const double n = cfg.n;
    // Rationalised form of the positive root; no cancellation for small rho.
    return n * kappa / (kappa + std::sqrt(kappa * (kappa + n * lr)));
}

PilotChoice np_star(const SystemConfig& cfg, double rho_star) {
    const double np = np_continuous(cfg, rho_star);
    const int n_max = cfg.n - 1;
    const int ceil_np = std::clamp(static_cast<int>(std::ceil(np)), 1, n_max);
    const int floor_np = std::clamp(static_cast<int>(std::floor(np)), 1, n_max);
    const double g_ceil = effective_sinr_equal_power(cfg, rho_star, ceil_np);
    const double g_floor = effective_sinr_equal_power(cfg, rho_star, floor_np);
    return {g_ceil >= g_floor ? ceil_np : floor_np, ceil_np, floor_np};
}

double np_sensitivity(const SystemConfig& cfg, double rho) {
    const double lambda = cfg.lambda_ab;
    const double lr = lambda * rho;
    const double kappa = lr + cfg.sigma_b2;
    const double nlr = cfg.n * lr;
    const double root = std::sqrt(kappa * (kappa + nlr));
    // 2 kappa + n lambda rho - 2 root, rewritten via the difference of squares.
    const double bracket = nlr * nlr / (2.0 * kappa + nlr + 2.0 * root);
    return -cfg.sigma_b2 * bracket / (2.0 * lambda * rho * rho * root);
}

DesignResult design(const SystemConfig& cfg) {
    DesignResult r;
    r.rho_star = solve_rho_star(cfg);
    r.np_continuous = np_continuous(cfg, r.rho_star);
    const PilotChoice choice = np_star(cfg, r.rho_star);
    r.np_star = choice.np_star;
    r.np_ceil = choice.np_ceil;
    r.np_floor = choice.np_floor;
    r.gamma_eff_star =
        effective_sinr(cfg, PowerAllocation::equal_power(cfg.n, r.rho_star, r.np_star));
    r.xi_star_achieved = *min_detection_error(cfg, r.rho_star).xi_star;
    return r;
}

}  // namespace covert
