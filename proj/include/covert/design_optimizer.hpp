#pragma once

#include "covert/link_model.hpp"

#include <stdexcept>

namespace covert {

/// No sign change of xi*(rho) - (1 - epsilon) inside the admissible bracket.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DesignResult {
    double rho_star = 0.0;
    double np_continuous = 0.0;
    int np_star = 1;
    int np_ceil = 1;
    int np_floor = 1;
    double gamma_eff_star = 0.0;
    double xi_star_achieved = 1.0;
};

struct PilotChoice {
    int np_star;
    int np_ceil;
    int np_floor;
};

/// Largest equal-power transmit power meeting xi* >= 1 - epsilon, i.e. the
/// root of xi*(rho) = 1 - epsilon. Bisection on a bracket that starts at
/// [1e-12 sigma_w2, sigma_w2] and doubles its upper end up to 1e3 sigma_w2.
double solve_rho_star(const SystemConfig& cfg);

/// Stationary point of the equal-power effective SINR over a real-valued
/// pilot count: (-kappa + sqrt(kappa (kappa + n lambda rho))) / (lambda rho)
/// with kappa = lambda rho + sigma_b2.
double np_continuous(const SystemConfig& cfg, double rho_star);

/// Integer pilot count: the better of ceil/floor of np_continuous, each
/// clamped into [1, n-1]. Ties go to the ceiling.
PilotChoice np_star(const SystemConfig& cfg, double rho_star);

/// d np_continuous / d rho. Always negative.
double np_sensitivity(const SystemConfig& cfg, double rho);

/// rho* first, then the pilot count at rho*.
DesignResult design(const SystemConfig& cfg);

}  // namespace covert
