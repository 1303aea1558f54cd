#include "covert/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace covert::specfun {

namespace {

// ln of the common prefactor x^s e^{-x} / Gamma(s).
double log_prefactor(double s, double x) {
    return s * std::log(x) - x - ln_gamma(s);
}

// ln sum_{k>=0} x^k / (s (s+1) ... (s+k)); gamma(s,x) = x^s e^{-x} * sum.
double log_lower_series(double s, double x) {
    double a = s;
    double term = 1.0 / s;
    double sum = term;
    for (int i = 0; i < kMaxIterations; ++i) {
        a += 1.0;
        term *= x / a;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kRelTolerance) {
            return std::log(sum);
        }
    }
    throw ConvergenceError("reg_gamma: lower series did not converge for s=" + std::to_string(s) +
                           ", x=" + std::to_string(x));
}

// Modified Lentz evaluation of the continued fraction for
// Gamma(s,x) e^{x} x^{-s}.
double log_upper_fraction(double s, double x) {
    constexpr double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIterations; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kRelTolerance) {
            return std::log(h);
        }
    }
    throw ConvergenceError("reg_gamma: continued fraction did not converge for s=" +
                           std::to_string(s) + ", x=" + std::to_string(x));
}

void check_args(double s, double x) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw DomainError("reg_gamma: shape must be positive and finite");
    }
    if (!(x >= 0.0) || std::isnan(x)) {
        throw DomainError("reg_gamma: argument must be non-negative");
    }
}

}  // namespace

double ln_gamma(double s) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw DomainError("ln_gamma: argument must be positive and finite");
    }
    // glibc's lgamma only writes signgam, which is always +1 for s > 0.
    return std::lgamma(s);
}

RegGammaResult reg_gamma(double s, double x) {
    check_args(s, x);
    if (x == 0.0) return {0.0, 1.0};
    if (std::isinf(x)) return {1.0, 0.0};

    if (x < s + 1.0) {
        const double lower =
            std::min(1.0, std::exp(log_prefactor(s, x) + log_lower_series(s, x)));
        return {lower, 1.0 - lower};
    }
    const double upper =
        std::min(1.0, std::exp(log_prefactor(s, x) + log_upper_fraction(s, x)));
    return {1.0 - upper, upper};
}

double reg_lower_gamma(double s, double x) { return reg_gamma(s, x).lower; }

double reg_upper_gamma(double s, double x) { return reg_gamma(s, x).upper; }

double chi_square_cdf(int dof, double x) {
    if (dof < 1) throw DomainError("chi_square_cdf: degrees of freedom must be >= 1");
    if (!(x >= 0.0)) throw DomainError("chi_square_cdf: argument must be non-negative");
    return reg_lower_gamma(0.5 * dof, 0.5 * x);
}

}  // namespace covert::specfun
