#pragma once

#include <stdexcept>
#include <string>

namespace covert::specfun {

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when a series or continued fraction fails to converge within the
/// iteration cap. Never swallowed into a best-effort value.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Regularized incomplete gamma pair P(s,x) and Q(s,x) = 1 - P(s,x).
struct RegGammaResult {
    double lower = 0.0;
    double upper = 1.0;
};

inline constexpr int kMaxIterations = 10000;
inline constexpr double kRelTolerance = 1e-15;

/// ln Gamma(s) for s > 0.
double ln_gamma(double s);

/// Both regularized incomplete gamma functions. The directly evaluated side
/// is chosen by the usual split (series for x < s + 1, continued fraction
/// otherwise) and the other side is its complement.
RegGammaResult reg_gamma(double s, double x);

/// P(s, x) = gamma(s, x) / Gamma(s).
double reg_lower_gamma(double s, double x);

/// Q(s, x) = 1 - P(s, x).
double reg_upper_gamma(double s, double x);

/// CDF of a chi-square variable with `dof` degrees of freedom.
double chi_square_cdf(int dof, double x);

}  // namespace covert::specfun
