#pragma once

#include <cstddef>

#include "semcom/errors.hpp"

namespace semcom {

/// Convergence controls for the iterative solvers below.
struct Precision {
    double abs_tol = 1e-13;
    std::size_t max_iter = 200;

    Precision() = default;
    Precision(double tol, std::size_t iters);
};

/// Upper tail of the standard normal distribution, Q(x) = P(Z > x).
///
/// Uses erfc for |x| <= 6 and a continued-fraction tail beyond, so deep tails
/// keep full relative accuracy until the result leaves the double range.
double q_function(double x);

/// Natural log of Q(x); finite for every finite x.
double log_q_function(double x);

/// Inverse of q_function on (0, 1).
double q_inverse(double p, const Precision& prec = {});

/// P(s, x) = gamma(s, x) / Gamma(s).
double regularized_lower_gamma(double s, double x);

/// Quantile of the chi-square distribution with `dof` degrees of freedom,
/// i.e. Gamma(dof/2, rate 1/2).
double chi_square_quantile(double zeta, std::size_t dof, const Precision& prec = {});

/// Principal branch W0 of the Lambert W function on [-1/e, inf).
double lambert_w0(double x, const Precision& prec = {});

/// W0(exp(log_x)) without forming exp(log_x); for arguments that overflow a double.
double lambert_w0_of_exp(double log_x, const Precision& prec = {});

}  // namespace semcom
