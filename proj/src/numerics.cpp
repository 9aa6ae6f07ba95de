#include "semcom/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace semcom {

namespace {

constexpr double kTailSwitch = 6.0;

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(what) + ": non-finite argument");
    }
}

// Q(x) * sqrt(2 pi) * exp(x^2 / 2) for x > 0 via the Laplace continued fraction
// 1 / (x + 1/(x + 2/(x + 3/(x + ...)))), evaluated with modified Lentz.
double mills_ratio(double x) {
    constexpr double tiny = 1e-300;
    double f = x;
    double c = x;
    double d = 0.0;
    for (int k = 1; k < 500; ++k) {
        d = x + k * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = x + k / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return 1.0 / f;
}

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double gamma_series(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    for (int n = 1; n < 10000; ++n) {
        term *= x / (s + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Upper regularized gamma Q(s, x) by continued fraction, valid for x >= s + 1.
double gamma_continued_fraction(double s, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

}  // namespace

Precision::Precision(double tol, std::size_t iters) : abs_tol(tol), max_iter(iters) {
    if (!(tol > 0.0)) throw DomainError("Precision: abs_tol must be positive");
    if (iters < 1) throw DomainError("Precision: max_iter must be at least 1");
}

double q_function(double x) {
    require_finite(x, "q_function");
    if (x > kTailSwitch) {
        return normal_pdf(x) * mills_ratio(x);
    }
    if (x < -kTailSwitch) {
        return 1.0 - normal_pdf(-x) * mills_ratio(-x);
    }
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double log_q_function(double x) {
    require_finite(x, "log_q_function");
    if (x > kTailSwitch) {
        return -0.5 * x * x - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(mills_ratio(x));
    }
    return std::log(q_function(x));
}

double q_inverse(double p, const Precision& prec) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("q_inverse: probability must lie in (0, 1)");
    }
    if (p == 0.5) return 0.0;

    // Q is decreasing; bracket the root and bisect in log space until Newton is safe.
    double lo = -40.0;
    double hi = 40.0;
    const double log_p = std::log(p);
    auto residual = [&](double x) { return log_q_function(x) - log_p; };

    double x = 0.0;
    for (std::size_t i = 0; i < 60; ++i) {
        x = 0.5 * (lo + hi);
        if (residual(x) > 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        if (hi - lo < 1e-3) break;
    }
    x = 0.5 * (lo + hi);
    for (std::size_t i = 0; i < prec.max_iter; ++i) {
        // d/dx log Q(x) = -phi(x) / Q(x)
        const double lq = log_q_function(x);
        const double slope = -std::exp(std::log(normal_pdf(x)) - lq);
        double step = (lq - log_p) / slope;
        double next = x - step;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
            step = x - next;
        }
        if (residual(next) > 0.0) {
            lo = next;
        } else {
            hi = next;
        }
        x = next;
        if (std::fabs(step) < std::max(prec.abs_tol, 1e-15 * std::fabs(x))) break;
    }
    return x;
}

double regularized_lower_gamma(double s, double x) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw DomainError("regularized_lower_gamma: shape must be positive and finite");
    }
    if (!(x >= 0.0)) {
        throw DomainError("regularized_lower_gamma: x must be non-negative");
    }
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < s + 1.0) return gamma_series(s, x);
    return 1.0 - gamma_continued_fraction(s, x);
}

double chi_square_quantile(double zeta, std::size_t dof, const Precision& prec) {
    if (!(zeta > 0.0 && zeta < 1.0)) {
        throw DomainError("chi_square_quantile: probability must lie in (0, 1)");
    }
    if (dof < 1) throw DomainError("chi_square_quantile: dof must be at least 1");

    const double shape = 0.5 * static_cast<double>(dof);
    auto cdf = [&](double q) { return regularized_lower_gamma(shape, 0.5 * q); };
    auto pdf = [&](double q) {
        if (q <= 0.0) return 0.0;
        return std::exp((shape - 1.0) * std::log(0.5 * q) - 0.5 * q - std::lgamma(shape)) * 0.5;
    };

    double lo = 0.0;
    double hi = std::max(1.0, 2.0 * static_cast<double>(dof));
    while (cdf(hi) < zeta) {
        lo = hi;
        hi *= 2.0;
    }
    double x = 0.5 * (lo + hi);
    for (std::size_t i = 0; i < 40; ++i) {
        x = 0.5 * (lo + hi);
        if (cdf(x) < zeta) {
            lo = x;
        } else {
            hi = x;
        }
        if (hi - lo < 1e-6 * std::max(1.0, x)) break;
    }
    x = 0.5 * (lo + hi);
    for (std::size_t i = 0; i < prec.max_iter; ++i) {
        const double f = cdf(x) - zeta;
        const double slope = pdf(x);
        double next = slope > 0.0 ? x - f / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (cdf(next) < zeta) {
            lo = next;
        } else {
            hi = next;
        }
        const double step = std::fabs(next - x);
        x = next;
        if (step < std::max(prec.abs_tol, 1e-15 * x)) break;
    }
    return x;
}

double lambert_w0(double x, const Precision& prec) {
    require_finite(x, "lambert_w0");
    constexpr double inv_e = 1.0 / std::numbers::e;
    if (x < -inv_e) {
        if (x > -inv_e - 1e-15) return -1.0;
        throw DomainError("lambert_w0: argument below -1/e");
    }
    if (x == 0.0) return 0.0;
    if (x > 1e300) return lambert_w0_of_exp(std::log(x), prec);

    double w;
    if (x < -0.32) {
        // branch-point expansion in p = sqrt(2 (e x + 1))
        const double p = std::sqrt(std::max(0.0, 2.0 * (std::numbers::e * x + 1.0)));
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    } else if (x < 3.0) {
        w = std::log1p(x);
        if (x < 0.0) w = x * (1.0 - x);
    } else {
        const double l1 = std::log(x);
        const double l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }

    for (std::size_t i = 0; i < prec.max_iter; ++i) {
        // Halley step on f(w) = w e^w - x
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double wp1 = w + 1.0;
        if (wp1 == 0.0) break;
        const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        const double step = f / denom;
        w -= step;
        if (w < -1.0) w = -1.0;
        if (std::fabs(step) <= prec.abs_tol * (1.0 + std::fabs(w))) break;
    }
    return w;
}

double lambert_w0_of_exp(double log_x, const Precision& prec) {
    require_finite(log_x, "lambert_w0_of_exp");
    if (log_x < 1.0) return lambert_w0(std::exp(log_x), prec);
    // Solve w + ln w = log_x with Newton; w > 0 here.
    double w = log_x - std::log(log_x);
    if (w <= 0.0) w = 1.0;
    for (std::size_t i = 0; i < prec.max_iter; ++i) {
        const double f = w + std::log(w) - log_x;
        const double step = f / (1.0 + 1.0 / w);
        w -= step;
        if (w <= 0.0) w = 1e-12;
        if (std::fabs(step) <= prec.abs_tol * (1.0 + w)) break;
    }
    return w;
}

}  // namespace semcom
