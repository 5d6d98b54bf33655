#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

// Regularized incomplete gamma and beta kernels, plus the two tail
// probabilities the detection pipeline needs (chi-squared and F).
// Series / continued-fraction split at the conventional crossover.

namespace meshwatch::numerics {

namespace detail {

inline constexpr int kMaxIter = 500;
inline constexpr double kEps = 1e-16;
inline constexpr double kTiny = 1e-300;

// Lower regularized gamma P(a,x) by series, valid for x < a + 1.
inline double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 0; n < kMaxIter; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma Q(a,x) by modified Lentz continued fraction,
// valid for x >= a + 1.
inline double gamma_q_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for the incomplete beta function (Lentz).
inline double beta_cf(double a, double b, double x) {
    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) break;
    }
    return h;
}

} // namespace detail

/// Lower regularized incomplete gamma P(a,x).
inline double gamma_p(double a, double x) {
    if (a <= 0.0) throw std::invalid_argument("gamma_p: a must be positive");
    if (x < 0.0) throw std::invalid_argument("gamma_p: x must be non-negative");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return detail::gamma_p_series(a, x);
    return 1.0 - detail::gamma_q_cf(a, x);
}

/// Upper regularized incomplete gamma Q(a,x) = 1 - P(a,x).
inline double gamma_q(double a, double x) {
    if (a <= 0.0) throw std::invalid_argument("gamma_q: a must be positive");
    if (x < 0.0) throw std::invalid_argument("gamma_q: x must be non-negative");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_cf(a, x);
}

/// Regularized incomplete beta I_x(a,b).
inline double beta_inc(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("beta_inc: a,b must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * detail::beta_cf(a, b, x) / a;
    }
    return 1.0 - front * detail::beta_cf(b, a, 1.0 - x) / b;
}

/// Upper-tail probability of the chi-squared distribution with df degrees
/// of freedom, P[X > x].
inline double chi2_sf(double x, int df) {
    if (df < 1) throw std::invalid_argument("chi2_sf: df must be >= 1");
    if (x < 0.0) throw std::invalid_argument("chi2_sf: x must be non-negative");
    return gamma_q(0.5 * df, 0.5 * x);
}

/// Lower-tail probability of the chi-squared distribution, P[X <= x].
inline double chi2_cdf(double x, int df) {
    if (df < 1) throw std::invalid_argument("chi2_cdf: df must be >= 1");
    if (x < 0.0) throw std::invalid_argument("chi2_cdf: x must be non-negative");
    return gamma_p(0.5 * df, 0.5 * x);
}

/// Critical value: the unique x with chi2_sf(x, df) == alpha, by bisection
/// to absolute tolerance 1e-9.
inline double chi2_critical(int df, double alpha) {
    if (df < 1) throw std::invalid_argument("chi2_critical: df must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("chi2_critical: alpha must be in (0,1)");
    double lo = 0.0;
    double hi = 1.0;
    while (chi2_sf(hi, df) > alpha && hi < 1e9) hi *= 2.0;
    for (int i = 0; i < 200 && (hi - lo) > 1e-9; ++i) {
        double mid = 0.5 * (lo + hi);
        if (chi2_sf(mid, df) > alpha) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Upper-tail probability of the F(d1, d2) distribution, P[F > x].
inline double f_sf(double x, int d1, int d2) {
    if (d1 < 1 || d2 < 1) throw std::invalid_argument("f_sf: degrees of freedom must be >= 1");
    if (x < 0.0) throw std::invalid_argument("f_sf: x must be non-negative");
    if (x == 0.0) return 1.0;
    // P[F > x] = I_{d2/(d2 + d1 x)}(d2/2, d1/2)
    double t = d2 / (d2 + static_cast<double>(d1) * x);
    return beta_inc(0.5 * d2, 0.5 * d1, t);
}

/// Lower-tail probability of the F(d1, d2) distribution.
inline double f_cdf(double x, int d1, int d2) {
    return 1.0 - f_sf(x, d1, d2);
}

} // namespace meshwatch::numerics
