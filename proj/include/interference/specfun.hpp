#pragma once

// Special functions needed by the analytic interference moments:
//  - Hurwitz zeta (direct sum + Euler-Maclaurin tail),
//  - Gauss 2F1 on the negative real axis,
//  - upper incomplete gamma for arbitrary real order, including the
//    negative orders Gamma(1-eta, x) appearing in the inner integrals.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "interference/quadrature.hpp"

namespace interference::specfun {

// zeta(s, a) = sum_{k>=0} (k+a)^{-s}, s > 1, a > 0.
// Direct summation until a+N is large, then Euler-Maclaurin correction:
//   tail = (a+N)^{1-s}/(s-1) + (a+N)^{-s}/2
//        + sum_j B_{2j}/(2j)! * (s)_{2j-1} * (a+N)^{-s-2j+1}.
inline double hurwitz_zeta(double s, double a) {
    if (!(s > 1.0)) throw std::invalid_argument("hurwitz_zeta: requires s > 1");
    if (!(a > 0.0)) throw std::invalid_argument("hurwitz_zeta: requires a > 0");

    // B_{2j}/(2j)! for j = 1..6
    static constexpr double bern[6] = {
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -5.2841901386874932e-10,
    };

    const double x_min = 16.0;
    const int n = (a >= x_min) ? 0 : static_cast<int>(std::ceil(x_min - a));
    double sum = 0.0, comp = 0.0;
    for (int k = n - 1; k >= 0; --k) { // small terms first
        const double t = std::pow(a + k, -s);
        const double y = t - comp;
        const double u = sum + y;
        comp = (u - sum) - y;
        sum = u;
    }
    const double x = a + n;
    double tail = std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
    double rising = s;                  // (s)_{2j-1} built incrementally
    double xp = std::pow(x, -s - 1.0);  // x^{-s-2j+1}
    for (int j = 0; j < 6; ++j) {
        tail += bern[j] * rising * xp;
        rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
        xp /= x * x;
    }
    return sum + tail;
}

namespace detail {

inline double gauss_2f1_series(double a, double b, double c, double z) {
    double term = 1.0, sum = 1.0;
    for (int n = 0; n < 20000; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        if (std::fabs(term) <= 1e-16 * std::fabs(sum)) return sum;
    }
    throw std::runtime_error("gauss_2f1: series failed to converge");
}

} // namespace detail

// 2F1(a, b; c; z) for z <= 0.  For z <= -0.5 the linear transformation
// 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1)) keeps the series
// argument small and positive.
inline double gauss_2f1(double a, double b, double c, double z) {
    if (z > 0.0) throw std::invalid_argument("gauss_2f1: only z <= 0 is supported");
    if (c <= 0.0 && c == std::floor(c))
        throw std::invalid_argument("gauss_2f1: c must not be a non-positive integer");
    if (z == 0.0) return 1.0;
    if (z <= -0.5) {
        const double w = z / (z - 1.0);
        return std::pow(1.0 - z, -a) * detail::gauss_2f1_series(a, c - b, c, w);
    }
    return detail::gauss_2f1_series(a, b, c, z);
}

namespace detail {

// e^x * Gamma(a, x) by the Legendre continued fraction (modified Lentz),
// stable for x not too small.
inline double gamma_upper_scaled_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
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
    return std::pow(x, a) * h;
}

// e^x * Gamma(a, x) for 0 < a < ~1.3 and small x, via the lower-gamma series.
inline double gamma_upper_scaled_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 300; ++n) {
        term *= x / (a + n);
        sum += term;
        if (term <= 1e-17 * sum) break;
    }
    // Gamma(a,x) = Gamma(a) - x^a e^{-x} * sum
    return std::exp(x) * std::tgamma(a) - std::pow(x, a) * sum;
}

// e^x * E1(x) for small x via the logarithmic series.
inline double e1_scaled_series(double x) {
    constexpr double euler_gamma = 0.57721566490153286061;
    double sum = -euler_gamma - std::log(x);
    double term = 1.0;
    for (int k = 1; k < 100; ++k) {
        term *= -x / k;
        sum -= term / k;
        if (std::fabs(term) <= 1e-18) break;
    }
    return std::exp(x) * sum;
}

} // namespace detail

// e^x * Gamma(a, x), x > 0, a any real.  Negative orders go through the
// downward recurrence  Gs(a-1,x) = (Gs(a,x) - x^{a-1})/(a-1)  starting from
// the order a - floor(a) in [0, 1).
inline double upper_incomplete_gamma_scaled(double a, double x) {
    if (!(x > 0.0))
        throw std::invalid_argument("upper_incomplete_gamma: requires x > 0");
    double a0 = a;
    int steps = 0;
    if (a <= 0.0) {
        a0 = a - std::floor(a);
        steps = static_cast<int>(std::lround(a0 - a));
    }
    double g;
    if (x >= 1.3 || (a0 > 0.0 && x >= a0 + 1.0)) {
        g = detail::gamma_upper_scaled_cf(a0, x);
    } else if (a0 > 0.0) {
        g = detail::gamma_upper_scaled_series(a0, x);
    } else {
        g = detail::e1_scaled_series(x); // Gamma(0, x) = E1(x)
    }
    double ac = a0;
    for (int i = 0; i < steps; ++i) {
        ac -= 1.0;
        g = (g - std::pow(x, ac)) / ac;
    }
    return g;
}

inline double upper_incomplete_gamma(double a, double x) {
    return std::exp(-x) * upper_incomplete_gamma_scaled(a, x);
}

} // namespace interference::specfun
