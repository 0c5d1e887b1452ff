#pragma once

// First three raw moments of interference for the hardcore deployment,
// evaluated by iterated adaptive quadrature with the PCF truncated to exact
// branches below m*c, plus the PPP closed-form baseline and the derived
// statistics (variance, coefficient of variation, skewness).

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "interference/pcf.hpp"
#include "interference/quadrature.hpp"
#include "interference/scenario.hpp"
#include "interference/specfun.hpp"

namespace interference::moments {

using specfun::QuadratureSpec;

enum class Method { Analytic, Quadrature, MonteCarlo };

struct MomentSet {
    double mean = 0.0;
    double m2 = 0.0;
    std::optional<double> m3;
    double variance = 0.0;
    double std_dev = 0.0;
    double coeff_variation = 0.0;
    std::optional<double> skewness;
    Method method = Method::Analytic;
    int truncation_m = 0;          // 0 when not applicable
    bool accuracy_warning = false; // third moment requested with lambda*c > 0.6
};

// E{I} = 2 lambda r0^{1-eta} / (eta - 1); independent of c at fixed lambda.
inline double mean_interference(const ScenarioParams& p) {
    return 2.0 * p.lambda * std::pow(p.r0, 1.0 - p.eta) / (p.eta - 1.0);
}

// Campbell cumulants of the PPP baseline: kappa_n = 2 lambda n! r0^{1-n eta}/(n eta - 1).
inline double ppp_cumulant(const ScenarioParams& p, int n) {
    if (n < 1 || n > 3) throw std::invalid_argument("ppp_cumulant: n must be 1..3");
    const double fact = (n == 1) ? 1.0 : (n == 2) ? 2.0 : 6.0;
    return 2.0 * p.lambda * fact * std::pow(p.r0, 1.0 - n * p.eta) / (n * p.eta - 1.0);
}

namespace detail {

// int_{-inf}^{t} g(y) dy for the two-sided pathloss with a dead cell.
inline double pathloss_integral_below(double t, const ScenarioParams& p) {
    const double em1 = p.eta - 1.0;
    if (t <= -p.r0) return std::pow(-t, 1.0 - p.eta) / em1;
    const double left = std::pow(p.r0, 1.0 - p.eta) / em1;
    if (t <= p.r0) return left;
    return left + (std::pow(p.r0, 1.0 - p.eta) - std::pow(t, 1.0 - p.eta)) / em1;
}

inline QuadratureSpec inner_spec(const QuadratureSpec& outer) {
    QuadratureSpec s = outer;
    s.rel_tol = outer.rel_tol * 0.1; // inner 10x tighter than outer
    return s;
}

// Finite inner integral of pathloss(y) * rho_k(|y-x|) over an interval that
// may cross the cell; split at +-r0 so the adaptive rule sees smooth pieces.
template <class Rho>
inline double inner_over_interval(double ylo, double yhi, const ScenarioParams& p,
                                  const Rho& rho, const QuadratureSpec& spec) {
    const Pathloss g{p.r0, p.eta};
    auto f = [&](double y) { return g(y) * rho(y); };
    double cuts[4] = {ylo, yhi, yhi, yhi};
    int n = 2;
    if (-p.r0 > ylo && -p.r0 < yhi) cuts[n++] = -p.r0;
    if (p.r0 > ylo && p.r0 < yhi) cuts[n++] = p.r0;
    std::sort(cuts, cuts + n);
    double total = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        if (cuts[i + 1] > cuts[i]) {
            // pieces fully inside the cell integrate to zero
            if (cuts[i] >= -p.r0 && cuts[i + 1] <= p.r0) continue;
            total += specfun::integrate_finite(f, cuts[i], cuts[i + 1], spec).value;
        }
    }
    return total;
}

// mu * int_{y1}^{y2} w^{-eta} e^{-mu (w - y1)} dw  via the scaled incomplete
// gamma, assuming y2 > y1 > 0 (the integration path stays outside the cell).
inline double exp_weighted_pathloss(double y1, double y2, double mu, double eta) {
    using specfun::upper_incomplete_gamma_scaled;
    const double a = 1.0 - eta;
    const double s1 = upper_incomplete_gamma_scaled(a, mu * y1);
    const double s2 = upper_incomplete_gamma_scaled(a, mu * y2);
    return std::pow(mu, eta) * (s1 - std::exp(-mu * (y2 - y1)) * s2);
}

// S(m): pair term of E{I^2} with exact PCF branches below m*c and the
// lambda^2 tail beyond, both sides of the cell.
inline double pair_term(const ScenarioParams& p, int m, const QuadratureSpec& spec) {
    const QuadratureSpec ispec = inner_spec(spec);
    const double c = p.c, r0 = p.r0, eta = p.eta, l2 = p.lambda * p.lambda;
    const Pathloss g{r0, eta};
    double total = 0.0;

    for (int k = 1; k < m; ++k) {
        auto near_pos = [&](double x) {
            auto rho = [&](double y) { return pcf::pcf_branch(k, y - x, p); };
            return g(x) * inner_over_interval(x + k * c, x + (k + 1) * c, p, rho, ispec);
        };
        auto near_neg = [&](double x) {
            auto rho = [&](double y) { return pcf::pcf_branch(k, x - y, p); };
            return g(x) * inner_over_interval(x - (k + 1) * c, x - k * c, p, rho, ispec);
        };
        total += 2.0 * specfun::integrate_semi_infinite(near_pos, 2.0 * eta, r0, spec).value;
        total += 2.0 * specfun::integrate_semi_infinite(near_neg, eta, r0, spec).value;
    }

    // tails: rho = lambda^2 beyond m*c on either side
    auto tail_pos = [&](double x) {
        return std::pow(x, -eta) * std::pow(x + m * c, 1.0 - eta) / (eta - 1.0);
    };
    auto tail_neg = [&](double x) {
        return std::pow(x, -eta) * pathloss_integral_below(x - m * c, p);
    };
    total += 2.0 * l2 * specfun::integrate_semi_infinite(tail_pos, 2.0 * eta - 1.0, r0, spec).value;
    total += 2.0 * l2 * specfun::integrate_semi_infinite(tail_neg, eta, r0, spec).value;
    return total;
}

// S': like S but with g^2 at the conditioning point (m = 2 branches).
inline double pair_term_g2(const ScenarioParams& p, const QuadratureSpec& spec) {
    const QuadratureSpec ispec = inner_spec(spec);
    const double c = p.c, r0 = p.r0, eta = p.eta, l2 = p.lambda * p.lambda;
    const Pathloss g{r0, eta};
    double total = 0.0;

    auto near_pos = [&](double x) {
        const double gx = g(x);
        return gx * gx * exp_weighted_pathloss(x + c, x + 2.0 * c, p.mu, eta) * p.lambda;
    };
    auto near_neg = [&](double x) {
        const double gx = g(x);
        auto rho = [&](double y) { return pcf::pcf_branch(1, x - y, p); };
        return gx * gx * inner_over_interval(x - 2.0 * c, x - c, p, rho, ispec);
    };
    total += 2.0 * specfun::integrate_semi_infinite(near_pos, 3.0 * eta, r0, spec).value;
    total += 2.0 * specfun::integrate_semi_infinite(near_neg, 2.0 * eta, r0, spec).value;

    auto tail = [&](double x) {
        const double gx = std::pow(x, -eta);
        const double up = std::pow(x + 2.0 * c, 1.0 - eta) / (eta - 1.0);
        return gx * gx * (up + pathloss_integral_below(x - 2.0 * c, p));
    };
    total += 2.0 * l2 * specfun::integrate_semi_infinite(tail, 2.0 * eta, r0, spec).value;
    return total;
}

// Innermost w-bracket of the triple term: exponential first branch over
// (y+c, y+2c) plus the lambda tail beyond y + 2c (w stays outside the cell).
inline double triple_inner_w(double y, const ScenarioParams& p) {
    return exp_weighted_pathloss(y + p.c, y + 2.0 * p.c, p.mu, p.eta) +
           p.lambda * std::pow(y + 2.0 * p.c, 1.0 - p.eta) / (p.eta - 1.0);
}

// S1'': ordered triple on one side of the cell (factor 12 = 6 orderings x 2 sides).
inline double triple_same_side(const ScenarioParams& p, const QuadratureSpec& spec) {
    const QuadratureSpec ispec = inner_spec(spec);
    const double c = p.c, r0 = p.r0, eta = p.eta, mu = p.mu;
    const double l = p.lambda;

    // pair {x,y} beyond 2c: rho(x,y) ~ lambda^2
    auto far_outer = [&](double x) {
        auto inner = [&](double y) {
            return std::pow(y, -eta) * triple_inner_w(y, p);
        };
        return std::pow(x, -eta) *
               specfun::integrate_semi_infinite(inner, 2.0 * eta - 1.0, x + 2.0 * c, ispec).value;
    };
    const double far = 12.0 * l * l *
                       specfun::integrate_semi_infinite(far_outer, 3.0 * eta - 2.0, r0, spec).value;

    // pair {x,y} within (c, 2c): exact first branch
    auto near_outer = [&](double x) {
        auto inner = [&](double y) {
            return std::pow(y, -eta) * std::exp(-mu * (y - x - c)) * triple_inner_w(y, p);
        };
        return std::pow(x, -eta) *
               specfun::integrate_finite(inner, x + c, x + 2.0 * c, ispec).value;
    };
    const double near = 12.0 * l * mu *
                        specfun::integrate_semi_infinite(near_outer, 3.0 * eta - 1.0, r0, spec).value;
    return far + near;
}

// S2'': one point on the opposite side, uncorrelated (rho ~ lambda^2) with
// the ordered pair {y,w} on the other side.
inline double triple_opposite_side(const ScenarioParams& p, const QuadratureSpec& spec) {
    const double eta = p.eta, c = p.c, r0 = p.r0, l = p.lambda;
    const double gx_int = std::pow(r0, 1.0 - eta) / (eta - 1.0);
    auto far_pair = [&](double y) {
        return std::pow(y, -eta) * std::pow(y + 2.0 * c, 1.0 - eta) / (eta - 1.0);
    };
    const double far = l * specfun::integrate_semi_infinite(far_pair, 2.0 * eta - 1.0, r0, spec).value;
    auto near_pair = [&](double y) {
        return std::pow(y, -eta) * exp_weighted_pathloss(y + c, y + 2.0 * c, p.mu, eta);
    };
    const double near = specfun::integrate_semi_infinite(near_pair, 2.0 * eta, r0, spec).value;
    return 12.0 * l * l * gx_int * (far + near);
}

} // namespace detail

// E{I^2} with the PCF truncated at m: single-vehicle term plus S(m).
inline double second_moment(const ScenarioParams& p, int m = 2,
                            const QuadratureSpec& spec = {}) {
    if (m < 2) throw std::invalid_argument("second_moment: requires m >= 2");
    if (p.lambda == 0.0) return 0.0;
    if (p.c == 0.0) {
        const double k1 = ppp_cumulant(p, 1);
        return ppp_cumulant(p, 2) + k1 * k1;
    }
    return ppp_cumulant(p, 2) + detail::pair_term(p, m, spec);
}

// E{I^3} at fixed truncation m = 2 (the term split is specific to m = 2).
inline double third_moment(const ScenarioParams& p, const QuadratureSpec& spec = {}) {
    if (p.lambda == 0.0) return 0.0;
    const double k1 = ppp_cumulant(p, 1);
    const double k2 = ppp_cumulant(p, 2);
    const double k3 = ppp_cumulant(p, 3);
    if (p.c == 0.0) return k3 + 3.0 * k2 * k1 + k1 * k1 * k1;
    return k3 + 6.0 * detail::pair_term_g2(p, spec) +
           detail::triple_same_side(p, spec) + detail::triple_opposite_side(p, spec);
}

inline MomentSet moment_set(const ScenarioParams& p, int m = 2, bool with_third = false,
                            const QuadratureSpec& spec = {}) {
    MomentSet s;
    s.mean = mean_interference(p);
    s.m2 = second_moment(p, m, spec);
    s.method = (p.c == 0.0) ? Method::Analytic : Method::Quadrature;
    s.truncation_m = (p.c == 0.0) ? 0 : m;
    s.variance = s.m2 - s.mean * s.mean;
    if (s.variance <= 0.0 && p.lambda > 0.0)
        throw std::runtime_error(
            "moment_set: non-positive variance from quadrature; tighten the tolerance");
    s.std_dev = std::sqrt(std::max(0.0, s.variance));
    s.coeff_variation = (s.mean > 0.0) ? s.std_dev / s.mean : 0.0;
    if (with_third) {
        s.m3 = third_moment(p, spec);
        s.accuracy_warning = (p.lambda * p.c > 0.6);
        const double num = *s.m3 - 3.0 * s.mean * s.m2 + 2.0 * s.mean * s.mean * s.mean;
        s.skewness = num / std::pow(s.variance, 1.5);
    }
    return s;
}

} // namespace interference::moments
