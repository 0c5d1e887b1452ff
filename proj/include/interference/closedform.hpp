#pragma once

// Closed-form approximation chain for the variance of interference:
// the 2F1 form of the pair tail S_{>2c}, the near-pair term S_{<2c} (exact
// quadrature, large-mu(x+c) expansion and small-lambda*c form), the
// integral-free variance models and the exponential scaling law.

#include <cmath>
#include <stdexcept>

#include "interference/moments.hpp"
#include "interference/quadrature.hpp"
#include "interference/scenario.hpp"
#include "interference/specfun.hpp"

namespace interference::closedform {

using specfun::QuadratureSpec;

struct SmallnessRatios {
    double b;  // c / r0
    double lc; // lambda * c
};

inline SmallnessRatios ratios(const ScenarioParams& p) {
    return SmallnessRatios{p.c / p.r0, p.lambda * p.c};
}

// Regime flags: the models are derived for lambda*r0 >> 1 and small b and
// lambda*c; they are still evaluated outside those regimes, flagged only.
struct ValidityFlags {
    bool lambda_r0_small = false; // lambda * r0 < 10
    bool lambda_c_large = false;  // lambda * c > 0.4
    bool b_large = false;         // c / r0 > 0.25
};

inline ValidityFlags validity(const ScenarioParams& p) {
    ValidityFlags f;
    f.lambda_r0_small = p.lambda * p.r0 < 10.0;
    f.lambda_c_large = p.lambda * p.c > 0.4;
    f.b_large = p.c / p.r0 > 0.25;
    return f;
}

// Pair contribution beyond 2c:
// S_{>2c} = E{I}^2/2 + (2 lambda^2 r0^{2-2eta}/(eta-1)) *
//           [ (2b+1)^{1-eta}/(eta-1) + 2b 2F1(eta,2eta-1;2eta;-2b)/(2eta-1) ].
inline double s_gt_2c(const ScenarioParams& p) {
    const double eta = p.eta;
    const double b = p.c / p.r0;
    const double mean = moments::mean_interference(p);
    const double pref = 2.0 * p.lambda * p.lambda * std::pow(p.r0, 2.0 - 2.0 * eta) / (eta - 1.0);
    const double bracket =
        std::pow(2.0 * b + 1.0, 1.0 - eta) / (eta - 1.0) +
        2.0 * b * specfun::gauss_2f1(eta, 2.0 * eta - 1.0, 2.0 * eta, -2.0 * b) /
            (2.0 * eta - 1.0);
    return 0.5 * mean * mean + pref * bracket;
}

// Pair contribution below 2c, 1D quadrature of the incomplete-gamma inner form:
// S_{<2c} = 4 lambda int_{r0}^inf x^{-eta} [mu int_{x+c}^{x+2c} y^{-eta} e^{-mu(y-x-c)} dy] dx.
inline double s_lt_2c_exact(const ScenarioParams& p, const QuadratureSpec& spec = {}) {
    if (p.c == 0.0) return 0.0;
    auto f = [&](double x) {
        return std::pow(x, -p.eta) *
               moments::detail::exp_weighted_pathloss(x + p.c, x + 2.0 * p.c, p.mu, p.eta);
    };
    auto r = specfun::integrate_semi_infinite(f, 2.0 * p.eta, p.r0, spec);
    if (!r.converged)
        throw std::runtime_error("s_lt_2c_exact: quadrature did not converge");
    return 4.0 * p.lambda * r.value;
}

// Large-mu(x+c) expansion of S_{<2c}; valid for lambda*r0 >> 1.
inline double s_lt_2c_expansion(const ScenarioParams& p) {
    if (p.c == 0.0) return 0.0;
    const double eta = p.eta, mu = p.mu, c = p.c, r0 = p.r0;
    const double b = c / r0;
    const double e = std::exp(-c * mu);
    const double t1 = 4.0 * p.lambda * (1.0 - e) *
                      specfun::gauss_2f1(eta, 2.0 * eta - 1.0, 2.0 * eta, -b) /
                      ((2.0 * eta - 1.0) * std::pow(r0, 2.0 * eta - 1.0));
    const double t2 = 2.0 * p.lambda * (e * (1.0 + c * mu) - 1.0) *
                      specfun::gauss_2f1(2.0 * eta, eta + 1.0, 2.0 * eta + 1.0, -b) /
                      (mu * std::pow(r0, 2.0 * eta));
    return t1 + t2;
}

// Small-lambda*c (second order) form of S_{<2c}.
inline double s_lt_2c_small_lc(const ScenarioParams& p) {
    if (p.c == 0.0) return 0.0;
    const double eta = p.eta, c = p.c, r0 = p.r0;
    const double b = c / r0;
    const double t1 = 2.0 * std::pow(r0, 1.0 - 2.0 * eta) *
                      specfun::gauss_2f1(2.0 * eta - 1.0, eta, 2.0 * eta, -b) /
                      ((2.0 * eta - 1.0) * c);
    const double t2 = 0.5 * std::pow(r0, -2.0 * eta) *
                      specfun::gauss_2f1(2.0 * eta, eta + 1.0, 2.0 * eta + 1.0, -b);
    return 2.0 * p.lambda * p.lambda * c * c * (t1 - t2);
}

// Var ~ 4 lambda r0^{1-2eta}/(2eta-1) + S_{>2c} + S_{<2c}(small lambda*c) - E{I}^2.
inline double var_closed(const ScenarioParams& p) {
    const double mean = moments::mean_interference(p);
    return moments::ppp_cumulant(p, 2) + s_gt_2c(p) + s_lt_2c_small_lc(p) - mean * mean;
}

// Second-order expansion in b -> 0: kappa2 (1 - lambda c) + lambda^2 c^2 r0^{-2eta}.
inline double var_order2(const ScenarioParams& p) {
    const double k2 = moments::ppp_cumulant(p, 2);
    const double lc = p.lambda * p.c;
    return k2 * (1.0 - lc) + p.lambda * p.lambda * p.c * p.c * std::pow(p.r0, -2.0 * p.eta);
}

// Same with the exact PCF kept up to 3c: adds + (lambda c)^2 / 2 in the bracket.
inline double var_order2_m3(const ScenarioParams& p) {
    const double k2 = moments::ppp_cumulant(p, 2);
    const double lc = p.lambda * p.c;
    return k2 * (1.0 - lc + 0.5 * lc * lc) +
           p.lambda * p.lambda * p.c * p.c * std::pow(p.r0, -2.0 * p.eta);
}

// Exponential scaling law: Var ~ kappa2 e^{-lambda c}.
inline double var_exponential(const ScenarioParams& p) {
    return moments::ppp_cumulant(p, 2) * std::exp(-p.lambda * p.c);
}

// Coefficient of variation under the exponential law:
// (eta-1)/sqrt(2 eta - 1) * (lambda r0)^{-1/2} * e^{-lambda c / 2}.
inline double cov_approx(const ScenarioParams& p) {
    if (!(p.lambda > 0.0)) throw std::invalid_argument("cov_approx: requires lambda > 0");
    return (p.eta - 1.0) / std::sqrt(2.0 * p.eta - 1.0) / std::sqrt(p.lambda * p.r0) *
           std::exp(-0.5 * p.lambda * p.c);
}

} // namespace interference::closedform
