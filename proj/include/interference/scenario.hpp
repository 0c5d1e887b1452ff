#pragma once

// Traffic and radio parameters shared by every analytic and simulation
// routine: vehicle intensity, hardcore (tracking) distance, cell radius,
// pathloss model and fading model.

#include <cmath>
#include <stdexcept>
#include <string>

namespace interference {

// Hardcore renewal deployment: headway = c + Exp(mu), intensity
// lambda = mu / (1 + c*mu).  Both rates are kept populated and consistent.
struct ScenarioParams {
    double lambda; // vehicles per meter
    double mu;     // rate of the exponential headway component, 1/m
    double c;      // hardcore / tracking distance, m
    double r0;     // cell radius, m
    double eta;    // pathloss exponent
};

enum class RateKind { Lambda, Mu };

enum class FadingModel { RayleighUnitMean, None };

inline void validate_geometry(double c, double r0, double eta) {
    if (c < 0.0) throw std::invalid_argument("hardcore distance c must be >= 0");
    if (r0 <= 0.0) throw std::invalid_argument("cell radius r0 must be > 0");
    if (eta < 2.0) throw std::invalid_argument("pathloss exponent eta must be >= 2");
}

// Build a scenario from either rate; the other one is derived from
// lambda^{-1} = c + mu^{-1}.  lambda*c = 1 (the lattice) is rejected here.
inline ScenarioParams make_scenario(RateKind kind, double rate, double c,
                                    double r0, double eta) {
    validate_geometry(c, r0, eta);
    if (rate <= 0.0) throw std::invalid_argument("supplied rate must be > 0");
    ScenarioParams p{};
    p.c = c;
    p.r0 = r0;
    p.eta = eta;
    if (kind == RateKind::Lambda) {
        if (rate * c >= 1.0)
            throw std::invalid_argument(
                "lambda*c >= 1: infeasible intensity (lattice regime is handled separately)");
        p.lambda = rate;
        p.mu = (c == 0.0) ? rate : rate / (1.0 - rate * c);
    } else {
        p.mu = rate;
        p.lambda = rate / (1.0 + c * rate);
    }
    return p;
}

inline ScenarioParams scenario_from_lambda(double lambda, double c, double r0, double eta) {
    return make_scenario(RateKind::Lambda, lambda, c, r0, eta);
}

inline ScenarioParams scenario_from_mu(double mu, double c, double r0, double eta) {
    return make_scenario(RateKind::Mu, mu, c, r0, eta);
}

// g(r) = |r|^{-eta} outside the cell, 0 inside.  The boundary |r| = r0
// counts as inside (the boundary vehicle is served, not interfering).
struct Pathloss {
    double r0;
    double eta;

    double operator()(double r) const {
        const double a = std::fabs(r);
        if (a <= r0) return 0.0;
        // integer exponents dominate in practice; avoid pow for them
        const int n = static_cast<int>(eta);
        if (eta == static_cast<double>(n) && n >= 2 && n <= 8) {
            double v = a;
            for (int i = 1; i < n; ++i) v *= a;
            return 1.0 / v;
        }
        return std::pow(a, -eta);
    }
};

inline double pathloss_eval(const Pathloss& p, double r) { return p(r); }

inline Pathloss pathloss_of(const ScenarioParams& p) { return Pathloss{p.r0, p.eta}; }

} // namespace interference
