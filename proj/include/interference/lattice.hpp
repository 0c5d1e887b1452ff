#pragma once

// Interference from an equally spaced deployment with uniform random phase:
// mean and second-moment terms J1/J2/J3 in Hurwitz-zeta form, the exact
// variance, and its integral-free large-q approximation.  The cell-fraction
// parameter epsilon = frac(2 r0 / c) couples the two sides of the cell.

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "interference/quadrature.hpp"
#include "interference/specfun.hpp"

namespace interference::lattice {

using specfun::QuadratureSpec;

struct LatticeParams {
    double c;       // inter-point distance, m
    double r0;      // cell radius, m
    double eta;     // pathloss exponent
    double q;       // r0 / c
    double epsilon; // frac(2 r0 / c), snapped to 0 near integers
};

inline LatticeParams make_lattice(double c, double r0, double eta) {
    if (!(c > 0.0)) throw std::invalid_argument("make_lattice: requires c > 0");
    if (!(r0 > 0.0)) throw std::invalid_argument("make_lattice: requires r0 > 0");
    if (eta < 2.0) throw std::invalid_argument("make_lattice: requires eta >= 2");
    LatticeParams p{c, r0, eta, r0 / c, 0.0};
    const double t = 2.0 * r0 / c;
    double eps = t - std::floor(t);
    // snap to the integer branch: floating 2r0/c can miss exact multiples
    if (eps < 1e-9 || eps > 1.0 - 1e-9) eps = 0.0;
    p.epsilon = eps;
    return p;
}

// E{I} = 2 (zeta(eta-1,q) - zeta(eta-1,1+q)) / (c^eta (eta-1)) = 2 r0^{1-eta}/(c(eta-1)).
// Both routes are evaluated and must agree (consecutive-neighbor identity).
inline double lattice_mean(const LatticeParams& p) {
    const double zform = 2.0 *
                         (specfun::hurwitz_zeta(p.eta - 1.0, p.q) -
                          specfun::hurwitz_zeta(p.eta - 1.0, 1.0 + p.q)) /
                         (std::pow(p.c, p.eta) * (p.eta - 1.0));
    const double simple = 2.0 * std::pow(p.r0, 1.0 - p.eta) / (p.c * (p.eta - 1.0));
    if (std::fabs(zform - simple) > 1e-10 * std::fabs(simple))
        throw std::runtime_error("lattice_mean: zeta and closed forms disagree");
    return simple;
}

// J1 = 2 lambda r0^{1-2eta}/(2eta-1) with lambda = 1/c (fading-only part).
inline double j1(const LatticeParams& p) {
    return 2.0 * std::pow(p.r0, 1.0 - 2.0 * p.eta) / (p.c * (2.0 * p.eta - 1.0));
}

namespace detail {

// Adaptive quadrature revisits nearby panels; cache zeta by its second
// argument within one J2/J3 evaluation.
struct ZetaCache {
    double s;
    std::unordered_map<double, double> memo;
    double operator()(double a) {
        auto it = memo.find(a);
        if (it != memo.end()) return it->second;
        const double v = specfun::hurwitz_zeta(s, a);
        memo.emplace(a, v);
        return v;
    }
};

} // namespace detail

// J2 = 2 c^{-2eta-1} int_0^c zeta(eta, (r0+z)/c)^2 dz  (same-side pairs).
inline double j2(const LatticeParams& p, const QuadratureSpec& spec = {}) {
    detail::ZetaCache zeta{p.eta, {}};
    auto f = [&](double z) {
        const double v = zeta((p.r0 + z) / p.c);
        return v * v;
    };
    auto r = specfun::integrate_finite(f, 0.0, p.c, spec);
    if (!r.converged) throw std::runtime_error("j2: quadrature did not converge");
    return 2.0 * std::pow(p.c, -2.0 * p.eta - 1.0) * r.value;
}

// J3: cross-side pairs; two pieces split exactly at z = (1-eps)c, with the
// opposite-side offsets c(1-eps)-z and c(2-eps)-z.  At eps = 0 the second
// piece is empty and the single-integral form remains.
inline double j3(const LatticeParams& p, const QuadratureSpec& spec = {}) {
    detail::ZetaCache zeta{p.eta, {}};
    const double eps = p.epsilon;
    const double pref = 2.0 * std::pow(p.c, -2.0 * p.eta - 1.0);
    auto piece1 = [&](double z) {
        return zeta((p.r0 + z) / p.c) * zeta((p.r0 + p.c * (1.0 - eps) - z) / p.c);
    };
    auto r1 = specfun::integrate_finite(piece1, 0.0, (1.0 - eps) * p.c, spec);
    if (!r1.converged) throw std::runtime_error("j3: quadrature did not converge");
    double total = r1.value;
    if (eps > 0.0) {
        auto piece2 = [&](double z) {
            return zeta((p.r0 + z) / p.c) * zeta((p.r0 + p.c * (2.0 - eps) - z) / p.c);
        };
        auto r2 = specfun::integrate_finite(piece2, (1.0 - eps) * p.c, p.c, spec);
        if (!r2.converged) throw std::runtime_error("j3: quadrature did not converge");
        total += r2.value;
    }
    return pref * total;
}

// Var = J1 + J2 + J3 - E{I}^2.
inline double lattice_variance(const LatticeParams& p, const QuadratureSpec& spec = {}) {
    const double mean = lattice_mean(p);
    return j1(p) + j2(p, spec) + j3(p, spec) - mean * mean;
}

// Var ~ 2 r0^{1-2eta}/(c(2eta-1)) + eps(1-eps) r0^{-2eta}  (PPP of intensity
// 1/(2c) plus the epsilon increment; tight for q = r0/c >> 1).
inline double lattice_variance_approx(const LatticeParams& p) {
    return 2.0 * std::pow(p.r0, 1.0 - 2.0 * p.eta) / (p.c * (2.0 * p.eta - 1.0)) +
           p.epsilon * (1.0 - p.epsilon) * std::pow(p.r0, -2.0 * p.eta);
}

// Large-q expansion of J3 at eps = 0:
// r0^{-2eta} (c^2(eta-1)^2 - 6c(eta-1)r0 + 6r0^2) / (3c^2(eta-1)^2).
inline double j3_large_q(const LatticeParams& p) {
    const double em1 = p.eta - 1.0;
    const double num = p.c * p.c * em1 * em1 - 6.0 * p.c * em1 * p.r0 + 6.0 * p.r0 * p.r0;
    return std::pow(p.r0, -2.0 * p.eta) * num / (3.0 * p.c * p.c * em1 * em1);
}

} // namespace interference::lattice
