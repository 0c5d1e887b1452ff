#pragma once

// Pair correlation function of the hardcore renewal process and the
// third-order intensity built from it.  The PCF is piecewise over branches
// k = floor(d/c): on (kc, (k+1)c) it is a k-term sum of shifted Erlang
// neighbor densities scaled by lambda.

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "interference/scenario.hpp"

namespace interference::pcf {

inline constexpr int k_max_exact = 64;

struct PcfValue {
    double separation = 0.0;
    double value = 0.0; // 1/m^2
    int branch_index = 0;
    bool truncated = false;
};

// rho_k(d) = lambda * sum_{j=1..k} mu^j (d-jc)^{j-1} e^{-mu(d-jc)} / (j-1)!
// for d in (kc, (k+1)c), else 0.  Terms are accumulated in log space so
// large-k branches neither overflow nor underflow prematurely.
inline double pcf_branch(int k, double d, const ScenarioParams& p) {
    if (!(d > 0.0)) throw std::invalid_argument("pcf_branch: requires d > 0");
    if (k <= 0) return 0.0;
    if (p.c > 0.0) {
        // right-continuous branch assignment: d = kc belongs to branch k
        if (d < k * p.c || d >= (k + 1) * p.c) return 0.0;
    } else if (k != 1) {
        return 0.0;
    }
    const double log_mu = std::log(p.mu);
    double sum = 0.0, comp = 0.0;
    for (int j = 1; j <= k; ++j) {
        const double t = d - j * p.c;
        double term;
        if (j == 1) {
            term = std::exp(log_mu - p.mu * t);
        } else if (t <= 0.0) {
            term = 0.0; // only possible at d = kc exactly
        } else {
            term = std::exp(j * log_mu + (j - 1) * std::log(t) - p.mu * t -
                            std::lgamma(static_cast<double>(j)));
        }
        const double y = term - comp;
        const double u = sum + y;
        comp = (u - sum) - y;
        sum = u;
    }
    return p.lambda * sum;
}

inline PcfValue pcf(double d, const ScenarioParams& p) {
    if (!(d > 0.0)) throw std::invalid_argument("pcf: requires d > 0");
    PcfValue v;
    v.separation = d;
    if (p.c == 0.0) { // PPP
        v.value = p.lambda * p.lambda;
        v.branch_index = 0;
        return v;
    }
    const int k = static_cast<int>(std::floor(d / p.c));
    v.branch_index = k;
    if (k > k_max_exact) {
        v.value = p.lambda * p.lambda;
        v.truncated = true;
    } else {
        v.value = pcf_branch(k, d, p);
    }
    return v;
}

// Exact branches below m*c, exactly lambda^2 beyond (the m-truncation used
// by the moment integrals).
inline double pcf_truncated(double d, int m, const ScenarioParams& p) {
    if (m < 2) throw std::invalid_argument("pcf_truncated: requires m >= 2");
    if (!(d > 0.0)) throw std::invalid_argument("pcf_truncated: requires d > 0");
    if (p.c == 0.0 || d >= m * p.c) return p.lambda * p.lambda;
    const int k = static_cast<int>(std::floor(d / p.c));
    return pcf_branch(k, d, p);
}

// Third-order intensity for ordered points with consecutive gaps d1, d2.
inline double rho3(double d1, double d2, const ScenarioParams& p) {
    if (!(d1 > 0.0 && d2 > 0.0)) throw std::invalid_argument("rho3: requires d1, d2 > 0");
    if (p.c == 0.0) return p.lambda * p.lambda * p.lambda;
    return pcf(d1, p).value * pcf(d2, p).value / p.lambda;
}

} // namespace interference::pcf
