#pragma once

// Adaptive 1D quadrature: Gauss-Kronrod 7-15 with global subdivision of the
// worst segment, plus a semi-infinite wrapper using the u = lo/x map so
// power-law tails are integrated exactly in the transformed variable.

#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace interference::specfun {

struct QuadratureSpec {
    double rel_tol = 1e-9;
    double abs_tol = 1e-300;
    int max_subdivisions = 2000;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = false;
};

namespace detail {

// Kronrod-15 abscissae on [0,1] and weights; Gauss-7 weights where defined.
struct GK15Node { double x, wg, wk; };
inline constexpr GK15Node gk15[8] = {
    {0.000000000000000000, 0.417959183673469388, 0.209482141084727828},
    {0.405845151377397167, 0.381830050505118945, 0.190350578064785410},
    {0.741531185599394440, 0.279705391489276668, 0.140653259715525919},
    {0.949107912342758525, 0.129484966168869693, 0.063092092629978553},
    {0.207784955007898468, 0.0,                  0.204432940075298892},
    {0.586087235467691130, 0.0,                  0.169004726639267903},
    {0.864864423359769073, 0.0,                  0.104790010322250184},
    {0.991455371120812639, 0.0,                  0.022935322010529225},
};

template <class F>
inline void gk15_eval(const F& f, double a, double b, double& value, double& err) {
    const double mid = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    auto probe = [&](double x) {
        const double y = f(x);
        if (!std::isfinite(y))
            throw std::runtime_error("integrand returned non-finite value at x = " +
                                     std::to_string(x));
        return y;
    };
    double y0 = probe(mid);
    double g = gk15[0].wg * y0;
    double k = gk15[0].wk * y0;
    for (int i = 1; i < 8; ++i) {
        const double dx = h * gk15[i].x;
        const double y = probe(mid + dx) + probe(mid - dx);
        g += gk15[i].wg * y;
        k += gk15[i].wk * y;
    }
    value = k * h;
    err = std::fabs((k - g) * h);
}

struct Segment {
    double a, b, value, err;
    bool operator<(const Segment& o) const { return err < o.err; }
};

} // namespace detail

template <class F>
QuadratureResult integrate_finite(const F& f, double lo, double hi,
                                  const QuadratureSpec& spec = {}) {
    if (!(lo < hi)) throw std::invalid_argument("integrate_finite: requires lo < hi");
    if (spec.rel_tol <= 0.0 || spec.abs_tol < 0.0 || spec.max_subdivisions < 1)
        throw std::invalid_argument("integrate_finite: bad quadrature spec");

    std::priority_queue<detail::Segment> segs;
    double total = 0.0, toterr = 0.0;
    {
        detail::Segment s{lo, hi, 0.0, 0.0};
        detail::gk15_eval(f, lo, hi, s.value, s.err);
        total = s.value;
        toterr = s.err;
        segs.push(s);
    }
    int ndiv = 0;
    while (toterr > std::max(spec.abs_tol, spec.rel_tol * std::fabs(total)) &&
           ndiv < spec.max_subdivisions) {
        detail::Segment worst = segs.top();
        segs.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) { // cannot split further
            segs.push(worst);
            break;
        }
        detail::Segment l{worst.a, mid, 0.0, 0.0}, r{mid, worst.b, 0.0, 0.0};
        detail::gk15_eval(f, l.a, l.b, l.value, l.err);
        detail::gk15_eval(f, r.a, r.b, r.value, r.err);
        total += l.value + r.value - worst.value;
        toterr += l.err + r.err - worst.err;
        segs.push(l);
        segs.push(r);
        ++ndiv;
    }
    QuadratureResult res;
    res.value = total;
    res.error_estimate = std::fabs(toterr);
    res.converged =
        toterr <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(total));
    return res;
}

// Integral over [lo, inf) of a function decaying like x^{-p}, p > 1.
// Substituting u = lo/x gives  int_0^1 f(lo/u) * lo/u^2 du, whose integrand
// behaves like u^{p-2} near u = 0 (integrable; GK nodes avoid the endpoint).
template <class F>
QuadratureResult integrate_semi_infinite(const F& f, double decay_p, double lo,
                                         const QuadratureSpec& spec = {}) {
    if (!(decay_p > 1.0))
        throw std::invalid_argument("integrate_semi_infinite: decay exponent p must be > 1");
    if (!(lo > 0.0))
        throw std::invalid_argument("integrate_semi_infinite: lower limit must be > 0");
    auto g = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double x = lo / u;
        return f(x) * lo / (u * u);
    };
    return integrate_finite(g, 0.0, 1.0, spec);
}

} // namespace interference::specfun
