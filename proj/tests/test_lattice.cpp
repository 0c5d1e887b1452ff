#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "interference/lattice.hpp"
#include "oracles.hpp"

namespace la = interference::lattice;

TEST_CASE("make_lattice derives q and the cell fraction epsilon") {
    auto p = la::make_lattice(7.0, 100.0, 3.0);
    CHECK(p.q == doctest::Approx(100.0 / 7.0).epsilon(1e-14));
    CHECK(p.epsilon == doctest::Approx(4.0 / 7.0).epsilon(1e-12));

    // 2 r0 / c integer: epsilon snaps to zero even with rounding noise
    CHECK(la::make_lattice(4.0, 100.0, 3.0).epsilon == 0.0);
    CHECK(la::make_lattice(100.0 / 15.0, 100.0, 3.0).epsilon == 0.0);

    CHECK_THROWS_AS(la::make_lattice(0.0, 100.0, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(la::make_lattice(4.0, -1.0, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(la::make_lattice(4.0, 100.0, 1.0), std::invalid_argument);
}

TEST_CASE("lattice mean hand values") {
    CHECK(la::lattice_mean(la::make_lattice(10.0, 100.0, 3.0)) ==
          doctest::Approx(1e-5).epsilon(1e-12));
    CHECK(la::lattice_mean(la::make_lattice(1.0, 100.0, 3.0)) ==
          doctest::Approx(1e-4).epsilon(1e-12));
    // J1 at c = 10: 2e-10 / 50
    CHECK(la::j1(la::make_lattice(10.0, 100.0, 3.0)) ==
          doctest::Approx(4e-12).epsilon(1e-12));
}

// Brute-force oracle for the phase-averaged moments: truncated pathloss sums
// over both sides with Simpson over the phase z, split at the kink z=(1-eps)c.
namespace {

struct LatticeOracle {
    double mean = 0.0;
    double var = 0.0;
};

LatticeOracle oracle_moments(const la::LatticeParams& p) {
    const double c = p.c, r0 = p.r0, eta = p.eta, eps = p.epsilon;
    // opposite-side offset per branch; the branch is fixed per integration
    // piece so the jump at z = (1-eps)c gets its correct one-sided limits
    auto sum_g = [&](double z, double zl) {
        return oracles::lattice_pathloss_sum(r0 + z, c, eta, 5000) +
               oracles::lattice_pathloss_sum(r0 + zl, c, eta, 5000);
    };
    auto sum_g2 = [&](double z, double zl) {
        return oracles::lattice_pathloss_sum(r0 + z, c, 2.0 * eta, 5000) +
               oracles::lattice_pathloss_sum(r0 + zl, c, 2.0 * eta, 5000);
    };
    // E{I^2 | z} = (sum g)^2 + sum g^2 for unit-mean Rayleigh fading
    auto m2_z = [&](double z, double zl) {
        const double s = sum_g(z, zl);
        return s * s + sum_g2(z, zl);
    };
    auto avg = [&](const std::function<double(double, double)>& f) {
        auto piece1 = [&](double z) { return f(z, c * (1.0 - eps) - z); };
        double v = oracles::simpson(piece1, 0.0, (1.0 - eps) * c, 1500);
        if (eps > 0.0) {
            auto piece2 = [&](double z) { return f(z, c * (2.0 - eps) - z); };
            v += oracles::simpson(piece2, (1.0 - eps) * c, c, 1500);
        }
        return v / c;
    };
    LatticeOracle out;
    out.mean = avg(sum_g);
    out.var = avg(m2_z) - out.mean * out.mean;
    return out;
}

} // namespace

TEST_CASE("lattice mean and variance match the truncated double-sum oracle") {
    for (double c : {20.0, 10.0, 100.0 / 15.0, 7.0, 13.0}) {
        auto p = la::make_lattice(c, 100.0, 3.0);
        auto o = oracle_moments(p);
        CHECK(la::lattice_mean(p) == doctest::Approx(o.mean).epsilon(1e-9));
        CHECK(la::lattice_variance(p) == doctest::Approx(o.var).epsilon(1e-8));
    }
    // a non-integer pathloss exponent as well
    auto p = la::make_lattice(7.0, 50.0, 2.5);
    auto o = oracle_moments(p);
    CHECK(la::lattice_mean(p) == doctest::Approx(o.mean).epsilon(1e-9));
    CHECK(la::lattice_variance(p) == doctest::Approx(o.var).epsilon(1e-8));
}

TEST_CASE("J3 large-q expansion at eps = 0") {
    auto p = la::make_lattice(10.0, 100.0, 3.0);
    CHECK(la::j3_large_q(p) == doctest::Approx(4.0333333333e-11).epsilon(1e-9));
    // the exact J3 approaches the expansion like O(1/q) as q grows
    double prev_err = 1e9;
    for (double c : {8.0, 4.0, 2.0, 1.0}) {
        auto q = la::make_lattice(c, 100.0, 3.0);
        const double err = std::fabs(la::j3(q) / la::j3_large_q(q) - 1.0);
        CHECK(err < 0.65 * prev_err); // roughly halves when c halves
        prev_err = err;
    }
    CHECK(prev_err < 0.025); // q = 100
}

TEST_CASE("variance halves the PPP baseline of matched intensity at large q") {
    // with lambda = 1/c, kappa2 = 4 r0^{1-2eta}/(c(2eta-1)); Var -> kappa2/2
    auto p = la::make_lattice(4.0, 100.0, 3.0); // eps = 0, q = 25
    const double k2 = 4.0 * std::pow(100.0, -5.0) / (4.0 * 5.0);
    const double ratio = la::lattice_variance(p) / k2;
    CHECK(ratio > 0.48);
    CHECK(ratio < 0.52);
}

TEST_CASE("integral-free approximation tracks the exact variance") {
    for (double c : {4.0, 7.0, 10.0, 13.0}) {
        auto p = la::make_lattice(c, 100.0, 3.0);
        CHECK(la::lattice_variance_approx(p) ==
              doctest::Approx(la::lattice_variance(p)).epsilon(0.02));
    }
}

TEST_CASE("the epsilon increment raises the variance, maximal near 1/2") {
    auto flat = la::make_lattice(10.0, 100.0, 3.0); // eps = 0
    auto bump = la::make_lattice(7.0, 100.0, 3.0);  // eps ~ 0.571
    CHECK(la::lattice_variance(bump) > la::lattice_variance(flat));
    // the approximation carries the same eps(1-eps) increment
    const double inc = la::lattice_variance_approx(bump) -
                       2.0 * std::pow(100.0, -5.0) / (7.0 * 5.0);
    CHECK(inc == doctest::Approx((4.0 / 7.0) * (3.0 / 7.0) * 1e-12).epsilon(1e-12));
}
