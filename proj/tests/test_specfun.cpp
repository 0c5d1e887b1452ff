#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "interference/quadrature.hpp"
#include "interference/specfun.hpp"
#include "oracles.hpp"

using namespace interference::specfun;

static constexpr double pi = 3.14159265358979323846;

TEST_CASE("hurwitz zeta known values") {
    CHECK(hurwitz_zeta(2.0, 1.0) == doctest::Approx(pi * pi / 6.0).epsilon(1e-13));
    CHECK(hurwitz_zeta(2.0, 0.5) == doctest::Approx(pi * pi / 2.0).epsilon(1e-13));
    CHECK_THROWS_AS(hurwitz_zeta(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(hurwitz_zeta(2.0, 0.0), std::invalid_argument);
}

TEST_CASE("hurwitz zeta consecutive-neighbor identity") {
    // zeta(s, x) = zeta(s, 1+x) + x^{-s}
    CHECK(hurwitz_zeta(3.0, 7.3) - hurwitz_zeta(3.0, 8.3) ==
          doctest::Approx(std::pow(7.3, -3.0)).epsilon(1e-12));
    oracles::PropRng rng(11);
    for (int i = 0; i < 400; ++i) {
        const double s = rng.uniform(1.5, 8.0);
        const double x = rng.uniform(0.5, 50.0);
        const double lhs = hurwitz_zeta(s, x);
        const double rhs = hurwitz_zeta(s, 1.0 + x) + std::pow(x, -s);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
    }
}

TEST_CASE("2F1 trivial and log values") {
    CHECK(gauss_2f1(2.7, -1.3, 0.4, 0.0) == 1.0);
    CHECK(gauss_2f1(1.0, 1.0, 2.0, -1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(gauss_2f1(1.0, 1.0, 2.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(gauss_2f1(1.0, 1.0, -2.0, -0.5), std::invalid_argument);
}

TEST_CASE("2F1 against the Euler integral representation") {
    // 2F1(a,b;c;z) = int_0^1 t^{b-1}(1-t)^{c-b-1}(1-zt)^{-a} dt * G(c)/(G(b)G(c-b))
    auto euler = [](double a, double b, double c, double z) {
        auto f = [&](double t) {
            return std::pow(t, b - 1.0) * std::pow(1.0 - t, c - b - 1.0) *
                   std::pow(1.0 - z * t, -a);
        };
        const double beta = std::tgamma(c) / (std::tgamma(b) * std::tgamma(c - b));
        return beta * oracles::simpson(f, 1e-10, 1.0 - 1e-10, 20000);
    };
    // spec example: 2F1(3,5,6,-0.08) = 5 int_0^1 t^4 (1+0.08t)^{-3} dt
    CHECK(gauss_2f1(3.0, 5.0, 6.0, -0.08) ==
          doctest::Approx(euler(3.0, 5.0, 6.0, -0.08)).epsilon(1e-8));
    // the parameter sets actually used: (eta, 2eta-1, 2eta; -2b) and friends
    for (double eta : {2.0, 3.0, 4.5, 6.0}) {
        for (double b : {0.04, 0.2, 1.0, 2.0}) {
            CHECK(gauss_2f1(eta, 2.0 * eta - 1.0, 2.0 * eta, -2.0 * b) ==
                  doctest::Approx(euler(eta, 2.0 * eta - 1.0, 2.0 * eta, -2.0 * b))
                      .epsilon(1e-8));
            CHECK(gauss_2f1(2.0 * eta, eta + 1.0, 2.0 * eta + 1.0, -b) ==
                  doctest::Approx(euler(2.0 * eta, eta + 1.0, 2.0 * eta + 1.0, -b))
                      .epsilon(1e-8));
        }
    }
}

TEST_CASE("upper incomplete gamma known and oracle values") {
    CHECK(upper_incomplete_gamma(1.0, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK(upper_incomplete_gamma(0.5, 1.0) ==
          doctest::Approx(std::sqrt(pi) * std::erfc(1.0)).epsilon(1e-12));
    // Gamma(-2, 1.5) against brute-force quadrature of the defining integral
    auto f = [](double t) { return std::pow(t, -3.0) * std::exp(-t); };
    const double oracle = oracles::simpson(f, 1.5, 60.0, 40000);
    CHECK(upper_incomplete_gamma(-2.0, 1.5) == doctest::Approx(oracle).epsilon(1e-10));
    CHECK_THROWS_AS(upper_incomplete_gamma(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("incomplete gamma recurrence Gamma(a+1,x) = a Gamma(a,x) + x^a e^{-x}") {
    oracles::PropRng rng(23);
    int checked = 0;
    while (checked < 400) {
        const double a = rng.uniform(-4.0, 4.0);
        const double x = rng.uniform(0.1, 20.0);
        if (std::fabs(a - std::round(a)) < 1e-3 && a < 0.5) continue; // direct form pole
        const double lhs = upper_incomplete_gamma(a + 1.0, x);
        const double rhs = a * upper_incomplete_gamma(a, x) + std::pow(x, a) * std::exp(-x);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        ++checked;
    }
    // recurrence-chain form at negative integers
    for (double x : {0.3, 1.5, 7.0, 19.0}) {
        for (int n : {-1, -2, -3}) {
            const double a = n;
            const double lhs = upper_incomplete_gamma(a + 1.0, x);
            const double rhs = a * upper_incomplete_gamma(a, x) + std::pow(x, a) * std::exp(-x);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        }
    }
}

TEST_CASE("finite quadrature on elementary integrals") {
    auto sq = integrate_finite([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(sq.converged);
    CHECK(sq.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    auto ex = integrate_finite([](double x) { return std::exp(-x); }, 0.0, 1.0);
    CHECK(ex.value == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));

    auto pw = integrate_finite([](double x) { return std::pow(x, -3.0); }, 1.0, 2.0);
    CHECK(pw.value == doctest::Approx(3.0 / 8.0).epsilon(1e-12));

    CHECK_THROWS_AS(integrate_finite([](double) { return 1.0; }, 1.0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS(integrate_finite([](double x) { return 1.0 / x; }, -1.0, 1.0).value);
}

TEST_CASE("semi-infinite quadrature reproduces power-law tails") {
    auto a = integrate_semi_infinite([](double x) { return std::pow(x, -2.0); }, 2.0, 1.0);
    CHECK(a.value == doctest::Approx(1.0).epsilon(1e-11));

    auto b = integrate_semi_infinite([](double x) { return std::pow(x, -3.0); }, 3.0, 100.0);
    CHECK(b.value == doctest::Approx(5e-5).epsilon(1e-11));

    oracles::PropRng rng(3);
    for (int i = 0; i < 50; ++i) {
        const double p = rng.uniform(1.2, 6.0);
        const double lo = rng.uniform(0.5, 200.0);
        auto r = integrate_semi_infinite([&](double x) { return std::pow(x, -p); }, p, lo);
        CHECK(r.converged);
        // slowly decaying tails (p near 1) land close to the requested
        // rel_tol rather than comfortably below it, so allow 10x slack
        CHECK(r.value ==
              doctest::Approx(std::pow(lo, 1.0 - p) / (p - 1.0)).epsilon(1e-8));
    }
    CHECK_THROWS_AS(
        integrate_semi_infinite([](double x) { return 1.0 / x; }, 1.0, 1.0),
        std::invalid_argument);
}

TEST_CASE("semi-infinite quadrature with exponential damping") {
    // f = x^{-3} e^{-x/100} from 100: cutoff quadrature plus a tail bound
    auto f = [](double x) { return std::pow(x, -3.0) * std::exp(-x / 100.0); };
    const double cutoff = oracles::simpson(f, 100.0, 1e4, 200000);
    const double tail_bound = std::exp(-100.0) * 5e-9; // < f decay remainder
    auto r = integrate_semi_infinite(f, 3.0, 100.0);
    CHECK(std::fabs(r.value - cutoff) <= 1e-9 * cutoff + tail_bound);
}
