#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "interference/pcf.hpp"
#include "oracles.hpp"

using namespace interference;
namespace pc = interference::pcf;

TEST_CASE("pcf vanishes inside the hardcore gap and is zero-argument safe") {
    auto p = scenario_from_lambda(0.1, 4.0, 100.0, 3.0);
    for (double d : {0.5, 1.0, 2.0, 3.999}) {
        CHECK(pc::pcf(d, p).value == 0.0);
        CHECK(pc::pcf(d, p).branch_index == 0);
    }
    CHECK_THROWS_AS(pc::pcf(0.0, p), std::invalid_argument);
    CHECK_THROWS_AS(pc::pcf(-1.0, p), std::invalid_argument);
}

TEST_CASE("pcf reduces to lambda^2 in the PPP limit c = 0") {
    auto p = scenario_from_lambda(0.05, 0.0, 100.0, 3.0);
    for (double d : {0.01, 1.0, 50.0, 4000.0}) {
        CHECK(pc::pcf(d, p).value == doctest::Approx(0.05 * 0.05).epsilon(1e-14));
    }
}

TEST_CASE("pcf matches the k-fold headway convolution oracle on branches 1..3") {
    auto p = scenario_from_lambda(0.1, 4.0, 100.0, 3.0);
    // rho(d) = lambda * sum_j f_j(d), f_j the j-fold shifted-Erlang density
    auto oracle = [&](double d) {
        const int k = static_cast<int>(std::floor(d / p.c));
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += oracles::headway_convolution(j, d, p.c, p.mu);
        return p.lambda * s;
    };
    for (double d : {4.3, 5.0, 6.9, 8.2, 9.5, 10.4, 12.7, 13.1}) {
        const auto v = pc::pcf(d, p);
        CHECK(v.branch_index == static_cast<int>(std::floor(d / p.c)));
        CHECK(v.value == doctest::Approx(oracle(d)).epsilon(1e-6));
    }
}

TEST_CASE("pcf right limit at d = c+ is lambda*mu") {
    auto p = scenario_from_lambda(0.1, 4.0, 100.0, 3.0);
    CHECK(pc::pcf(4.0 + 1e-12, p).value ==
          doctest::Approx(p.lambda * p.mu).epsilon(1e-9));
    // d = kc belongs to branch k (right-continuous assignment)
    CHECK(pc::pcf(4.0, p).branch_index == 1);
    CHECK(pc::pcf(4.0, p).value == doctest::Approx(p.lambda * p.mu).epsilon(1e-12));
}

TEST_CASE("first branch of the pcf carries mass lambda*(1 - e^{-mu c})") {
    for (double lc : {0.2, 0.5, 0.8}) {
        auto p = scenario_from_lambda(lc / 5.0, 5.0, 100.0, 3.0);
        auto f = [&](double d) { return pc::pcf(d, p).value; };
        const double mass = oracles::simpson(f, p.c, 2.0 * p.c, 20000);
        CHECK(mass ==
              doctest::Approx(p.lambda * (1.0 - std::exp(-p.mu * p.c))).epsilon(1e-8));
    }
}

TEST_CASE("pcf decorrelates to lambda^2 at large separation") {
    auto p = scenario_from_lambda(0.1, 4.0, 100.0, 3.0);
    const double l2 = p.lambda * p.lambda;
    for (double d : {120.0, 161.3, 220.0, 255.9}) {
        const auto v = pc::pcf(d, p);
        CHECK(v.truncated == false);
        CHECK(std::fabs(v.value - l2) / l2 < 1e-10);
    }
}

TEST_CASE("branches beyond k_max_exact flatten to lambda^2 with a flag") {
    auto p = scenario_from_lambda(0.2, 4.0, 100.0, 3.0);
    const double d = (pc::k_max_exact + 1) * p.c + 1.0;
    const auto v = pc::pcf(d, p);
    CHECK(v.truncated);
    CHECK(v.value == p.lambda * p.lambda);
    // the last exact branch is still computed directly
    CHECK_FALSE(pc::pcf(pc::k_max_exact * p.c + 1.0, p).truncated);
}

TEST_CASE("pcf_truncated agrees with exact branches below m*c, lambda^2 above") {
    auto p = scenario_from_lambda(0.1, 4.0, 100.0, 3.0);
    const double l2 = p.lambda * p.lambda;
    CHECK(pc::pcf_truncated(5.0, 2, p) == doctest::Approx(pc::pcf(5.0, p).value).epsilon(1e-14));
    CHECK(pc::pcf_truncated(9.0, 2, p) == l2);     // d >= 2c
    CHECK(pc::pcf_truncated(9.0, 3, p) == doctest::Approx(pc::pcf(9.0, p).value).epsilon(1e-14));
    CHECK(pc::pcf_truncated(12.0, 3, p) == l2);
    CHECK_THROWS_AS(pc::pcf_truncated(5.0, 1, p), std::invalid_argument);
}

TEST_CASE("rho3 factorizes through the pcf") {
    auto p = scenario_from_lambda(0.1, 4.0, 100.0, 3.0);
    for (double d1 : {4.5, 9.3, 40.0}) {
        for (double d2 : {5.1, 13.7, 200.0}) {
            CHECK(pc::rho3(d1, d2, p) ==
                  doctest::Approx(pc::pcf(d1, p).value * pc::pcf(d2, p).value / p.lambda)
                      .epsilon(1e-14));
        }
    }
    auto ppp = scenario_from_lambda(0.1, 0.0, 100.0, 3.0);
    CHECK(pc::rho3(1.0, 2.0, ppp) == doctest::Approx(std::pow(0.1, 3.0)).epsilon(1e-14));
}
