#include "generators.hpp"

#include "hsde/error.hpp"
#include "hsde/ldp.hpp"

#include <doctest.h>

#include <cmath>

using namespace hsde;

namespace {

double u0_closed(double lambda, double mu, double kappa, double alpha) {
    const double s = 2.0 * (1.0 - alpha);
    return lambda * std::pow(lambda / mu, s / kappa) * (1.0 / s - 1.0 / (s + kappa));
}

}  // namespace

TEST_CASE("quasipotential reference values") {
    CHECK(quasipotential(1.0, 1.0, 2.0, 0.5, 0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(quasipotential_at_zero(1.0, 1.0, 2.0, 0.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(quasipotential(2.0, 0.5, 2.0, 0.7, 2.0) == 0.0);
    CHECK(std::isinf(quasipotential_at_zero(1.0, 1.0, 2.0, 1.0)));
    CHECK(quasipotential_at_zero(1e-9, 1.0, 2.0, 0.75) < 1e-8);
}

TEST_CASE("closed form agrees with quadrature") {
    Gen g(51);
    for (int i = 0; i < kCases; ++i) {
        const double lambda = g.log_uniform(0.01, 5.0), mu = g.log_uniform(0.1, 5.0);
        const double kappa = g.uniform(0.5, 4.0), alpha = g.uniform(0.5, 0.99);
        const double closed = quasipotential_at_zero(lambda, mu, kappa, alpha);
        CHECK(closed == doctest::Approx(u0_closed(lambda, mu, kappa, alpha)).epsilon(1e-12));
        CHECK(quasipotential(lambda, mu, kappa, alpha, 0.0) == doctest::Approx(closed).epsilon(1e-10));
        if (alpha > 0.5) CHECK(closed > 0.0);
    }
}

TEST_CASE("quasipotential is nonincreasing in x and increasing in lambda") {
    Gen g(52);
    for (int i = 0; i < 40; ++i) {
        const double lambda = g.uniform(0.2, 3.0), alpha = g.uniform(0.5, 0.95);
        const double xe = std::sqrt(lambda);
        double prev = quasipotential(lambda, 1.0, 2.0, alpha, 0.0);
        for (double x : g.sorted(10, 0.0, xe)) {
            const double u = quasipotential(lambda, 1.0, 2.0, alpha, x);
            CHECK(u <= prev + 1e-12);
            prev = u;
        }
        CHECK(quasipotential_at_zero(lambda * 1.1, 1.0, 2.0, alpha) > quasipotential_at_zero(lambda, 1.0, 2.0, alpha));
    }
}

TEST_CASE("quasipotential domain") {
    CHECK_THROWS_AS(quasipotential(0.0, 1.0, 2.0, 0.75, 0.0), InvalidInput);
    CHECK_THROWS_AS(quasipotential(1.0, -1.0, 2.0, 0.75, 0.0), InvalidInput);
    CHECK_THROWS_AS(quasipotential(1.0, 1.0, 2.0, 1.0, 0.0), InvalidInput);
    CHECK_THROWS_AS(quasipotential(1.0, 1.0, 2.0, 0.4, 0.0), InvalidInput);
    CHECK_THROWS_AS(quasipotential(1.0, 1.0, 2.0, 0.75, 1.5), InvalidInput);
}

TEST_CASE("asymptotic regimes") {
    const auto sub = asymptotic_regime(1.0, 2.0, ExtReal::of(0.0));
    CHECK(sub.regime == LdpRegime::SubExponential);
    CHECK(sub.limit.value == 0.0);

    const auto exp3 = asymptotic_regime(1.0, 2.0, ExtReal::of(3.0));
    CHECK(exp3.regime == LdpRegime::Exponential);
    CHECK(exp3.limit.value == doctest::Approx(1.5));
    CHECK(exp3.deviation < 0.01);
    CHECK(exp3.expansion_sign == "1-alpha");
    for (const auto& pt : exp3.path) {
        CHECK(pt.lambda == doctest::Approx(3.0 * (1.0 - pt.alpha)));
        CHECK(pt.U0 == doctest::Approx(u0_closed(pt.lambda, 1.0, 2.0, pt.alpha)));
    }

    const auto sup = asymptotic_regime(1.0, 2.0, ExtReal::inf());
    CHECK(sup.regime == LdpRegime::SuperExponential);
    CHECK(sup.limit.infinite);
    CHECK(sup.limit.text() == "inf");

    CHECK_THROWS_AS(asymptotic_regime(1.0, 2.0, ExtReal::of(-1.0)), InvalidInput);
}

TEST_CASE("expansion tracks the exact value along the exponential path") {
    Gen g(53);
    for (int i = 0; i < 20; ++i) {
        const double c = g.uniform(0.5, 5.0);
        const double alpha = 0.9999, lambda = c * (1.0 - alpha);
        const double exact = quasipotential_at_zero(lambda, 1.0, 2.0, alpha);
        const double good = quasipotential_expansion(lambda, 1.0, 2.0, alpha);
        const double flipped = quasipotential_expansion(lambda, 1.0, 2.0, alpha, true);
        CHECK(std::abs(good - exact) < std::abs(flipped - exact));
        CHECK(flipped < 0.0);
    }
}

TEST_CASE("report at given parameters") {
    const auto r = quasipotential_report(1.0, 1.0, 2.0, 0.5, ExtReal::of(3.0));
    CHECK(r.U0.value == doctest::Approx(2.0 / 3.0));
    CHECK_FALSE(r.U0.infinite);
    CHECK(quasipotential_report(1.0, 1.0, 2.0, 1.0, ExtReal::of(3.0)).U0.infinite);
}
