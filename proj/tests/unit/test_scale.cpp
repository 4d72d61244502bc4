#include "generators.hpp"

#include "hsde/error.hpp"
#include "hsde/quadrature.hpp"
#include "hsde/roots.hpp"
#include "hsde/scale.hpp"

#include <doctest.h>

#include <cmath>

using namespace hsde;

namespace {

const Interval kPositive{0.0, kInf};

ModelSpec zero_drift() { return ModelSpec::general_power(0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0); }

// Probability of reaching -1 first for dx = (1 - x^2) dt + 0.5 |x^2 - 1|^{3/4} dW.
double exit_left_probability(double x) {
    const auto F = [](double t) { return std::exp(-8.0 * t) * (std::sin(t) - 8.0 * std::cos(t)) / 65.0; };
    const double lo = F(-M_PI / 2.0), hi = F(M_PI / 2.0);
    return (hi - F(std::asin(x))) / (hi - lo);
}

}  // namespace

TEST_CASE("quadrature of smooth, singular and infinite integrands") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0).value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, kInf).value ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(integrate([](double x) { return std::exp(-x * x); }, -kInf, kInf).value ==
          doctest::Approx(std::sqrt(M_PI)).epsilon(1e-10));
    CHECK(integrate_singular([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 0.5, 0.0).value ==
          doctest::Approx(2.0).epsilon(1e-10));
    CHECK(integrate_singular([](double x) { return std::pow(1.0 - x, -0.75); }, 0.0, 1.0, 0.0, 0.75).value ==
          doctest::Approx(4.0).epsilon(1e-9));

    QuadOptions tight;
    tight.max_subdivisions = 3;
    const auto r = integrate([](double x) { return std::sin(1.0 / x); }, 1e-4, 1.0, tight);
    CHECK_FALSE(r.converged);
    CHECK_THROWS_AS(require_converged(r, "test"), NumericalFailure);
}

TEST_CASE("quadrature matches monomials") {
    Gen g(31);
    for (int i = 0; i < kCases; ++i) {
        const double a = g.uniform(-3.0, 1.0), b = a + g.uniform(0.1, 3.0);
        const int k = g.integer(0, 9);
        const double want = (std::pow(b, k + 1) - std::pow(a, k + 1)) / (k + 1);
        const double got = integrate([k](double x) { return std::pow(x, k); }, a, b).value;
        CHECK(got == doctest::Approx(want).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("Chebyshev panels integrate and interpolate polynomials") {
    const auto x = cheb::nodes(-1.0, 2.0);
    cheb::Values f{};
    for (int i = 0; i <= cheb::kN; ++i) f[i] = 3.0 * x[i] * x[i] - 1.0;
    const auto c = cheb::cumulative(f, -1.0, 2.0);
    for (int i = 0; i <= cheb::kN; ++i) {
        const double want = (x[i] * x[i] * x[i] - x[i]) - ((-1.0) - (-1.0));
        CHECK(c[i] == doctest::Approx(want).epsilon(1e-12).scale(1.0));
    }
    CHECK(cheb::interpolate(f, -1.0, 2.0, 0.3) == doctest::Approx(3.0 * 0.09 - 1.0));
    CHECK(cheb::tail_ratio(f) < 1e-12);
}

TEST_CASE("bisection") {
    CHECK(bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0), NumericalFailure);
}

TEST_CASE("G against closed-form antiderivatives") {
    // int_1^2 (xi - xi^3) / xi dxi = -4/3
    CHECK(compute_G(ModelSpec::pitchfork(1.0, 1.0, 0.5), kPositive, 1.0, 2.0) ==
          doctest::Approx(-4.0 / 3.0).epsilon(1e-10));
    CHECK(compute_G(ModelSpec::saddle_node(1.0, 1.0, 1.0), Interval{-1.0, 1.0}, 0.0, 0.5) ==
          doctest::Approx(std::atanh(0.5)).epsilon(1e-10));

    Gen g(32);
    for (int i = 0; i < 50; ++i) {
        const double lambda = g.uniform(-2.0, 2.0), sigma = g.uniform(0.3, 2.0);
        const double x = g.uniform(0.2, 3.0);
        // alpha = 1: G = (lambda log x - (x^2 - 1)/2) / sigma^2
        const double want = (lambda * std::log(x) - (x * x - 1.0) / 2.0) / (sigma * sigma);
        CHECK(compute_G(ModelSpec::pitchfork(lambda, sigma, 1.0), kPositive, 1.0, x) ==
              doctest::Approx(want).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("scale functions vanish at the reference point") {
    const auto m = ModelSpec::pitchfork(0.4, 0.9, 0.8);
    for (double c : {0.3, 1.0, 2.5}) {
        CHECK(compute_G(m, kPositive, c, c) == 0.0);
        CHECK(scale_p(m, kPositive, c, c) == 0.0);
        CHECK(scale_v(m, kPositive, c, c) == 0.0);
    }
}

TEST_CASE("zero drift gives p(x) = x - c") {
    Gen g(33);
    for (int i = 0; i < 50; ++i) {
        const double c = g.uniform(0.1, 5.0), x = g.uniform(0.05, 8.0);
        CHECK(scale_p(zero_drift(), kPositive, c, x) == doctest::Approx(x - c).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("scale table invariants") {
    Gen g(34);
    for (int i = 0; i < 20; ++i) {
        const auto m = ModelSpec::pitchfork(g.uniform(-1.0, 1.0), g.uniform(0.3, 1.5), g.uniform(0.5, 2.0));
        const auto grid = g.sorted(15, 0.05, 3.0);
        const auto t = scale_table(m, kPositive, 1.0, grid);
        for (std::size_t k = 1; k < grid.size(); ++k) CHECK(t.p_vals[k] > t.p_vals[k - 1]);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            CHECK(t.v_vals[k] >= 0.0);
            if (grid[k] > 1.0 && k > 0 && grid[k - 1] > 1.0) CHECK(t.v_vals[k] >= t.v_vals[k - 1]);
            if (grid[k] < 1.0 && k + 1 < grid.size() && grid[k + 1] < 1.0) CHECK(t.v_vals[k] >= t.v_vals[k + 1]);
        }
    }
}

TEST_CASE("tightening the tolerance moves values by less than the error estimate") {
    const auto m = ModelSpec::pitchfork(0.5, 0.8, 0.7);
    ScaleFunctions loose(m, kPositive, 1.0, 1e-8), tight(m, kPositive, 1.0, 5e-9);
    for (double x : {0.1, 0.5, 2.0}) {
        const double diff = std::abs(loose.p(x) - tight.p(x));
        CHECK(diff <= std::max(loose.error_estimate(), 1e-12));
    }
}

TEST_CASE("boundary limits and Feller verdicts") {
    const auto qsd = boundary_limits(ModelSpec::pitchfork(-0.5, 0.5, 0.6), kPositive);
    CHECK(qsd.lo.v.is_finite());
    CHECK(qsd.hi.p.kind == LimitKind::PlusInfinity);
    CHECK(qsd.verdict == FellerVerdict::ExitAlmostSurelyFinite);

    const auto critical = boundary_limits(ModelSpec::pitchfork(0.3, 1.0, 1.0), kPositive);
    CHECK(critical.lo.v.is_infinite());
    CHECK(critical.verdict == FellerVerdict::NoExit);

    const auto blow = boundary_limits(ModelSpec::saddle_node(-1.0, 1.0, 0.6), Interval{-kInf, kInf});
    CHECK(blow.lo.p.is_finite());
    CHECK(blow.lo.v.is_finite());

    const auto stuck = boundary_limits(ModelSpec::saddle_node(1.0, 1.0, 1.2), Interval{-1.0, 1.0});
    CHECK(stuck.verdict == FellerVerdict::NoExit);
}

TEST_CASE("Feller verdicts agree with the classifier across the grid") {
    for (double alpha : {0.5, 0.6, 0.75, 0.85, 1.0, 1.2, 2.0}) {
        for (double lambda : {-1.0, 0.3, 2.0}) {
            const auto m = ModelSpec::pitchfork(lambda, 0.7, alpha);
            const auto verdict = boundary_limits(m, kPositive).verdict;
            const bool exits = verdict == FellerVerdict::ExitAlmostSurelyFinite;
            CHECK(exits == (alpha < 1.0));
        }
    }
}

TEST_CASE("invalid scale requests") {
    const auto m = ModelSpec::pitchfork(1.0, 1.0, 1.0);
    CHECK_THROWS_AS(ScaleFunctions(m, Interval{-1.0, 1.0}, 0.5), InvalidInput);
    CHECK_THROWS_AS(ScaleFunctions(m, kPositive, -1.0), InvalidInput);
    CHECK_THROWS_AS(ScaleFunctions(ModelSpec::pitchfork(1.0, 0.0, 1.0), kPositive, 1.0), AnalyticRefusal);
}

TEST_CASE("hitting probabilities") {
    const auto m = ModelSpec::saddle_node(1.0, 0.5, 0.75);
    CHECK(hitting_probability(m, 0.0) == doctest::Approx(exit_left_probability(0.0)).epsilon(1e-8));
    CHECK(hitting_probability(m, 1.0 - 1e-9) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(hitting_probability(m, -1.0 + 1e-9) == doctest::Approx(1.0).epsilon(1e-6));

    Gen g(35);
    const auto xs = g.sorted(30, -0.999, 0.999);
    double prev = 2.0;
    for (double x : xs) {
        const double p = hitting_probability(m, x);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        CHECK(p <= prev);
        CHECK(p == doctest::Approx(exit_left_probability(x)).epsilon(1e-7).scale(1.0));
        prev = p;
    }

    CHECK_THROWS_AS(hitting_probability(ModelSpec::saddle_node(1.0, 0.5, 1.0), 0.0), AnalyticRefusal);
    CHECK_NOTHROW(hitting_probability(ModelSpec::saddle_node(4.0, 0.8, 1.0), 0.0, HittingMode::ConvergenceProbability));
    CHECK_THROWS_AS(hitting_probability(m, 1.5), InvalidInput);
    CHECK_THROWS_AS(hitting_probability(ModelSpec::pitchfork(1.0, 1.0, 1.0), 0.5), InvalidInput);
}
