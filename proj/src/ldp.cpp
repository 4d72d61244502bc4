#include "hsde/ldp.hpp"

#include "hsde/error.hpp"
#include "hsde/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace hsde {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void check_domain(double lambda, double mu, double kappa, double alpha, bool allow_one) {
    if (!(lambda > 0.0)) throw InvalidInput("ldp.lambda: must be > 0");
    if (!(mu > 0.0)) throw InvalidInput("ldp.mu: must be > 0");
    if (!(kappa > 0.0)) throw InvalidInput("ldp.kappa: must be > 0");
    if (!(alpha >= 0.5) || !(allow_one ? alpha <= 1.0 : alpha < 1.0)) {
        throw InvalidInput("ldp.alpha: must lie in [1/2, 1)");
    }
}

constexpr std::array<double, 4> kPathAlphas = {0.9, 0.99, 0.999, 0.9999};

}  // namespace

std::string ExtReal::text() const { return infinite ? "inf" : fmt(value); }

std::string_view to_string(LdpRegime r) {
    switch (r) {
        case LdpRegime::SubExponential: return "SubExponential";
        case LdpRegime::Exponential: return "Exponential";
        case LdpRegime::SuperExponential: return "SuperExponential";
    }
    return "?";
}

double quasipotential(double lambda, double mu, double kappa, double alpha, double x) {
    check_domain(lambda, mu, kappa, alpha, false);
    const double xe = std::pow(lambda / mu, 1.0 / kappa);
    if (!(x >= 0.0 && x <= xe)) {
        throw InvalidInput("ldp.x: must lie in [0, " + fmt(xe) + "]");
    }
    if (x == xe) return 0.0;
    auto f = [&](double u) {
        if (u == 0.0) return alpha == 0.5 ? lambda : 0.0;
        return (lambda * u - mu * std::pow(u, 1.0 + kappa)) * std::pow(u, -2.0 * alpha);
    };
    QuadOptions o;
    o.abs_tol = 0.0;
    o.rel_tol = 1e-13;
    const double q = x == 0.0 ? std::max(0.0, 2.0 * alpha - 1.0) : 0.0;
    return require_converged(integrate_singular(f, x, xe, q, 0.0, o), "quasipotential").value;
}

double quasipotential_at_zero(double lambda, double mu, double kappa, double alpha) {
    check_domain(lambda, mu, kappa, alpha, true);
    if (alpha == 1.0) return std::numeric_limits<double>::infinity();
    const double s = 2.0 * (1.0 - alpha);
    return lambda * std::pow(lambda / mu, s / kappa) * (1.0 / s - 1.0 / (s + kappa));
}

double quasipotential_expansion(double lambda, double mu, double kappa, double alpha, bool flipped) {
    const double s = flipped ? alpha - 1.0 : 1.0 - alpha;
    const double pre = 1.0 / (2.0 * std::pow(mu, 2.0 * (1.0 - alpha) / kappa));
    return pre * (lambda / s + 2.0 / kappa * lambda * std::log(lambda));
}

QuasipotentialReport asymptotic_regime(double mu, double kappa, ExtReal c) {
    if (!(mu > 0.0)) throw InvalidInput("ldp.mu: must be > 0");
    if (!(kappa > 0.0)) throw InvalidInput("ldp.kappa: must be > 0");
    if (!c.infinite && !(c.value >= 0.0)) throw InvalidInput("ldp.c: must lie in [0, inf]");

    QuasipotentialReport r;
    r.mu = mu;
    r.kappa = kappa;
    r.c = c;
    auto lambda_of = [&](double alpha) {
        const double e = 1.0 - alpha;
        if (c.infinite) return std::sqrt(e);
        if (c.value == 0.0) return e * e;
        return c.value * e;
    };
    if (c.infinite) {
        r.regime = LdpRegime::SuperExponential;
        r.limit = ExtReal::inf();
        r.path_rule = "lambda = sqrt(1 - alpha)";
    } else if (c.value == 0.0) {
        r.regime = LdpRegime::SubExponential;
        r.limit = ExtReal::of(0.0);
        r.path_rule = "lambda = (1 - alpha)^2";
    } else {
        r.regime = LdpRegime::Exponential;
        r.limit = ExtReal::of(c.value / 2.0);
        r.path_rule = "lambda = c (1 - alpha)";
    }
    double err_plain = 0.0, err_flip = 0.0;
    for (double alpha : kPathAlphas) {
        PathPoint p;
        p.alpha = alpha;
        p.lambda = lambda_of(alpha);
        p.U0 = quasipotential_at_zero(p.lambda, mu, kappa, alpha);
        p.expansion = quasipotential_expansion(p.lambda, mu, kappa, alpha, false);
        p.expansion_flipped = quasipotential_expansion(p.lambda, mu, kappa, alpha, true);
        err_plain += std::fabs(p.expansion - p.U0);
        err_flip += std::fabs(p.expansion_flipped - p.U0);
        r.path.push_back(p);
    }
    r.expansion_sign = err_plain <= err_flip ? "1-alpha" : "alpha-1";
    r.empirical_limit = r.path.back().U0;
    if (!r.limit.infinite) {
        const double L = r.limit.value;
        r.deviation = L != 0.0 ? std::fabs(r.empirical_limit - L) / L : std::fabs(r.empirical_limit);
    }
    return r;
}

QuasipotentialReport quasipotential_report(double lambda, double mu, double kappa, double alpha, ExtReal c) {
    check_domain(lambda, mu, kappa, alpha, true);
    QuasipotentialReport r = asymptotic_regime(mu, kappa, c);
    r.lambda = lambda;
    r.alpha = alpha;
    r.U0 = alpha == 1.0 ? ExtReal::inf() : ExtReal::of(quasipotential_at_zero(lambda, mu, kappa, alpha));
    return r;
}

}  // namespace hsde
