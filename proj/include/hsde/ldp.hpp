#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hsde {

/// Extended real: a finite value or +inf, kept apart from IEEE infinity.
struct ExtReal {
    double value = 0.0;
    bool infinite = false;

    static ExtReal inf() { return {0.0, true}; }
    static ExtReal of(double v) { return {v, false}; }
    std::string text() const;
};

enum class LdpRegime { SubExponential, Exponential, SuperExponential };
std::string_view to_string(LdpRegime r);

/// U(x) = int_x^{(lambda/mu)^{1/kappa}} (lambda u - mu u^{1+kappa}) / u^{2 alpha} du.
/// Domain: lambda, mu, kappa > 0, 1/2 <= alpha < 1, 0 <= x <= (lambda/mu)^{1/kappa}.
double quasipotential(double lambda, double mu, double kappa, double alpha, double x);

/// Closed form of U(0); alpha = 1 returns +inf.
double quasipotential_at_zero(double lambda, double mu, double kappa, double alpha);

/// Series expansion of U(0) near (alpha, lambda) = (1, 0):
///   (lambda / s + (2/kappa) lambda log lambda) / (2 mu^{2(1-alpha)/kappa}),
/// with s = 1 - alpha, or s = alpha - 1 when flipped.
double quasipotential_expansion(double lambda, double mu, double kappa, double alpha, bool flipped = false);

struct PathPoint {
    double alpha = 0.0;
    double lambda = 0.0;
    double U0 = 0.0;
    double expansion = 0.0;          // s = 1 - alpha
    double expansion_flipped = 0.0;  // s = alpha - 1
};

struct QuasipotentialReport {
    double lambda = 0.0, mu = 1.0, kappa = 1.0, alpha = 0.0;
    ExtReal U0;
    ExtReal c;
    LdpRegime regime = LdpRegime::Exponential;
    ExtReal limit;
    std::string path_rule;  // how lambda follows alpha along the tabulated path
    std::vector<PathPoint> path;
    double empirical_limit = 0.0;
    double deviation = 0.0;  // relative deviation of empirical_limit from limit (finite limits only)
    std::string expansion_sign;  // "1-alpha" or "alpha-1", whichever tracks U0 along the path
};

/// Regime of the (alpha -> 1-, lambda -> 0+) limit with lambda / (1 - alpha) -> c.
QuasipotentialReport asymptotic_regime(double mu, double kappa, ExtReal c);

/// asymptotic_regime plus U0 at the given parameters.
QuasipotentialReport quasipotential_report(double lambda, double mu, double kappa, double alpha, ExtReal c);

}  // namespace hsde
