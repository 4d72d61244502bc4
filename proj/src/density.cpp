#include "hsde/density.hpp"

#include "hsde/error.hpp"
#include "hsde/quadrature.hpp"
#include "hsde/roots.hpp"
#include "hsde/scale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hsde {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

bool is_sn_closed_form(const ModelSpec& m) { return m.kind() == ModelKind::SaddleNode && m.alpha() == 1.0; }

double reference_for(const Interval& s) {
    if (s.contains(1.0) && s.lo >= 0.0) return 1.0;
    if (s.contains(-1.0) && s.hi <= 0.0) return -1.0;
    if (s.contains(0.0) && !s.lo_finite() && !s.hi_finite()) return 0.0;
    return default_reference_point(s);
}

void require_window(double a, double sigma) {
    if (!(sigma > 0.0) || !(a > 0.0) || !(a * std::pow(sigma, 4) < 1.0)) {
        throw AnalyticRefusal("saddle-node density requires 0 < a < sigma^-4 (a = " + fmt(a) + ", sigma^-4 = " +
                              fmt(std::pow(sigma, -4)) + ")");
    }
}

// q0 at x = -sqrt(a) - d for a > 0, without the cancellation in x + sqrt(a).
double sn_q0_below(double a, double sigma, double d) {
    const double r = std::sqrt(a);
    const double phi = 1.0 / (sigma * sigma * r);
    return std::pow(d, -2.0 + phi) * std::pow(2.0 * r + d, -2.0 - phi);
}

double sn_q0(double a, double sigma, double x) {
    if (a > 0.0) {
        const double r = std::sqrt(a);
        const double phi = 1.0 / (sigma * sigma * r);
        return std::pow(std::fabs(x + r), -2.0 + phi) * std::pow(std::fabs(x - r), -2.0 - phi);
    }
    const double r = std::sqrt(-a);
    const double d = x * x - a;
    return std::exp(-2.0 * std::atan(x / r) / (sigma * sigma * r)) / (d * d);
}

struct SnIntegrals {
    double z0 = 0.0, z1 = 0.0, z2 = 0.0;
};

// Integrals of x^k q0 over the granted support, by adaptive quadrature.
SnIntegrals sn_integrals(double a, double sigma) {
    QuadOptions o;
    o.abs_tol = 0.0;
    o.rel_tol = 1e-12;
    SnIntegrals s;
    if (a > 0.0) {
        const double r = std::sqrt(a);
        const double phi = 1.0 / (sigma * sigma * r);
        const double qa = std::max(0.0, 2.0 - phi);
        auto moment = [&](int k) {
            auto g = [&, k](double t) {
                if (t >= 1.0) return 0.0;
                const double u = 1.0 - t;
                const double d = t / u;
                return std::pow(-r - d, k) * sn_q0_below(a, sigma, d) / (u * u);
            };
            return require_converged(integrate_singular(g, 0.0, 1.0, qa, 0.0, o), "saddle-node density moment").value;
        };
        s.z0 = moment(0);
        s.z1 = moment(1);
        s.z2 = moment(2);
        return s;
    }
    auto q = [&](int k) {
        auto g = [&, k](double x) { return std::pow(x, k) * sn_q0(a, sigma, x); };
        return require_converged(integrate(g, -kInf, kInf, o), "saddle-node density moment").value;
    };
    s.z0 = q(0);
    s.z1 = q(1);
    s.z2 = q(2);
    return s;
}

bool granted(const ModelSpec& model, const Interval& support) {
    for (const auto& e : classify_stationary(model)) {
        if (e.form == StationaryForm::HomogeneousDensity && e.support.lo == support.lo && e.support.hi == support.hi) {
            return true;
        }
    }
    return false;
}

void require_integrable(const ModelSpec& model, const Interval& support) {
    for (bool is_lo : {true, false}) {
        const double e = is_lo ? support.lo : support.hi;
        const LocalForm L = local_form(model, e, is_lo);
        if (!L.m_finite) {
            throw AnalyticRefusal("no integrable solution on " + to_string(support) + ": q0 is non-integrable at " +
                                  fmt(e) + " (" + L.rule + ")");
        }
    }
    if (!granted(model, support)) {
        throw AnalyticRefusal("no integrable solution on " + to_string(support) +
                              ": the stationary classification grants no density there");
    }
}

struct GenericNorm {
    double z = 0.0, mean = 0.0, second = 0.0;
};

GenericNorm generic_norm(const ModelSpec& model, const Interval& support) {
    ScaleFunctions sf(model, support, reference_for(support));
    const auto lo = sf.limits(false);
    const auto hi = sf.limits(true);
    for (const Limit* l : {&lo.m, &hi.m, &lo.m1, &hi.m1, &lo.m2, &hi.m2}) {
        if (!l->is_finite()) {
            throw NumericalFailure("normalize_density: speed measure did not converge on " + to_string(support),
                                   std::numeric_limits<double>::infinity());
        }
    }
    const double mass = hi.m.value - lo.m.value;
    GenericNorm g;
    g.z = 2.0 / mass;
    g.mean = (hi.m1.value - lo.m1.value) / mass;
    g.second = (hi.m2.value - lo.m2.value) / mass;
    return g;
}

}  // namespace

std::string_view to_string(ModeKind k) {
    switch (k) {
        case ModeKind::Interior: return "Interior";
        case ModeKind::DivergesAtBoundary: return "DivergesAtBoundary";
        case ModeKind::AtBoundary: return "AtBoundary";
    }
    return "?";
}

Interval density_support(const ModelSpec& model, double x) {
    for (const auto& e : classify_stationary(model)) {
        if (e.form == StationaryForm::HomogeneousDensity && e.support.contains(x)) return e.support;
    }
    throw AnalyticRefusal("no integrable solution of the stationary equation contains x = " + fmt(x));
}

double stationary_density_generic(const ModelSpec& model, const Interval& support, double x) {
    if (!support.contains(x)) throw InvalidInput("density: x = " + fmt(x) + " outside " + to_string(support));
    ScaleFunctions sf(model, support, reference_for(support));
    const double g = sf.coefficients(x).second;
    return std::exp(2.0 * sf.G(x)) / (g * g);
}

double stationary_density_unnormalized(const ModelSpec& model, double x) {
    const Interval s = density_support(model, x);
    if (is_sn_closed_form(model)) return sn_q0(model.a(), model.sigma(), x);
    return stationary_density_generic(model, s, x);
}

double normalize_density(const ModelSpec& model, const Interval& support) {
    require_integrable(model, support);
    if (is_sn_closed_form(model)) return 1.0 / sn_integrals(model.a(), model.sigma()).z0;
    return generic_norm(model, support).z;
}

Moments density_moments(const ModelSpec& model, const Interval& support) {
    require_integrable(model, support);
    if (is_sn_closed_form(model)) {
        const auto s = sn_integrals(model.a(), model.sigma());
        return {s.z1 / s.z0, s.z2 / s.z0};
    }
    const auto g = generic_norm(model, support);
    return {g.mean, g.second};
}

double pitchfork_mode(double lambda, double sigma, double alpha) {
    if (!(lambda > 0.0) || !(sigma > 0.0) || !(alpha > 1.0)) {
        throw AnalyticRefusal("pitchfork_mode: needs lambda > 0, sigma > 0, alpha > 1");
    }
    const double s2a = sigma * sigma * alpha;
    // multiplied through by X^{2 alpha - 2}: increasing in X, same root
    auto F = [&](double X) { return s2a * std::pow(X, 2.0 * alpha - 2.0) - lambda + X * X; };
    double hi = std::sqrt(lambda) * (1.0 + s2a);
    for (int attempt = 0; attempt < 2; ++attempt) {
        if (F(hi) > 0.0) return bisect(F, 0.0, hi, 1e-15, 0.0);
        hi *= 10.0;
    }
    throw NumericalFailure("pitchfork_mode: no sign change in the bracket", hi);
}

double saddle_node_phi(double a, double sigma) {
    require_window(a, sigma);
    return 1.0 / (sigma * sigma * std::sqrt(a));
}

double saddle_node_Z(double a, double sigma) {
    const double phi = saddle_node_phi(a, sigma);
    return 4.0 * std::pow(a, 1.5) * phi * (phi * phi - 1.0);
}

Moments saddle_node_moments(double a, double sigma) {
    const double phi = saddle_node_phi(a, sigma);
    return {-phi * std::sqrt(a), (2.0 * phi * phi - 1.0) * a};
}

ModeInfo saddle_node_mode(double a, double sigma) {
    const double phi = saddle_node_phi(a, sigma);
    const double r = std::sqrt(a);
    if (phi > 2.0) return {ModeKind::Interior, -phi * r / 2.0};
    if (phi < 2.0) return {ModeKind::DivergesAtBoundary, -r};
    return {ModeKind::AtBoundary, -r};
}

double lyapunov_exponent_sn(double a, double sigma) {
    require_window(a, sigma);
    const double s2 = sigma * sigma;
    return 2.0 * (s2 * s2 * a - 1.0) / s2;
}

std::vector<Threshold> p_bifurcation_points(const ModelSpec& model) {
    std::vector<Threshold> out;
    if (model.alpha() != 1.0) return out;
    const double s2 = model.sigma() * model.sigma();
    if (model.is_pitchfork_family()) {
        out.push_back({"lambda", s2,
                       "lambda = sigma^2: density divergent at 0 below, vanishing at 0 with an interior peak above"});
    } else if (model.kind() == ModelKind::SaddleNode && s2 > 0.0) {
        out.push_back({"a", 1.0 / (4.0 * s2 * s2),
                       "sigma^2 sqrt(a) = 1/2: interior peak below, divergent at -sqrt(a) above"});
    }
    return out;
}

double particular_solution(const ModelSpec& model, const Interval& support, double K, double x) {
    if (!support.contains(x)) throw InvalidInput("density: x = " + fmt(x) + " outside " + to_string(support));
    ScaleFunctions sf(model, support, reference_for(support));
    const double g = sf.coefficients(x).second;
    const double q0 = std::exp(2.0 * sf.G(x)) / (g * g);
    return q0 * (1.0 - 2.0 * K * sf.p(x));
}

ModeInfo density_mode(const ModelSpec& model, const Interval& support) {
    require_integrable(model, support);
    const double sign = support.hi <= 0.0 ? -1.0 : 1.0;
    const double s2 = model.sigma() * model.sigma();
    if (model.kind() == ModelKind::SaddleNode) {
        if (model.alpha() == 1.0 && model.a() > 0.0) return saddle_node_mode(model.a(), model.sigma());
        if (model.alpha() == 1.0 && model.a() < 0.0) return {ModeKind::Interior, -1.0 / (2.0 * s2)};
    }
    if (model.kind() == ModelKind::Pitchfork) {
        if (model.alpha() == 1.0) {
            const double gap = model.lambda() - s2;
            if (gap > 0.0) return {ModeKind::Interior, sign * std::sqrt(gap)};
            if (gap < 0.0) return {ModeKind::DivergesAtBoundary, 0.0};
            return {ModeKind::AtBoundary, 0.0};
        }
        if (model.alpha() > 1.0) {
            return {ModeKind::Interior, sign * pitchfork_mode(model.lambda(), model.sigma(), model.alpha())};
        }
    }
    // numerical: maximise log q0 = 2G - 2 log gamma over a log-spaced scan, then golden-section refine
    ScaleFunctions sf(model, support, reference_for(support));
    auto logq = [&](double x) {
        const double g = sf.coefficients(x).second;
        return 2.0 * sf.G(x) - 2.0 * std::log(g);
    };
    const double e = support.lo_finite() ? support.lo : support.hi;
    const double dir = support.lo_finite() ? 1.0 : -1.0;
    std::vector<double> xs;
    for (double t = -8.0; t <= 4.0; t += 0.05) {
        const double x = e + dir * std::pow(10.0, t);
        if (support.contains(x)) xs.push_back(x);
    }
    std::size_t best = 0;
    double best_v = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double v = -std::numeric_limits<double>::infinity();
        try {
            v = logq(xs[i]);
        } catch (const NumericalFailure&) {
        }
        if (v > best_v) {
            best_v = v;
            best = i;
        }
    }
    if (best == 0) return {ModeKind::DivergesAtBoundary, e};
    if (best + 1 == xs.size()) throw NumericalFailure("density_mode: maximum not bracketed by the scan", xs.back());
    double lo = xs[best - 1], hi = xs[best + 1];
    if (lo > hi) std::swap(lo, hi);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = logq(c), fd = logq(d);
    for (int i = 0; i < 200 && hi - lo > 1e-13 * std::fabs(hi); ++i) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = logq(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = logq(d);
        }
    }
    return {ModeKind::Interior, 0.5 * (lo + hi)};
}

DensityProfile density_profile(const ModelSpec& model, const Interval& support, const std::vector<double>& grid) {
    DensityProfile d;
    d.support = support;
    d.Z = normalize_density(model, support);
    const Moments mo = density_moments(model, support);
    d.mean = mo.mean;
    d.second_moment = mo.second;
    d.mode = density_mode(model, support);
    switch (d.mode.kind) {
        case ModeKind::Interior: d.shape = DensityShape::PeakedInterior; break;
        case ModeKind::DivergesAtBoundary: d.shape = DensityShape::DivergentAtBoundary; break;
        case ModeKind::AtBoundary: d.shape = DensityShape::Boundary; break;
    }
    if (is_sn_closed_form(model) && model.a() > 0.0) d.lyapunov = lyapunov_exponent_sn(model.a(), model.sigma());
    d.thresholds = p_bifurcation_points(model);

    const bool closed = is_sn_closed_form(model);
    std::optional<ScaleFunctions> sf;
    if (!closed) sf.emplace(model, support, reference_for(support));
    for (double x : grid) {
        if (!support.contains(x)) throw InvalidInput("density.grid: x = " + fmt(x) + " outside " + to_string(support));
        double q = 0.0;
        if (closed) {
            q = sn_q0(model.a(), model.sigma(), x);
        } else {
            const double g = sf->coefficients(x).second;
            q = std::exp(2.0 * sf->G(x)) / (g * g);
        }
        d.grid.push_back(x);
        d.unnormalized.push_back(q);
        d.density.push_back(d.Z * q);
    }
    return d;
}

}  // namespace hsde
