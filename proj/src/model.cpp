#include "hsde/model.hpp"

#include "hsde/error.hpp"

#include <cmath>
#include <sstream>

namespace hsde {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

void require(bool ok, const std::string& message) {
    if (!ok) throw InvalidInput(message);
}

// weight of the tail law on the blend zone A <= |x| <= 2A
double tail_weight(double ax, double threshold) {
    if (ax <= threshold) return 0.0;
    if (ax >= 2.0 * threshold) return 1.0;
    return (ax - threshold) / threshold;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::GeneralPower: return "GeneralPower";
        case ModelKind::Pitchfork: return "Pitchfork";
        case ModelKind::SubcriticalPitchfork: return "SubcriticalPitchfork";
        case ModelKind::SaddleNode: return "SaddleNode";
    }
    return "?";
}

ModelKind model_kind_from_string(std::string_view name) {
    for (auto k : {ModelKind::GeneralPower, ModelKind::Pitchfork, ModelKind::SubcriticalPitchfork,
                   ModelKind::SaddleNode}) {
        if (to_string(k) == name) return k;
    }
    throw InvalidInput("model.kind: unknown model kind '" + std::string(name) + "'");
}

ModelSpec::ModelSpec(const ModelParams& params) : p_(params) {
    for (double v : {p_.lambda, p_.sigma, p_.alpha, p_.mu, p_.kappa, p_.nu, p_.beta, p_.tail_threshold,
                     p_.d_coef, p_.delta_exp, p_.a}) {
        require(std::isfinite(v), "model: all parameters must be finite");
    }
    require(p_.alpha >= 0.5,
            "model.alpha: alpha below strong-uniqueness threshold (alpha = " + fmt(p_.alpha) +
                " < 1/2 admits non-unique solutions)");
    require(p_.sigma >= 0.0, "model.sigma: sigma must be >= 0");

    switch (p_.kind) {
        case ModelKind::Pitchfork:
        case ModelKind::SubcriticalPitchfork:
            p_.mu = -1.0;
            p_.kappa = 2.0;
            p_.nu = 1.0;
            p_.beta = 2.0;
            p_.tail_threshold = 1.0;
            p_.d_coef = p_.sigma;
            p_.delta_exp = p_.alpha;
            p_.a = 0.0;
            break;
        case ModelKind::SaddleNode:
            p_.lambda = 0.0;
            p_.mu = -1.0;
            p_.kappa = 1.0;
            p_.nu = 1.0;
            p_.beta = 1.0;
            p_.tail_threshold = 1.0;
            p_.d_coef = p_.sigma;
            p_.delta_exp = 2.0 * p_.alpha;
            break;
        case ModelKind::GeneralPower:
            require(p_.kappa > 0.0, "model.kappa: kappa must be > 0");
            require(p_.beta > 0.0, "model.beta: beta must be > 0");
            require(p_.tail_threshold > 0.0, "model.tail_threshold: must be > 0");
            require(p_.d_coef > 0.0, "model.d_coef: diffusion tail coefficient must be > 0");
            require(p_.delta_exp >= 0.0, "model.delta_exp: must be >= 0");
            p_.a = 0.0;
            break;
    }
}

ModelSpec ModelSpec::pitchfork(double lambda, double sigma, double alpha) {
    ModelParams p;
    p.kind = ModelKind::Pitchfork;
    p.lambda = lambda;
    p.sigma = sigma;
    p.alpha = alpha;
    return ModelSpec(p);
}

ModelSpec ModelSpec::subcritical_pitchfork(double lambda, double sigma, double alpha) {
    ModelParams p;
    p.kind = ModelKind::SubcriticalPitchfork;
    p.lambda = lambda;
    p.sigma = sigma;
    p.alpha = alpha;
    return ModelSpec(p);
}

ModelSpec ModelSpec::saddle_node(double a, double sigma, double alpha) {
    ModelParams p;
    p.kind = ModelKind::SaddleNode;
    p.a = a;
    p.sigma = sigma;
    p.alpha = alpha;
    return ModelSpec(p);
}

ModelSpec ModelSpec::general_power(double lambda, double sigma, double alpha, double mu, double kappa,
                                   double nu, double beta, double tail_threshold) {
    ModelParams p;
    p.kind = ModelKind::GeneralPower;
    p.lambda = lambda;
    p.sigma = sigma;
    p.alpha = alpha;
    p.mu = mu;
    p.kappa = kappa;
    p.nu = nu;
    p.beta = beta;
    p.tail_threshold = tail_threshold;
    p.d_coef = sigma;
    p.delta_exp = alpha;
    return ModelSpec(p);
}

double signed_power(double x, double a) {
    if (!(a > 0.0)) throw InvalidInput("signed_power: exponent must be > 0");
    if (x == 0.0) return 0.0;
    const double m = std::pow(std::fabs(x), a);
    return x < 0.0 ? -m : m;
}

namespace {

// x^2 - a, exactly zero at x = +-sqrt(a).
double saddle_gap(double x, double a) {
    if (a > 0.0) {
        const double r = std::sqrt(a);
        return (x - r) * (x + r);
    }
    return x * x - a;
}

}  // namespace

double drift_eval(const ModelSpec& model, double x) {
    switch (model.kind()) {
        case ModelKind::Pitchfork:
        case ModelKind::SubcriticalPitchfork:
            return model.lambda() * x - x * x * x;
        case ModelKind::SaddleNode:
            return -saddle_gap(x, model.a());
        case ModelKind::GeneralPower: {
            const double w = tail_weight(std::fabs(x), model.tail_threshold());
            double g = 0.0;
            if (w < 1.0) g += (1.0 - w) * model.mu() * signed_power(x, 1.0 + model.kappa());
            if (w > 0.0) g -= w * model.nu() * signed_power(x, 1.0 + model.beta());
            return model.lambda() * x + g;
        }
    }
    return 0.0;
}

double diffusion_eval(const ModelSpec& model, double x) {
    switch (model.kind()) {
        case ModelKind::Pitchfork:
        case ModelKind::SubcriticalPitchfork:
            return model.sigma() * std::pow(std::fabs(x), model.alpha());
        case ModelKind::SaddleNode:
            return model.sigma() * std::pow(std::fabs(saddle_gap(x, model.a())), model.alpha());
        case ModelKind::GeneralPower: {
            const double ax = std::fabs(x);
            const double local = model.sigma() * std::pow(ax, model.alpha());
            if (model.d_coef() == model.sigma() && model.delta_exp() == model.alpha()) return local;
            const double w = tail_weight(ax, model.tail_threshold());
            if (w == 0.0) return local;
            const double tail = model.d_coef() * std::pow(ax, model.delta_exp());
            return (1.0 - w) * local + w * tail;
        }
    }
    return 0.0;
}

std::vector<double> singular_points(const ModelSpec& model) {
    if (model.kind() != ModelKind::SaddleNode) return {0.0};
    if (model.a() > 0.0) {
        const double r = std::sqrt(model.a());
        return {-r, r};
    }
    if (model.a() == 0.0) return {0.0};
    return {};
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Satisfied: return "satisfied";
        case Verdict::Violated: return "violated";
        case Verdict::NotCheckable: return "not-checkable";
    }
    return "?";
}

bool AssumptionReport::all_satisfied() const {
    for (const auto& c : h) {
        if (c.verdict != Verdict::Satisfied) return false;
    }
    return true;
}

AssumptionReport check_assumptions(const ModelSpec& m) {
    AssumptionReport r;
    auto set = [&](int i, Verdict v, std::string w) { r.h[i - 1] = {v, std::move(w)}; };
    const auto ok = Verdict::Satisfied;
    const auto bad = Verdict::Violated;

    if (m.kind() == ModelKind::SaddleNode) {
        const double a = m.a();
        if (a < 0.0) {
            set(1, Verdict::NotCheckable, "a = " + fmt(a) + " < 0: no singular point to expand around");
            set(3, Verdict::NotCheckable, "a = " + fmt(a) + " < 0: gamma has no zero");
            set(5, bad, "gamma(x) = sigma|x^2 - a|^alpha has no zero (a < 0)");
        } else if (a == 0.0) {
            set(1, ok, "g(y) = -y^2 at the fold point: mu = -1, kappa = 1");
            set(3, ok, "gamma(x) = sigma|x|^{2 alpha} at the fold point");
            set(5, ok, "gamma vanishes only at 0 (a = 0)");
        } else {
            set(1, ok, "around each root +-sqrt(a): g(y) = -y^2, mu = -1, kappa = 1");
            set(3, ok, "gamma(y) ~ sigma (2 sqrt(a))^alpha |y|^alpha around each root");
            set(5, bad, "gamma vanishes at both -sqrt(a) and +sqrt(a)");
        }
        set(2, ok, "g(y) = -y^2 <= -nu y^{1+beta} with nu = 1, beta = 1 (signed power, y >= A)");
        if (m.sigma() > 0.0) {
            set(4, ok, "gamma(x) ~ sigma |x|^{2 alpha} at infinity: d = " + fmt(m.sigma()) +
                           ", delta = " + fmt(2.0 * m.alpha()));
        } else {
            set(4, bad, "d = sigma = 0 (need d > 0)");
        }
        set(6, ok, "nu = 1 >= 0");
        return r;
    }

    // Pitchfork family and GeneralPower
    set(1, ok, "g(x) ~ mu x^{1+kappa} with mu = " + fmt(m.mu()) + ", kappa = " + fmt(m.kappa()));
    if (m.is_pitchfork_family()) {
        set(2, ok, "g(x) = -x^3 = -nu x^{1+beta} with nu = 1, beta = 2 for all |x| >= A");
    } else {
        set(2, ok, "g(x) = -nu x^{1+beta} (nu = " + fmt(m.nu()) + ", beta = " + fmt(m.beta()) +
                       ") for |x| >= 2A = " + fmt(2.0 * m.tail_threshold()));
    }
    set(3, ok, "gamma(x) ~ sigma |x|^alpha with sigma = " + fmt(m.sigma()) + ", alpha = " + fmt(m.alpha()));
    if (m.d_coef() > 0.0) {
        set(4, ok, "gamma(x) ~ d |x|^delta at infinity: d = " + fmt(m.d_coef()) + ", delta = " +
                       fmt(m.delta_exp()));
    } else {
        set(4, bad, "d = " + fmt(m.d_coef()) + " (need d > 0)");
    }
    if (m.sigma() > 0.0 && m.d_coef() > 0.0) {
        set(5, ok, "gamma(x) > 0 for x != 0");
    } else {
        set(5, bad, "sigma = 0: gamma vanishes on a neighbourhood of 0");
    }
    if (m.nu() >= 0.0) {
        set(6, ok, "(i) nu = " + fmt(m.nu()) + " >= 0");
    } else if (m.delta_exp() > 1.0 + m.beta() / 2.0) {
        set(6, ok, "(ii) nu < 0 and delta = " + fmt(m.delta_exp()) + " > 1 + beta/2 = " +
                       fmt(1.0 + m.beta() / 2.0));
    } else {
        set(6, bad, "nu = " + fmt(m.nu()) + " < 0 and delta = " + fmt(m.delta_exp()) +
                        " <= 1 + beta/2 = " + fmt(1.0 + m.beta() / 2.0));
    }
    return r;
}

}  // namespace hsde
