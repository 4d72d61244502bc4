#include "hsde/classify.hpp"

#include "hsde/error.hpp"

#include <cmath>
#include <sstream>

namespace hsde {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

StationaryEntry dirac(double point) {
    StationaryEntry e;
    e.form = StationaryForm::DiracAtPoint;
    e.support = Interval{point, point};
    e.point = point;
    return e;
}

StationaryEntry half_line_density(bool positive, DensityShape shape, FirstApproximation fa, std::string note) {
    StationaryEntry e;
    e.form = StationaryForm::HomogeneousDensity;
    e.support = positive ? Interval{0.0, kInf} : Interval{-kInf, 0.0};
    e.shape = shape;
    e.first_approximation = fa;
    e.note = std::move(note);
    return e;
}

DensityShape shape_from(const Condition& c, DensityShape below, DensityShape above) {
    switch (c.relation) {
        case Relation::Less: return below;
        case Relation::Greater: return above;
        case Relation::Equal: break;
    }
    return DensityShape::Boundary;
}

void require_zero_singular(const ModelSpec& m, const char* op) {
    if (!m.has_singular_point_at_zero()) {
        throw InvalidInput(std::string(op) + ": SaddleNode models are classified by classify_saddle_node");
    }
}

}  // namespace

std::string_view to_string(Existence v) {
    return v == Existence::UniqueStrong ? "UniqueStrong" : "NonUnique";
}

std::string_view to_string(Blowup v) {
    switch (v) {
        case Blowup::Never: return "Never";
        case Blowup::AlmostSurelyFiniteTime: return "AlmostSurelyFiniteTime";
        case Blowup::Unknown: return "Unknown";
    }
    return "?";
}

std::string_view to_string(Absorption v) {
    switch (v) {
        case Absorption::AlmostSurelyFinite: return "AlmostSurelyFinite";
        case Absorption::Never: return "Never";
        case Absorption::Unknown: return "Unknown";
    }
    return "?";
}

std::string_view to_string(Stability v) {
    switch (v) {
        case Stability::AsymptoticallyStableInProbability: return "AsymptoticallyStableInProbability";
        case Stability::StableInProbability: return "StableInProbability";
        case Stability::AlmostSurelyExponentiallyStable: return "AlmostSurelyExponentiallyStable";
        case Stability::UnstableInProbability: return "UnstableInProbability";
        case Stability::Boundary: return "Boundary";
    }
    return "?";
}

std::string_view to_string(Qsd v) {
    switch (v) {
        case Qsd::Exists: return "Exists";
        case Qsd::NumericallyAbsent: return "NumericallyAbsent";
        case Qsd::NotApplicable: return "NotApplicable";
    }
    return "?";
}

std::string_view to_string(StationaryForm v) {
    return v == StationaryForm::DiracAtPoint ? "DiracAtPoint" : "HomogeneousDensity";
}

std::string_view to_string(DensityShape v) {
    switch (v) {
        case DensityShape::PeakedInterior: return "PeakedInterior";
        case DensityShape::DivergentAtBoundary: return "DivergentAtBoundary";
        case DensityShape::Boundary: return "Boundary";
    }
    return "?";
}

std::string_view to_string(FirstApproximation v) {
    return v == FirstApproximation::Stable ? "Stable" : "Unknown";
}

std::string_view to_string(Relation v) {
    switch (v) {
        case Relation::Less: return "<";
        case Relation::Equal: return "=";
        case Relation::Greater: return ">";
    }
    return "?";
}

Condition Condition::of(std::string expression, double margin) {
    Condition c;
    c.expression = std::move(expression);
    c.margin = margin;
    c.relation = margin < 0.0 ? Relation::Less : (margin > 0.0 ? Relation::Greater : Relation::Equal);
    return c;
}

std::string Condition::text() const {
    return expression + " = " + num(margin) + " " + std::string(to_string(relation)) + " 0";
}

ExistenceVerdict classify_existence(const ModelSpec& m) {
    ExistenceVerdict v;
    v.existence = Existence::UniqueStrong;
    if (m.kind() == ModelKind::SaddleNode) {
        const double a = m.a();
        const double al = m.alpha();
        if (al >= 1.0) {
            v.blowup = Blowup::Never;
            v.note = "alpha = " + num(al) + " >= 1: solutions never blow up";
        } else if (a < 0.0 && al < 0.75) {
            v.blowup = Blowup::AlmostSurelyFiniteTime;
            v.note = "a < 0 and alpha = " + num(al) +
                     " < 3/4: p(-inf) and v(-inf) finite, blow-up to -inf in finite time a.s.";
        } else if (a < 0.0) {
            v.blowup = Blowup::Unknown;
            v.note = "a < 0 and 3/4 <= alpha < 1: the tail exponent of G is not integrable at -inf, "
                     "finite-time blow-up is not established";
        } else {
            v.blowup = Blowup::Unknown;
            v.note = "a >= 0 and alpha < 1: paths started below -sqrt(a) may exit to -inf";
        }
        return v;
    }
    const auto h = check_assumptions(m);
    if (h.satisfied(2) && h.satisfied(4) && h.satisfied(6)) {
        v.blowup = Blowup::Never;
        v.note = "unique strong solution (alpha >= 1/2); H2, H4, H6 hold: the solution never blows up in "
                 "finite time";
    } else {
        v.blowup = Blowup::Unknown;
        v.note = "unique strong solution (alpha >= 1/2); non-explosion not established: " +
                 (h.satisfied(6) ? h[4].witness : h[6].witness);
    }
    return v;
}

StabilityVerdict classify_delta0(const ModelSpec& m) {
    require_zero_singular(m, "classify_delta0");
    if (m.sigma() == 0.0) throw AnalyticRefusal("classify_delta0: deterministic system (sigma = 0)");
    StabilityVerdict v;
    v.point = 0.0;
    const double al = m.alpha();
    if (al < 1.0) {
        v.condition = Condition::of("alpha - 1", al - 1.0);
        v.status = Stability::AsymptoticallyStableInProbability;
    } else if (al == 1.0) {
        v.condition = Condition::of("lambda - sigma^2/2", m.lambda() - m.sigma() * m.sigma() / 2.0);
        switch (v.condition.relation) {
            case Relation::Less:
                v.status = m.is_pitchfork_family() ? Stability::AlmostSurelyExponentiallyStable
                                                   : Stability::AsymptoticallyStableInProbability;
                break;
            case Relation::Greater: v.status = Stability::UnstableInProbability; break;
            case Relation::Equal: v.status = Stability::Boundary; break;
        }
    } else {
        v.condition = Condition::of("lambda", m.lambda());
        switch (v.condition.relation) {
            case Relation::Less: v.status = Stability::StableInProbability; break;
            case Relation::Greater: v.status = Stability::UnstableInProbability; break;
            case Relation::Equal: v.status = Stability::Boundary; break;
        }
    }
    return v;
}

AbsorptionVerdict classify_absorption(const ModelSpec& m) {
    if (m.kind() == ModelKind::SaddleNode) {
        return classify_saddle_node(m.a(), m.sigma(), m.alpha()).absorption;
    }
    const double al = m.alpha();
    if (m.sigma() == 0.0) {
        return {Absorption::Never, "sigma = 0: the deterministic flow never reaches 0 in finite time"};
    }
    if (al >= 1.0) {
        return {Absorption::Never, "alpha = " + num(al) + " >= 1: paths never reach 0"};
    }
    if (m.nu() > 0.0) {
        return {Absorption::AlmostSurelyFinite,
                "alpha = " + num(al) + " < 1, sigma > 0, nu = " + num(m.nu()) + " > 0"};
    }
    if (m.nu() == 0.0 && m.lambda() < 0.0) {
        return {Absorption::AlmostSurelyFinite,
                "alpha = " + num(al) + " < 1, nu = 0 and lambda = " + num(m.lambda()) + " < 0"};
    }
    return {Absorption::Unknown, "alpha < 1 but (nu > 0) or (nu = 0 and lambda < 0) fails: nu = " +
                                     num(m.nu()) + ", lambda = " + num(m.lambda())};
}

std::vector<StationaryEntry> classify_stationary(const ModelSpec& m) {
    if (m.kind() == ModelKind::SaddleNode) {
        return classify_saddle_node(m.a(), m.sigma(), m.alpha()).stationary;
    }
    std::vector<StationaryEntry> out{dirac(0.0)};
    if (m.sigma() == 0.0) return out;
    const bool h6 = check_assumptions(m).satisfied(6);
    const double al = m.alpha();
    const double s2 = m.sigma() * m.sigma();
    if (al == 1.0) {
        const auto exists = Condition::of("lambda - sigma^2/2", m.lambda() - s2 / 2.0);
        if (exists.relation != Relation::Less && h6) {
            const auto shape_c = Condition::of("lambda - sigma^2", m.lambda() - s2);
            const auto shape =
                shape_from(shape_c, DensityShape::DivergentAtBoundary, DensityShape::PeakedInterior);
            const auto fa = m.is_pitchfork_family() ? FirstApproximation::Stable : FirstApproximation::Unknown;
            std::string note = exists.text() + "; shape by " + shape_c.text();
            if (exists.relation == Relation::Equal) {
                note += "; equality case: p0 ~ x^{-1} at 0, normalization diverges";
            }
            out.push_back(half_line_density(false, shape, fa, note));
            out.push_back(half_line_density(true, shape, fa, note));
        }
    } else if (al > 1.0) {
        const auto exists = Condition::of("lambda", m.lambda());
        if (exists.relation == Relation::Greater && h6) {
            const auto fa = (m.is_pitchfork_family() && al == 2.0) ? FirstApproximation::Stable
                                                                   : FirstApproximation::Unknown;
            const std::string note = exists.text() + "; density vanishes at 0";
            out.push_back(half_line_density(false, DensityShape::PeakedInterior, fa, note));
            out.push_back(half_line_density(true, DensityShape::PeakedInterior, fa, note));
        }
    }
    return out;
}

QsdVerdict classify_qsd(const ModelSpec& m) {
    if (m.kind() == ModelKind::SaddleNode) {
        return {Qsd::NotApplicable,
                "saddle-node: absorption at +-sqrt(a) competes with blow-up; no QSD result available"};
    }
    const double al = m.alpha();
    if (al >= 1.0) return {Qsd::NotApplicable, "alpha = " + num(al) + " >= 1: no absorption"};
    if (m.sigma() == 0.0) return {Qsd::NotApplicable, "sigma = 0: no absorption"};
    if (!(m.nu() > 0.0)) return {Qsd::NotApplicable, "nu = " + num(m.nu()) + " <= 0: outside the QSD hypotheses"};
    if (al < 0.75) {
        if (!check_assumptions(m).all_satisfied()) {
            return {Qsd::NotApplicable, "H1-H6 not all satisfied"};
        }
        return {Qsd::Exists, "nu > 0, H1-H6 hold and alpha = " + num(al) + " in [1/2, 3/4)"};
    }
    return {Qsd::NumericallyAbsent,
            "alpha = " + num(al) + " in [3/4, 1): no QSD observed numerically (not a theorem)"};
}

RegimeReport classify_saddle_node(double a, double sigma, double alpha) {
    if (!(sigma > 0.0)) throw AnalyticRefusal("classify_saddle_node: deterministic system (sigma = 0)");
    const auto model = ModelSpec::saddle_node(a, sigma, alpha);
    RegimeReport r{model, check_assumptions(model), classify_existence(model), {}, {}, {}, {}};

    const double s2 = sigma * sigma;
    const double root = a > 0.0 ? std::sqrt(a) : 0.0;

    // Per-point stability. Around +-sqrt(a) the local linear rate is -+2 sqrt(a).
    if (a > 0.0) {
        StabilityVerdict lower{-root, Stability::Boundary, {}};
        StabilityVerdict upper{root, Stability::Boundary, {}};
        if (alpha < 1.0) {
            lower.condition = upper.condition = Condition::of("alpha - 1", alpha - 1.0);
            lower.status = upper.status = Stability::AsymptoticallyStableInProbability;
        } else if (alpha == 1.0) {
            // local rate r, local noise 2 sigma sqrt(a): stable iff r < (2 sigma sqrt(a))^2 / 2
            upper.condition = Condition::of("-2 sqrt(a) - 2 sigma^2 a", -2.0 * root - 2.0 * s2 * a);
            upper.status = Stability::AsymptoticallyStableInProbability;
            lower.condition = Condition::of("a - sigma^-4", a - 1.0 / (s2 * s2));
            switch (lower.condition.relation) {
                case Relation::Greater: lower.status = Stability::AsymptoticallyStableInProbability; break;
                case Relation::Less: lower.status = Stability::UnstableInProbability; break;
                case Relation::Equal: lower.status = Stability::Boundary; break;
            }
        } else {
            upper.condition = Condition::of("-2 sqrt(a)", -2.0 * root);
            upper.status = Stability::StableInProbability;
            lower.condition = Condition::of("2 sqrt(a)", 2.0 * root);
            lower.status = Stability::UnstableInProbability;
        }
        r.points = {lower, upper};
    } else if (a == 0.0) {
        r.points = {StabilityVerdict{0.0, Stability::Boundary, Condition::of("a", 0.0)}};
    }

    // Absorption (first hitting of a root from (-sqrt(a), sqrt(a))).
    if (a > 0.0 && alpha < 1.0) {
        r.absorption = {Absorption::AlmostSurelyFinite,
                        "alpha = " + num(alpha) +
                            " < 1: exit of (-sqrt(a), sqrt(a)) in finite time a.s.; absorption from "
                            "(sqrt(a), inf) is not established"};
    } else if (a > 0.0) {
        r.absorption = {Absorption::Never, "alpha = " + num(alpha) + " >= 1: the roots are never reached"};
    } else if (a < 0.0) {
        r.absorption = {Absorption::Never, "a < 0: no singular point"};
    } else if (alpha < 1.0) {
        r.absorption = {Absorption::Unknown, "a = 0: degenerate fold point"};
    } else {
        r.absorption = {Absorption::Never, "a = 0 and alpha >= 1: the fold point is never reached"};
    }

    // Stationary catalog.
    for (double p : singular_points(model)) r.stationary.push_back(dirac(p));
    if (alpha == 1.0 && a > 0.0) {
        const auto exists = Condition::of("sigma^-4 - a", 1.0 / (s2 * s2) - a);
        if (exists.relation == Relation::Greater) {
            const auto shape_c = Condition::of("1/2 - sigma^2 sqrt(a)", 0.5 - s2 * root);
            StationaryEntry e;
            e.form = StationaryForm::HomogeneousDensity;
            e.support = Interval{-kInf, -root};
            e.shape = shape_from(shape_c, DensityShape::DivergentAtBoundary, DensityShape::PeakedInterior);
            e.first_approximation = FirstApproximation::Stable;
            e.note = exists.text() + "; P-bifurcation by " + shape_c.text();
            r.stationary.push_back(e);
        }
    } else if (alpha == 1.0 && a < 0.0) {
        StationaryEntry e;
        e.form = StationaryForm::HomogeneousDensity;
        e.support = Interval{-kInf, kInf};
        e.shape = DensityShape::PeakedInterior;
        e.note = "a < 0: unique density on the real line, mode at -1/(2 sigma^2)";
        r.stationary.push_back(e);
    }

    r.qsd = classify_qsd(model);
    return r;
}

RegimeReport classify(const ModelSpec& m) {
    if (m.kind() == ModelKind::SaddleNode) return classify_saddle_node(m.a(), m.sigma(), m.alpha());
    RegimeReport r{m,
                   check_assumptions(m),
                   classify_existence(m),
                   classify_absorption(m),
                   {classify_delta0(m)},
                   classify_stationary(m),
                   classify_qsd(m)};
    return r;
}

std::string to_string(const Interval& iv) {
    auto end = [](double v) {
        if (v == kInf) return std::string("inf");
        if (v == -kInf) return std::string("-inf");
        return num(v);
    };
    return "(" + end(iv.lo) + ", " + end(iv.hi) + ")";
}

}  // namespace hsde
