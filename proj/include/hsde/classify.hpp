#pragma once

#include "hsde/interval.hpp"
#include "hsde/model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hsde {

// Analytic regime classification. Every verdict carries the inequality that
// decided it.

enum class Existence { UniqueStrong, NonUnique };
enum class Blowup { Never, AlmostSurelyFiniteTime, Unknown };
enum class Absorption { AlmostSurelyFinite, Never, Unknown };
enum class Stability {
    AsymptoticallyStableInProbability,
    StableInProbability,
    AlmostSurelyExponentiallyStable,
    UnstableInProbability,
    Boundary
};
enum class Qsd { Exists, NumericallyAbsent, NotApplicable };
enum class StationaryForm { DiracAtPoint, HomogeneousDensity };
enum class DensityShape { PeakedInterior, DivergentAtBoundary, Boundary };
enum class FirstApproximation { Stable, Unknown };
enum class Relation { Less, Equal, Greater };

std::string_view to_string(Existence v);
std::string_view to_string(Blowup v);
std::string_view to_string(Absorption v);
std::string_view to_string(Stability v);
std::string_view to_string(Qsd v);
std::string_view to_string(StationaryForm v);
std::string_view to_string(DensityShape v);
std::string_view to_string(FirstApproximation v);
std::string_view to_string(Relation v);

/// `expression` compared with zero: margin = value of the expression.
struct Condition {
    std::string expression;
    double margin = 0.0;
    Relation relation = Relation::Equal;

    static Condition of(std::string expression, double margin);
    std::string text() const;
};

struct StabilityVerdict {
    double point = 0.0;
    Stability status = Stability::Boundary;
    Condition condition;
};

struct StationaryEntry {
    StationaryForm form = StationaryForm::DiracAtPoint;
    Interval support;
    double point = 0.0;  // Dirac location (DiracAtPoint only)
    std::optional<DensityShape> shape;
    FirstApproximation first_approximation = FirstApproximation::Unknown;
    std::string note;
};

struct ExistenceVerdict {
    Existence existence = Existence::UniqueStrong;
    Blowup blowup = Blowup::Unknown;
    std::string note;
};

struct AbsorptionVerdict {
    Absorption absorption = Absorption::Unknown;
    std::string condition;
};

struct QsdVerdict {
    Qsd qsd = Qsd::NotApplicable;
    std::string condition;
};

struct RegimeReport {
    ModelSpec model;
    AssumptionReport assumptions;
    ExistenceVerdict existence;
    AbsorptionVerdict absorption;
    std::vector<StabilityVerdict> points;
    std::vector<StationaryEntry> stationary;
    QsdVerdict qsd;
};

ExistenceVerdict classify_existence(const ModelSpec& model);

/// Stability of the Dirac mass at 0. Throws AnalyticRefusal when sigma = 0
/// and InvalidInput for kinds without a singular point at 0.
StabilityVerdict classify_delta0(const ModelSpec& model);

AbsorptionVerdict classify_absorption(const ModelSpec& model);
std::vector<StationaryEntry> classify_stationary(const ModelSpec& model);
QsdVerdict classify_qsd(const ModelSpec& model);

/// Full report for dX = (-X^2 + a) dt + sigma |X^2 - a|^alpha dW.
RegimeReport classify_saddle_node(double a, double sigma, double alpha);

/// Full report for any model kind (delegates to classify_saddle_node for SaddleNode).
RegimeReport classify(const ModelSpec& model);

}  // namespace hsde
