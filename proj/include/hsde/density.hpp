#pragma once

#include "hsde/classify.hpp"
#include "hsde/interval.hpp"
#include "hsde/model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hsde {

enum class ModeKind { Interior, DivergesAtBoundary, AtBoundary };
std::string_view to_string(ModeKind k);

struct ModeInfo {
    ModeKind kind = ModeKind::Interior;
    double location = 0.0;  // interior maximiser, or the boundary point
};

/// Support of the density entry granted by classify_stationary that contains x.
/// Throws AnalyticRefusal when none does.
Interval density_support(const ModelSpec& model, double x);

/// Homogeneous (K = 0) solution of the stationary Kolmogorov equation.
/// SaddleNode at alpha = 1 uses the closed forms; everything else the
/// generic gamma^-2 exp(int 2 f / gamma^2) with reference +1 / -1 / 0.
double stationary_density_unnormalized(const ModelSpec& model, double x);

/// The generic exponential form on `support`, reference point as above.
double stationary_density_generic(const ModelSpec& model, const Interval& support, double x);

/// Z with Z * int_support q0 = 1. Throws AnalyticRefusal when the
/// classifier grants no density on support or q0 is not integrable.
double normalize_density(const ModelSpec& model, const Interval& support);

/// First and second moments of the normalized density.
struct Moments {
    double mean = 0.0;
    double second = 0.0;
};
Moments density_moments(const ModelSpec& model, const Interval& support);

/// Root of sigma^2 alpha - lambda X^{2-2alpha} + X^{4-2alpha} = 0 (lambda > 0, alpha > 1).
double pitchfork_mode(double lambda, double sigma, double alpha);

/// Saddle-node (alpha = 1) closed forms; require 0 < a < sigma^-4.
double saddle_node_phi(double a, double sigma);
double saddle_node_Z(double a, double sigma);
Moments saddle_node_moments(double a, double sigma);
ModeInfo saddle_node_mode(double a, double sigma);
double lyapunov_exponent_sn(double a, double sigma);

struct Threshold {
    std::string parameter;
    double value = 0.0;
    std::string description;
};
std::vector<Threshold> p_bifurcation_points(const ModelSpec& model);

/// Particular solution p_K of the stationary equation with flux K on `support`:
/// gamma^-2 e^{2G} [gamma(x1)^2 q0(x1) ... ] anchored at the reference point x1.
double particular_solution(const ModelSpec& model, const Interval& support, double K, double x);

/// Mode of the density on support (closed forms where known, numerical otherwise).
ModeInfo density_mode(const ModelSpec& model, const Interval& support);

struct DensityProfile {
    Interval support;
    double Z = 0.0;
    std::vector<double> grid, unnormalized, density;
    ModeInfo mode;
    double mean = 0.0;
    double second_moment = 0.0;
    DensityShape shape = DensityShape::PeakedInterior;
    std::optional<double> lyapunov;
    std::vector<Threshold> thresholds;
};

DensityProfile density_profile(const ModelSpec& model, const Interval& support, const std::vector<double>& grid);

}  // namespace hsde
