#pragma once

#include "hsde/model.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hsde {

struct SimConfig {
    double dt = 0.01;
    double horizon = 10.0;
    std::int64_t n_particles = 100000;
    std::uint64_t master_seed = 1;
    double blowup_threshold = 1e6;
    std::vector<double> snapshot_times;
    int histogram_bins = 50;
    double histogram_lo = 0.0;
    double histogram_hi = 2.0;
    int threads = 1;

    /// SaddleNode only: a path that enters and stays within `converge_radius`
    /// of a root for `converge_hold` time units is labeled by that root.
    bool convergence_rule = false;
    double converge_radius = 1e-3;
    double converge_hold = 10.0;

    /// Throws InvalidInput naming the offending field.
    void validate() const;
};

/// Terminal state. For SaddleNode with a > 0, ExitLeft means -sqrt(a) was
/// reached (or converged to) and ExitRight means +sqrt(a).
enum class PathLabel { AbsorbedAtZero, ExitLeft, ExitRight, BlownUp, Alive };
std::string_view to_string(PathLabel l);

struct PathResult {
    PathLabel label = PathLabel::Alive;
    double time = 0.0;      // absorption / exit / blow-up time; horizon when Alive
    double final_x = 0.0;
    double min_distance = 0.0;  // min over the path of the distance to the nearest singular point
    std::vector<double> snapshots;  // state at each snapshot time (terminal value once stopped)
    std::vector<bool> alive_at;     // survivor flag at each snapshot time
    std::string diagnostic;
};

/// One Euler-Maruyama path; normals come from NormalStream(master_seed, particle_index).
PathResult euler_maruyama_path(const ModelSpec& model, double x0, const SimConfig& cfg, std::uint64_t particle_index);

struct Histogram {
    double time = 0.0;
    std::int64_t survivors = 0;
    std::vector<double> edges;  // bins + 1 edges
    std::vector<std::int64_t> counts;
    std::vector<double> mass;   // counts / survivors; out-of-range values fall in the edge bins
    double median = 0.0;        // NaN without survivors
};

struct EnsembleStats {
    std::vector<Histogram> histograms;
    std::vector<PathLabel> labels;
    std::vector<double> times;            // per particle, see PathResult::time
    std::vector<double> min_distance;     // per particle
    std::vector<double> absorption_times; // absorbed particles only, in particle order
    std::int64_t count(PathLabel l) const;
    double absorbed_fraction() const;
};

/// Per-particle initial values; size 1 broadcasts.
EnsembleStats ensemble_run(const ModelSpec& model, const std::vector<double>& x0, const SimConfig& cfg);

struct AbsorptionEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::int64_t absorbed = 0;
    double censored_fraction = 0.0;
    bool biased_low = false;  // censored fraction above one half
    double x0 = 0.0;
};

/// Mean absorption time; x0 defaults to the noiseless fixed point (lambda/mu)^{1/kappa}.
AbsorptionEstimate mean_absorption_time(const ModelSpec& model, const SimConfig& cfg, double x0 = -1.0);

struct ExitFrequency {
    double x0 = 0.0;
    std::int64_t n = 0;
    std::int64_t right = 0, left = 0, unresolved = 0;
    double freq_right = 0.0;  // right / (right + left)
    double stderr_ = 0.0;     // binomial
};

/// SaddleNode a > 0: frequency of reaching +sqrt(a) first per initial point.
/// For alpha >= 1 the convergence rule is enabled.
std::vector<ExitFrequency> exit_frequencies(const ModelSpec& model, const std::vector<double>& x0_grid,
                                            SimConfig cfg);

}  // namespace hsde
