#include "hsde/sim.hpp"

#include "hsde/classify.hpp"
#include "hsde/error.hpp"
#include "hsde/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace hsde {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Fast paths for the named kinds; the generic evaluators handle the rest.
struct Coefficients {
    const ModelSpec& m;
    double lambda, sigma, alpha, a;
    bool pitch, saddle;

    explicit Coefficients(const ModelSpec& model)
        : m(model),
          lambda(model.lambda()),
          sigma(model.sigma()),
          alpha(model.alpha()),
          a(model.a()),
          pitch(model.is_pitchfork_family()),
          saddle(model.kind() == ModelKind::SaddleNode) {}

    double power(double u) const {
        if (alpha == 1.0) return u;
        if (alpha == 0.5) return std::sqrt(u);
        if (alpha == 2.0) return u * u;
        return std::pow(u, alpha);
    }
    double drift(double x) const {
        if (pitch) return lambda * x - x * x * x;
        if (saddle) return a - x * x;
        return drift_eval(m, x);
    }
    double diffusion(double x) const {
        if (sigma == 0.0) return 0.0;
        if (pitch) return sigma * power(std::fabs(x));
        if (saddle) return sigma * power(std::fabs(x * x - a));
        return diffusion_eval(m, x);
    }
};

// Barrier the path is stopped at, and the label it earns.
struct Barrier {
    double at;
    int side;  // +1: stop when x >= at, -1: stop when x <= at
    PathLabel label;
};

std::vector<Barrier> barriers_for(const ModelSpec& m, double x0) {
    std::vector<Barrier> b;
    if (m.kind() == ModelKind::SaddleNode) {
        if (m.a() > 0.0) {
            const double r = std::sqrt(m.a());
            if (x0 > r) {
                b.push_back({r, -1, PathLabel::ExitRight});
            } else if (x0 < -r) {
                b.push_back({-r, 1, PathLabel::ExitLeft});
            } else {
                b.push_back({-r, -1, PathLabel::ExitLeft});
                b.push_back({r, 1, PathLabel::ExitRight});
            }
        } else if (m.a() == 0.0) {
            b.push_back({0.0, x0 > 0.0 ? -1 : 1, PathLabel::AbsorbedAtZero});
        }
        return b;
    }
    b.push_back({0.0, x0 > 0.0 ? -1 : 1, PathLabel::AbsorbedAtZero});
    return b;
}

}  // namespace

void SimConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("sim.dt: must be > 0");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidInput("sim.horizon: must be > 0");
    if (dt > horizon) throw InvalidInput("sim.dt: must not exceed sim.horizon");
    if (n_particles < 1) throw InvalidInput("sim.n_particles: must be >= 1");
    if (!(blowup_threshold > 0.0)) throw InvalidInput("sim.blowup_threshold: must be > 0");
    for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
        const double t = snapshot_times[i];
        if (!(t >= 0.0 && t <= horizon)) throw InvalidInput("sim.snapshot_times: values must lie in [0, horizon]");
        if (i > 0 && !(t >= snapshot_times[i - 1])) throw InvalidInput("sim.snapshot_times: must be sorted");
    }
    if (histogram_bins < 1) throw InvalidInput("sim.histogram_bins: must be >= 1");
    if (!(histogram_lo < histogram_hi)) throw InvalidInput("sim.histogram_range: need lo < hi");
    if (threads < 1) throw InvalidInput("sim.threads: must be >= 1");
    if (convergence_rule && (!(converge_radius > 0.0) || !(converge_hold >= 0.0))) {
        throw InvalidInput("sim.convergence: radius must be > 0 and hold >= 0");
    }
}

std::string_view to_string(PathLabel l) {
    switch (l) {
        case PathLabel::AbsorbedAtZero: return "AbsorbedAtZero";
        case PathLabel::ExitLeft: return "ExitLeft";
        case PathLabel::ExitRight: return "ExitRight";
        case PathLabel::BlownUp: return "BlownUp";
        case PathLabel::Alive: return "Alive";
    }
    return "?";
}

PathResult euler_maruyama_path(const ModelSpec& model, double x0, const SimConfig& cfg, std::uint64_t particle_index) {
    if (!std::isfinite(x0)) throw InvalidInput("sim.x0: must be finite");
    const Coefficients co(model);
    const auto barriers = barriers_for(model, x0);
    const std::int64_t n_steps = std::llround(cfg.horizon / cfg.dt);
    const std::size_t n_snap = cfg.snapshot_times.size();
    std::vector<std::int64_t> snap_step(n_snap);
    for (std::size_t j = 0; j < n_snap; ++j) snap_step[j] = std::llround(cfg.snapshot_times[j] / cfg.dt);

    PathResult res;
    res.snapshots.assign(n_snap, kNaN);
    res.alive_at.assign(n_snap, false);
    std::size_t next_snap = 0;

    auto distance = [&](double x) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& b : barriers) d = std::min(d, std::fabs(x - b.at));
        return d;
    };
    auto finish = [&](PathLabel label, double t, double x) {
        res.label = label;
        res.time = t;
        res.final_x = x;
        for (; next_snap < n_snap; ++next_snap) res.snapshots[next_snap] = x;
        return res;
    };

    double x = x0;
    res.min_distance = distance(x);
    for (const auto& b : barriers) {
        if (b.side * (x - b.at) >= 0.0) return finish(b.label, 0.0, b.at);
    }

    const double sqdt = std::sqrt(cfg.dt);
    const double r = model.kind() == ModelKind::SaddleNode && model.a() > 0.0 ? std::sqrt(model.a()) : 0.0;
    const bool converge = cfg.convergence_rule && r > 0.0;
    int near = 0;  // +1 / -1 while inside the ball around +r / -r
    double enter_t = 0.0;
    NormalStream noise(cfg.master_seed, particle_index);

    for (std::int64_t n = 0; n < n_steps; ++n) {
        while (next_snap < n_snap && snap_step[next_snap] == n) {
            res.snapshots[next_snap] = x;
            res.alive_at[next_snap] = true;
            ++next_snap;
        }
        const double t = static_cast<double>(n) * cfg.dt;
        const double g = co.diffusion(x);
        double xn = x + co.drift(x) * cfg.dt;
        if (g != 0.0) xn += g * sqdt * noise.at(static_cast<std::uint64_t>(n));
        const double tn = static_cast<double>(n + 1) * cfg.dt;

        for (const auto& b : barriers) {
            if (b.side * (xn - b.at) >= 0.0) {
                const double frac = (x - b.at) / (x - xn);
                res.min_distance = 0.0;
                return finish(b.label, t + cfg.dt * std::clamp(frac, 0.0, 1.0), b.at);
            }
        }
        if (!std::isfinite(xn) || std::fabs(xn) > cfg.blowup_threshold) {
            if (!std::isfinite(xn)) res.diagnostic = "non-finite state after step " + std::to_string(n + 1);
            return finish(PathLabel::BlownUp, tn, xn);
        }
        x = xn;
        res.min_distance = std::min(res.min_distance, distance(x));

        if (converge) {
            const int in = std::fabs(x - r) < cfg.converge_radius ? 1 : (std::fabs(x + r) < cfg.converge_radius ? -1 : 0);
            if (in != near) {
                near = in;
                enter_t = tn;
            }
            if (near != 0 && tn - enter_t >= cfg.converge_hold) {
                return finish(near > 0 ? PathLabel::ExitRight : PathLabel::ExitLeft, enter_t, x);
            }
        }
    }
    while (next_snap < n_snap && snap_step[next_snap] == n_steps) {
        res.snapshots[next_snap] = x;
        res.alive_at[next_snap] = true;
        ++next_snap;
    }
    return finish(PathLabel::Alive, static_cast<double>(n_steps) * cfg.dt, x);
}

std::int64_t EnsembleStats::count(PathLabel l) const {
    return static_cast<std::int64_t>(std::count(labels.begin(), labels.end(), l));
}

double EnsembleStats::absorbed_fraction() const {
    if (labels.empty()) return 0.0;
    return static_cast<double>(absorption_times.size()) / static_cast<double>(labels.size());
}

EnsembleStats ensemble_run(const ModelSpec& model, const std::vector<double>& x0, const SimConfig& cfg) {
    cfg.validate();
    const auto n = static_cast<std::size_t>(cfg.n_particles);
    if (x0.size() != 1 && x0.size() != n) throw InvalidInput("sim.x0: need one value or one per particle");

    std::vector<PathResult> paths(n);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            paths[i] = euler_maruyama_path(model, x0.size() == 1 ? x0[0] : x0[i], cfg, i);
        }
    };
    const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), n);
    if (nt <= 1) {
        work(0, n);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + nt - 1) / nt;
        for (std::size_t k = 0; k < nt; ++k) {
            const std::size_t b = k * chunk, e = std::min(n, b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
        for (auto& th : pool) th.join();
    }

    EnsembleStats st;
    st.labels.reserve(n);
    st.times.reserve(n);
    st.min_distance.reserve(n);
    for (const auto& p : paths) {
        st.labels.push_back(p.label);
        st.times.push_back(p.time);
        st.min_distance.push_back(p.min_distance);
        if (p.label == PathLabel::AbsorbedAtZero || p.label == PathLabel::ExitLeft || p.label == PathLabel::ExitRight) {
            st.absorption_times.push_back(p.time);
        }
    }

    const int bins = cfg.histogram_bins;
    const double lo = cfg.histogram_lo, hi = cfg.histogram_hi;
    const double width = (hi - lo) / bins;
    for (std::size_t j = 0; j < cfg.snapshot_times.size(); ++j) {
        Histogram h;
        h.time = cfg.snapshot_times[j];
        h.counts.assign(static_cast<std::size_t>(bins), 0);
        for (int b = 0; b <= bins; ++b) h.edges.push_back(b == bins ? hi : lo + b * width);
        std::vector<double> vals;
        for (const auto& p : paths) {
            if (!p.alive_at[j]) continue;
            const double v = p.snapshots[j];
            vals.push_back(v);
            const int b = std::clamp(static_cast<int>(std::floor((v - lo) / width)), 0, bins - 1);
            ++h.counts[static_cast<std::size_t>(b)];
        }
        h.survivors = static_cast<std::int64_t>(vals.size());
        h.mass.resize(h.counts.size());
        for (std::size_t b = 0; b < h.counts.size(); ++b) {
            h.mass[b] = h.survivors > 0 ? static_cast<double>(h.counts[b]) / static_cast<double>(h.survivors) : 0.0;
        }
        if (vals.empty()) {
            h.median = kNaN;
        } else {
            const std::size_t mid = vals.size() / 2;
            std::nth_element(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(mid), vals.end());
            double med = vals[mid];
            if (vals.size() % 2 == 0) med = 0.5 * (med + *std::max_element(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(mid)));
            h.median = med;
        }
        st.histograms.push_back(std::move(h));
    }
    return st;
}

AbsorptionEstimate mean_absorption_time(const ModelSpec& model, const SimConfig& cfg, double x0) {
    const auto verdict = classify_absorption(model);
    if (verdict.absorption != Absorption::AlmostSurelyFinite) {
        throw AnalyticRefusal("mean_absorption_time: absorption is not almost surely finite (" + verdict.condition +
                              ")");
    }
    if (x0 < 0.0) {
        const double mu = model.mu();
        if (!(model.lambda() > 0.0 && mu < 0.0)) {
            throw InvalidInput("sim.x0: no positive noiseless fixed point; give x0 explicitly");
        }
        x0 = std::pow(model.lambda() / -mu, 1.0 / model.kappa());
    }
    const EnsembleStats st = ensemble_run(model, {x0}, cfg);
    AbsorptionEstimate e;
    e.x0 = x0;
    e.absorbed = static_cast<std::int64_t>(st.absorption_times.size());
    const double n = static_cast<double>(st.labels.size());
    e.censored_fraction = 1.0 - static_cast<double>(e.absorbed) / n;
    e.biased_low = e.censored_fraction > 0.5;
    if (e.absorbed == 0) {
        e.mean = kNaN;
        e.stderr_ = kNaN;
        return e;
    }
    double s = 0.0;
    for (double t : st.absorption_times) s += t;
    e.mean = s / static_cast<double>(e.absorbed);
    double ss = 0.0;
    for (double t : st.absorption_times) ss += (t - e.mean) * (t - e.mean);
    const double k = static_cast<double>(e.absorbed);
    e.stderr_ = e.absorbed > 1 ? std::sqrt(ss / (k - 1.0)) / std::sqrt(k) : kNaN;
    return e;
}

std::vector<ExitFrequency> exit_frequencies(const ModelSpec& model, const std::vector<double>& x0_grid,
                                            SimConfig cfg) {
    if (model.kind() != ModelKind::SaddleNode || !(model.a() > 0.0)) {
        throw InvalidInput("exit_frequencies: requires a SaddleNode model with a > 0");
    }
    const double r = std::sqrt(model.a());
    if (model.alpha() >= 1.0) cfg.convergence_rule = true;
    std::vector<ExitFrequency> out;
    std::uint64_t base = cfg.master_seed;
    for (std::size_t i = 0; i < x0_grid.size(); ++i) {
        const double x0 = x0_grid[i];
        if (!(x0 > -r && x0 < r)) throw InvalidInput("exit_frequencies: x0 must lie in (-sqrt(a), sqrt(a))");
        cfg.master_seed = base + i;
        const EnsembleStats st = ensemble_run(model, {x0}, cfg);
        ExitFrequency f;
        f.x0 = x0;
        f.n = static_cast<std::int64_t>(st.labels.size());
        f.right = st.count(PathLabel::ExitRight);
        f.left = st.count(PathLabel::ExitLeft);
        f.unresolved = f.n - f.right - f.left;
        const double resolved = static_cast<double>(f.right + f.left);
        if (resolved > 0.0) {
            f.freq_right = static_cast<double>(f.right) / resolved;
            f.stderr_ = std::sqrt(f.freq_right * (1.0 - f.freq_right) / resolved);
        } else {
            f.freq_right = kNaN;
            f.stderr_ = kNaN;
        }
        out.push_back(f);
    }
    return out;
}

}  // namespace hsde
