// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance               run every criterion
//   acceptance --criterion N run criterion N only (exit status 1 on FAIL)

#include "hsde/classify.hpp"
#include "hsde/density.hpp"
#include "hsde/error.hpp"
#include "hsde/ldp.hpp"
#include "hsde/model.hpp"
#include "hsde/quadrature.hpp"
#include "hsde/serialize.hpp"
#include "hsde/sim.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace hsde;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// ---- criterion 1 ---------------------------------------------------------

struct ExpectedRow {
    std::string delta0;
    std::string absorption;
    std::string stationary;
    std::string qsd;
};

// Verdicts read straight off the theorems for dx = (lambda x - x^3) dt + sigma |x|^alpha dW.
ExpectedRow expected_pitchfork(double alpha, double lambda, double sigma) {
    ExpectedRow e;
    const double half_s2 = sigma * sigma / 2.0;
    if (alpha < 1.0) {
        e.delta0 = "AsymptoticallyStableInProbability";
    } else if (alpha == 1.0) {
        if (lambda < half_s2) e.delta0 = "AlmostSurelyExponentiallyStable";
        else if (lambda > half_s2) e.delta0 = "UnstableInProbability";
        else e.delta0 = "Boundary";
    } else {
        e.delta0 = lambda < 0.0 ? "StableInProbability" : "UnstableInProbability";
    }

    e.absorption = alpha < 1.0 ? "AlmostSurelyFinite" : "Never";

    const bool densities = (alpha == 1.0 && lambda >= half_s2) || (alpha > 1.0 && lambda > 0.0);
    e.stationary = densities ? "Density(-inf,0) Density(0,inf) Dirac(0)" : "Dirac(0)";

    if (alpha < 0.75) e.qsd = "Exists";
    else if (alpha < 1.0) e.qsd = "NumericallyAbsent";
    else e.qsd = "NotApplicable";
    return e;
}

std::string stationary_text(const std::vector<StationaryEntry>& entries) {
    std::vector<std::string> parts;
    for (const auto& s : entries) {
        if (s.form == StationaryForm::DiracAtPoint) {
            parts.push_back("Dirac(" + format_double(s.point) + ")");
        } else {
            parts.push_back("Density(" + format_double(s.support.lo) + "," + format_double(s.support.hi) + ")");
        }
    }
    std::sort(parts.begin(), parts.end());
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : " ") + p;
    return out;
}

Outcome criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    int rows = 0, mismatches = 0;
    std::string first;
    for (double alpha : {0.5, 0.6, 0.75, 0.85, 1.0, 1.2, 1.5, 2.0, 3.0}) {
        for (double lambda : {-1.0, 0.3, 0.5, 0.7, 2.0}) {
            for (double sigma : {0.5, 1.0}) {
                const auto m = ModelSpec::pitchfork(lambda, sigma, alpha);
                const auto want = expected_pitchfork(alpha, lambda, sigma);
                const ExpectedRow got{std::string(to_string(classify_delta0(m).status)),
                                      std::string(to_string(classify_absorption(m).absorption)),
                                      stationary_text(classify_stationary(m)),
                                      std::string(to_string(classify_qsd(m).qsd))};
                ++rows;
                const bool same = got.delta0 == want.delta0 && got.absorption == want.absorption &&
                                  got.stationary == want.stationary && got.qsd == want.qsd;
                if (!same) {
                    ++mismatches;
                    if (first.empty()) {
                        first = " first mismatch at alpha=" + fmt(alpha) + " lambda=" + fmt(lambda) +
                                " sigma=" + fmt(sigma) + ": got [" + got.delta0 + ", " + got.absorption + ", " +
                                got.stationary + ", " + got.qsd + "] want [" + want.delta0 + ", " +
                                want.absorption + ", " + want.stationary + ", " + want.qsd + "]";
                    }
                }
            }
        }
    }
    const double secs = seconds_since(t0);
    return {mismatches == 0 && secs < 1.0, std::to_string(rows) + " rows, " + std::to_string(mismatches) +
                                               " mismatches, " + fmt(secs) + " s" + first};
}

// ---- criterion 2 ---------------------------------------------------------

Outcome criterion2() {
    const double a = 0.4, sigma = 0.8;
    const double s2 = sigma * sigma;
    const double phi = 1.0 / (s2 * std::sqrt(a));
    const double z_closed = 4.0 * std::pow(a, 1.5) * phi * (phi * phi - 1.0);
    const double m_closed = -1.0 / s2;
    const double s_closed = (2.0 * phi * phi - 1.0) * a;

    const auto model = ModelSpec::saddle_node(a, sigma, 1.0);
    const Interval support{-kInf, -std::sqrt(a)};
    const double z = normalize_density(model, support);
    const auto mom = density_moments(model, support);

    const double lyap = 2.0 * (s2 * s2 * a - 1.0) / s2;
    const double lyap_moments = -2.0 * mom.mean - 2.0 * s2 * mom.second;

    const double ez = rel_err(z, z_closed), em = rel_err(mom.mean, m_closed), es = rel_err(mom.second, s_closed);
    const double el = std::abs(lyap - lyap_moments);
    const bool pass = ez < 1e-6 && em < 1e-6 && es < 1e-6 && el < 1e-9 && std::abs(m_closed + 1.5625) < 1e-12;
    return {pass, "Z " + fmt(z) + " (rel " + fmt(ez) + "), m " + fmt(mom.mean) + " (rel " + fmt(em) + "), s " +
                      fmt(mom.second) + " (rel " + fmt(es) + "), lyapunov " + fmt(lyap) + " (abs " + fmt(el) + ")"};
}

// ---- criterion 3 ---------------------------------------------------------

Outcome criterion3() {
    const double x15 = 0.5;                                          // X^2 + 1.5 X - 1 = 0
    const double x2 = 1.0 / std::sqrt(3.0);                          // 3 X^2 - 1 = 0
    const double x3 = std::sqrt((std::sqrt(13.0) - 1.0) / 6.0);      // 3 X^4 + X^2 - 1 = 0
    const double e15 = std::abs(pitchfork_mode(1.0, 1.0, 1.5) - x15);
    const double e2 = std::abs(pitchfork_mode(1.0, 1.0, 2.0) - x2);
    const double e3 = std::abs(pitchfork_mode(1.0, 1.0, 3.0) - x3);
    bool pass = e15 < 1e-10 && e2 < 1e-10 && e3 < 1e-10;
    pass = pass && std::abs(x2 - 0.577350) < 1e-6 && std::abs(x3 - 0.658983) < 1e-6;

    // Small lambda: X ~ (lambda / (sigma^2 alpha))^{1/(2 alpha - 2)} for alpha < 2, X ~ sqrt(lambda / 3) at 2.
    std::string scaling;
    for (double alpha : {1.5, 2.0, 3.0}) {
        const double lam = 1e-6;
        const double exponent = alpha < 2.0 ? 1.0 / (2.0 * alpha - 2.0) : 0.5;
        const double fitted =
            std::log(pitchfork_mode(lam, 1.0, alpha) / pitchfork_mode(lam / 10.0, 1.0, alpha)) / std::log(10.0);
        const double e = rel_err(fitted, exponent);
        pass = pass && e < 0.01;
        scaling += " exponent(alpha=" + fmt(alpha) + ") " + fmt(fitted) + " vs " + fmt(exponent);
    }
    return {pass, "mode errors " + fmt(e15) + ", " + fmt(e2) + ", " + fmt(e3) + ";" + scaling};
}

// ---- criterion 4 ---------------------------------------------------------

Outcome criterion4() {
    const double closed = quasipotential_at_zero(1.0, 1.0, 2.0, 0.5);
    const double quad = quasipotential(1.0, 1.0, 2.0, 0.5, 0.0);
    // int_0^1 (u - u^3) / u du = 2/3
    const double want = 2.0 / 3.0;
    const double alpha = 0.999;
    const double lambda = 3.0 * (1.0 - alpha);
    const double u0 = quasipotential_at_zero(lambda, 1.0, 2.0, alpha);
    const double dev = rel_err(u0, 1.5);
    const bool pass = std::abs(closed - quad) < 1e-10 && std::abs(closed - want) < 1e-10 && dev < 0.01;
    return {pass, "U(0) " + fmt(closed) + ", quadrature diff " + fmt(std::abs(closed - quad)) +
                      "; along lambda = 3(1-alpha) at alpha=0.999 U(0) " + fmt(u0) + " (rel dev from 1.5 " +
                      fmt(dev) + ")"};
}

// ---- criterion 5 ---------------------------------------------------------

// Probability of reaching +1 before -1 for dx = (1 - x^2) dt + 0.5 |x^2 - 1|^{3/4} dW:
// p'(x) = exp(-8 asin x), so with x = sin t, p = int e^{-8t} cos t dt.
double exit_right_probability(double x) {
    const auto F = [](double t) { return std::exp(-8.0 * t) * (std::sin(t) - 8.0 * std::cos(t)) / 65.0; };
    const double lo = F(-M_PI / 2.0), hi = F(M_PI / 2.0);
    return (F(std::asin(x)) - lo) / (hi - lo);
}

Outcome criterion5() {
    const auto model = ModelSpec::saddle_node(1.0, 0.5, 0.75);
    const std::vector<double> grid{-0.99, -0.97, -0.95, -0.92, -0.9, -0.85, -0.8, -0.6, 0.0};
    SimConfig cfg;
    cfg.dt = 0.001;
    cfg.horizon = 1000.0;
    cfg.n_particles = 100000;
    cfg.master_seed = 5;
    const auto freqs = exit_frequencies(model, grid, cfg);
    int within = 0;
    std::string detail;
    for (const auto& f : freqs) {
        const double p = exit_right_probability(f.x0);
        const double n = static_cast<double>(f.right + f.left);
        const double se = std::sqrt(p * (1.0 - p) / n);
        const double z = (f.freq_right - p) / se;
        if (std::abs(z) <= 3.0 && f.unresolved == 0) ++within;
        detail += " x0=" + fmt(f.x0) + ":z=" + fmt(z);
    }
    return {within >= 8, std::to_string(within) + "/9 within 3 SE;" + detail};
}

// ---- criterion 6 and 9 -----------------------------------------------------

SimConfig qsd_config(int threads) {
    SimConfig cfg;
    cfg.dt = 0.01;
    cfg.horizon = 7.0;
    cfg.n_particles = 100000;
    cfg.master_seed = 6;
    cfg.snapshot_times = {2.0, 3.0, 4.0, 5.0, 6.0, 7.0};
    cfg.histogram_bins = 40;
    cfg.histogram_lo = 0.0;
    cfg.histogram_hi = 1.0;
    cfg.threads = threads;
    return cfg;
}

EnsembleStats qsd_run(double alpha, int threads) {
    return ensemble_run(ModelSpec::subcritical_pitchfork(-0.5, 0.5, alpha), {1.0}, qsd_config(threads));
}

double l1(const Histogram& a, const Histogram& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.mass.size(); ++i) s += std::abs(a.mass[i] - b.mass[i]);
    return s;
}

Outcome criterion6() {
    const auto s06 = qsd_run(0.6, 1);
    const auto& h = s06.histograms;
    const double dist = l1(h[h.size() - 2], h.back());
    const bool stable = dist < 0.1 && h.back().survivors > 0;

    const auto s085 = qsd_run(0.85, 1);
    const auto& g = s085.histograms;
    bool decreasing = true;
    std::string medians;
    for (std::size_t i = g.size() - 4; i < g.size(); ++i) {
        medians += " " + fmt(g[i].median);
        if (i > g.size() - 4 && !(g[i].median < g[i - 1].median)) decreasing = false;
    }
    return {stable && decreasing, "alpha=0.6 last L1 " + fmt(dist) + " (" + std::to_string(h.back().survivors) +
                                      " survivors); alpha=0.85 medians" + medians};
}

std::string body(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') continue;
        out += line + '\n';
    }
    return out;
}

Outcome criterion9() {
    bool same = true;
    std::string detail;
    for (double alpha : {0.6, 0.85}) {
        const auto one = qsd_run(alpha, 1);
        const auto three = qsd_run(alpha, 3);
        const bool h = body(histogram_csv(one)) == body(histogram_csv(three));
        const bool t = body(absorption_csv(one)) == body(absorption_csv(three));
        same = same && h && t;
        detail += " alpha=" + fmt(alpha) + ": histograms " + (h ? "identical" : "differ") + ", absorption times " +
                  (t ? "identical" : "differ") + ";";
    }
    return {same, "threads 1 vs 3:" + detail};
}

// ---- criterion 7 ---------------------------------------------------------

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= x.size();
    my /= y.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

// log E_1[tau] for dx = (x - x^3) dt + sigma x^{3/4} dW from the Green function,
// E_1[tau] = int_0^1 dz int_z^inf 2 exp(2 G(y) - 2 G(z)) / (sigma^2 y^{3/2}) dy,
// scaled by exp(-2 G(1)) to stay in range.
double log_exact_mean_time(double sigma) {
    const double s2 = sigma * sigma;
    const auto G = [s2](double y) { return (2.0 * std::sqrt(y) - std::pow(y, 2.5) / 2.5) / s2; };
    const double g1 = G(1.0);
    QuadOptions opts;
    opts.rel_tol = 1e-9;
    opts.abs_tol = 0.0;
    const auto inner = [&](double z) {
        const auto f = [&](double y) { return 2.0 * std::exp(2.0 * (G(y) - g1)) / (s2 * std::pow(y, 1.5)); };
        return integrate(f, z, 1.0, opts).value + integrate(f, 1.0, kInf, opts).value;
    };
    const auto outer = [&](double z) { return std::exp(2.0 * (g1 - G(z)) - 2.0 * g1) * inner(z); };
    const double v = integrate_singular(outer, 0.0, 1.0, 0.5, 0.0, opts).value;
    return std::log(v) + 2.0 * g1;
}

Outcome criterion7() {
    ModelParams p;
    p.kind = ModelKind::GeneralPower;
    p.lambda = 1.0;
    p.alpha = 0.75;
    p.mu = -1.0;
    p.kappa = 2.0;
    p.nu = 1.0;
    p.beta = 2.0;
    p.tail_threshold = 1.0;
    const double u0 = quasipotential_at_zero(1.0, 1.0, 2.0, 0.75);

    std::vector<double> inv_s2, log_t, log_exact;
    std::string detail;
    for (double sigma : {0.35, 0.45, 0.55}) {
        p.sigma = sigma;
        p.d_coef = sigma;
        p.delta_exp = 0.75;
        const ModelSpec model(p);
        SimConfig cfg;
        cfg.dt = 0.01;
        cfg.horizon = 200.0;
        cfg.n_particles = 10000;
        cfg.master_seed = 7;
        const auto est = mean_absorption_time(model, cfg);
        inv_s2.push_back(1.0 / (sigma * sigma));
        log_t.push_back(std::log(est.mean));
        log_exact.push_back(log_exact_mean_time(sigma));
        detail += " sigma=" + fmt(sigma) + ":mean " + (est.absorbed > 0 ? fmt(est.mean) : "none absorbed") +
                  " censored " + fmt(est.censored_fraction);
    }
    const double slope = fit_slope(inv_s2, log_t);
    const double exact_slope = fit_slope(inv_s2, log_exact);
    const double dev = rel_err(slope, u0);
    return {dev < 0.3, "fitted slope " + fmt(slope) + " vs U(0) " + fmt(u0) + " (rel dev " + fmt(dev) +
                           "); exact-quadrature slope " + fmt(exact_slope) + ";" + detail};
}

// ---- criterion 8 ---------------------------------------------------------

Outcome criterion8() {
    bool pass = true;
    std::string detail;
    for (double alpha : {1.0, 1.2, 2.0}) {
        SimConfig cfg;
        cfg.dt = 0.01;
        cfg.horizon = 100.0;
        cfg.n_particles = 10000;
        cfg.master_seed = 8;
        const auto s = ensemble_run(ModelSpec::pitchfork(-1.0, 1.0, alpha), {1.0}, cfg);
        const auto absorbed = s.count(PathLabel::AbsorbedAtZero);
        const double min_d = *std::min_element(s.min_distance.begin(), s.min_distance.end());
        pass = pass && absorbed == 0 && min_d > 0.0;
        detail += " alpha=" + fmt(alpha) + ": absorbed " + std::to_string(absorbed) + ", min|x| " + fmt(min_d);
        // State one step before each crossing.
        for (std::size_t i = 0; i < s.labels.size(); ++i) {
            if (s.labels[i] != PathLabel::AbsorbedAtZero) continue;
            SimConfig one = cfg;
            one.snapshot_times = {std::floor(s.times[i] / cfg.dt) * cfg.dt};
            const auto path = euler_maruyama_path(ModelSpec::pitchfork(-1.0, 1.0, alpha), 1.0, one, i);
            detail += ", particle " + std::to_string(i) + " crossed at t=" + fmt(s.times[i]) + " from x=" +
                      fmt(path.snapshots.at(0));
        }
        detail += ";";
    }
    return {pass, detail};
}

const std::vector<std::function<Outcome()>> kCriteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                      criterion6, criterion7, criterion8, criterion9};

bool report(int n) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = kCriteria.at(n - 1)();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << " ["
              << fmt(seconds_since(t0)) << " s]" << std::endl;
    return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    int criterion = 0;
    app.add_option("--criterion", criterion, "run a single criterion (1-9)")->check(CLI::Range(1, 9));
    CLI11_PARSE(app, argc, argv);

    if (criterion != 0) return report(criterion) ? 0 : 1;
    bool all = true;
    for (int n = 1; n <= static_cast<int>(kCriteria.size()); ++n) all = report(n) && all;
    return all ? 0 : 1;
}
