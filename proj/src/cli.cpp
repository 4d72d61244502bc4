#include "hsde/cli.hpp"

#include "hsde/classify.hpp"
#include "hsde/density.hpp"
#include "hsde/error.hpp"
#include "hsde/ldp.hpp"
#include "hsde/scale.hpp"
#include "hsde/serialize.hpp"
#include "hsde/sim.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#ifndef HSDE_VERSION
#define HSDE_VERSION "0.0.0"
#endif

namespace hsde {

namespace {

namespace fs = std::filesystem;

struct Globals {
    std::string config_path;
    std::string out;
    std::string format = "json";
    std::optional<std::uint64_t> seed;
    int threads = 1;
};

struct Artifact {
    std::string name;
    std::string body;
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw InvalidInput("config: cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("config: malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw InvalidInput("config: top level must be an object");
    return j;
}

json parse_value(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error&) {
        return text;
    }
}

void apply_overrides(json& cfg, const std::vector<std::string>& extras) {
    for (std::size_t i = 0; i < extras.size(); ++i) {
        const std::string& arg = extras[i];
        if (arg.rfind("--", 0) != 0) throw InvalidInput("unexpected argument '" + arg + "'");
        std::string key = arg.substr(2), value;
        const auto eq = key.find('=');
        if (eq != std::string::npos) {
            value = key.substr(eq + 1);
            key = key.substr(0, eq);
        } else {
            if (i + 1 >= extras.size()) throw InvalidInput("override --" + key + ": missing value");
            value = extras[++i];
        }
        if (key.find('.') == std::string::npos) throw InvalidInput("unknown option --" + key);
        json* node = &cfg;
        std::stringstream ss(key);
        std::string part;
        std::vector<std::string> parts;
        while (std::getline(ss, part, '.')) parts.push_back(part);
        for (std::size_t k = 0; k + 1 < parts.size(); ++k) {
            json& next = (*node)[parts[k]];
            if (next.is_null()) next = json::object();
            if (!next.is_object()) throw InvalidInput("override --" + key + ": '" + parts[k] + "' is not an object");
            node = &next;
        }
        (*node)[parts.back()] = parse_value(value);
    }
}

const json& section(const json& cfg, const std::string& name) {
    static const json empty = json::object();
    if (!cfg.contains(name)) return empty;
    if (!cfg[name].is_object()) throw InvalidInput(name + ": expected an object");
    return cfg[name];
}

double get_num(const json& s, const std::string& prefix, const std::string& key, double fallback) {
    if (!s.contains(key)) return fallback;
    return to_double(s[key], prefix + "." + key);
}

std::int64_t get_int(const json& s, const std::string& prefix, const std::string& key, std::int64_t fallback) {
    if (!s.contains(key)) return fallback;
    const json& v = s[key];
    if (v.is_number_integer() || v.is_number_unsigned()) return v.get<std::int64_t>();
    if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()) {
        return static_cast<std::int64_t>(v.get<double>());
    }
    throw InvalidInput(prefix + "." + key + ": expected an integer");
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return v;
}

// grid: explicit array, or {"lo", "hi", "n", "spacing": "linear"|"log"}; default spans the interval
std::vector<double> grid_from(const json& s, const std::string& prefix, const Interval& iv, json& effective) {
    if (s.contains("grid") && s["grid"].is_array()) {
        std::vector<double> g;
        for (std::size_t i = 0; i < s["grid"].size(); ++i) {
            g.push_back(to_double(s["grid"][i], prefix + ".grid[" + std::to_string(i) + "]"));
        }
        effective["grid"] = s["grid"];
        return g;
    }
    json spec = s.contains("grid") ? s["grid"] : json::object();
    if (!spec.is_object()) throw InvalidInput(prefix + ".grid: expected an array or an object");
    const int n = static_cast<int>(get_int(spec, prefix + ".grid", "n", 41));
    if (n < 1) throw InvalidInput(prefix + ".grid.n: must be >= 1");
    std::string spacing = spec.value("spacing", iv.lo_finite() != iv.hi_finite() ? "log" : "linear");
    std::vector<double> g;
    if (spacing == "log") {
        const double e = iv.lo_finite() ? iv.lo : iv.hi;
        const double dir = iv.lo_finite() ? 1.0 : -1.0;
        const double span = iv.lo_finite() && iv.hi_finite() ? (iv.hi - iv.lo) / 2.0 : 10.0;
        const double dlo = get_num(spec, prefix + ".grid", "dmin", 1e-3 * span);
        const double dhi = get_num(spec, prefix + ".grid", "dmax", span);
        for (double t : linspace(std::log10(dlo), std::log10(dhi), n)) g.push_back(e + dir * std::pow(10.0, t));
        effective["grid"] = {{"n", n}, {"spacing", spacing}, {"dmin", number(dlo)}, {"dmax", number(dhi)}};
    } else if (spacing == "linear") {
        double lo = iv.lo_finite() ? iv.lo : (iv.hi_finite() ? iv.hi - 10.0 : -10.0);
        double hi = iv.hi_finite() ? iv.hi : lo + (iv.lo_finite() ? 10.0 : 20.0);
        const double pad = (hi - lo) / (n + 1);
        if (iv.lo_finite()) lo += pad;
        if (iv.hi_finite()) hi -= pad;
        lo = get_num(spec, prefix + ".grid", "lo", lo);
        hi = get_num(spec, prefix + ".grid", "hi", hi);
        g = linspace(lo, hi, n);
        effective["grid"] = {{"n", n}, {"spacing", spacing}, {"lo", number(lo)}, {"hi", number(hi)}};
    } else {
        throw InvalidInput(prefix + ".grid.spacing: expected 'linear' or 'log'");
    }
    return g;
}

class Runner {
public:
    Runner(const Globals& g, json cfg, std::ostream& out) : g_(g), cfg_(std::move(cfg)), out_(out) {}

    void classify() {
        const ModelSpec m = model();
        const RegimeReport r = hsde::classify(m);
        effective_["model"] = to_json(m);
        emit({{"classify.json", with_meta("classify", {{"report", to_json(r)}}).dump(2) + "\n"}}, 0);
    }

    void scale() {
        const ModelSpec m = model();
        const json& s = section(cfg_, "scale");
        const Interval iv = s.contains("interval") ? interval_from_json(s["interval"], "scale.interval")
                                                   : default_interval(m);
        const double c = get_num(s, "scale", "c", default_reference_point(iv));
        json eff = {{"interval", to_json(iv)}, {"c", number(c)}};
        const auto grid = grid_from(s, "scale", iv, eff);
        effective_["model"] = to_json(m);
        effective_["scale"] = eff;
        const ScaleTable t = scale_table(m, iv, c, grid);
        json table = json::array();
        for (std::size_t i = 0; i < t.grid.size(); ++i) {
            table.push_back({number(t.grid[i]), number(t.G_vals[i]), number(t.p_vals[i]), number(t.v_vals[i])});
        }
        const json summary = with_meta("scale", {{"summary", to_json(t)}, {"columns", {"x", "G", "p", "v"}}, {"table", table}});
        emit({{"scale.json", summary.dump(2) + "\n"}, {"scale.csv", meta("scale").csv_header() + scale_csv(t)}},
             g_.format == "csv" ? 1 : 0);
    }

    void density() {
        const ModelSpec m = model();
        const json& s = section(cfg_, "density");
        Interval sup;
        if (s.contains("support")) {
            sup = interval_from_json(s["support"], "density.support");
        } else {
            bool found = false;
            for (const auto& e : classify_stationary(m)) {
                if (e.form != StationaryForm::HomogeneousDensity) continue;
                if (!found || e.support.lo >= 0.0) sup = e.support;
                found = true;
            }
            if (!found) {
                // the natural candidate support carries the precise reason
                Interval cand{0.0, kInf};
                if (m.kind() == ModelKind::SaddleNode) {
                    cand = m.a() > 0.0 ? Interval{-kInf, -std::sqrt(m.a())}
                                       : (m.a() < 0.0 ? Interval{-kInf, kInf} : Interval{-kInf, 0.0});
                }
                normalize_density(m, cand);
                throw AnalyticRefusal("no integrable solution: the stationary classification grants only Dirac masses");
            }
        }
        json eff = {{"support", to_json(sup)}};
        const auto grid = grid_from(s, "density", sup, eff);
        effective_["model"] = to_json(m);
        effective_["density"] = eff;
        const DensityProfile d = density_profile(m, sup, grid);
        emit({{"density.json", with_meta("density", {{"report", to_json(d)}}).dump(2) + "\n"},
              {"density.csv", meta("density").csv_header() + density_csv(d)}},
             g_.format == "csv" ? 1 : 0);
    }

    void ldp() {
        const json& s = section(cfg_, "ldp");
        const double lambda = get_num(s, "ldp", "lambda", 1.0);
        const double mu = get_num(s, "ldp", "mu", 1.0);
        const double kappa = get_num(s, "ldp", "kappa", 2.0);
        const double alpha = get_num(s, "ldp", "alpha", 0.75);
        ExtReal c = ExtReal::of(1.0);
        if (s.contains("c")) {
            const double cv = to_double(s["c"], "ldp.c");
            c = std::isinf(cv) ? ExtReal::inf() : ExtReal::of(cv);
        }
        json eff = {{"lambda", number(lambda)}, {"mu", number(mu)}, {"kappa", number(kappa)},
                    {"alpha", number(alpha)}, {"c", to_json(c)}};
        const auto r = quasipotential_report(lambda, mu, kappa, alpha, c);
        std::vector<Artifact> arts;
        if (s.contains("grid") && alpha < 1.0) {
            const double xe = std::pow(lambda / mu, 1.0 / kappa);
            const auto grid = grid_from(s, "ldp", Interval{0.0, xe}, eff);
            std::vector<double> u;
            for (double x : grid) u.push_back(quasipotential(lambda, mu, kappa, alpha, x));
            arts.push_back({"ldp_u.csv", meta("ldp").csv_header() + quasipotential_csv(grid, u)});
        }
        effective_["ldp"] = eff;
        arts.insert(arts.begin(), {"ldp.json", with_meta("ldp", {{"report", to_json(r)}}).dump(2) + "\n"});
        emit(arts, g_.format == "csv" && arts.size() > 1 ? 1 : 0);
    }

    void simulate() {
        const ModelSpec m = model();
        const json& s = section(cfg_, "sim");
        SimConfig c;
        c.dt = get_num(s, "sim", "dt", c.dt);
        c.horizon = get_num(s, "sim", "horizon", c.horizon);
        c.n_particles = get_int(s, "sim", "n_particles", c.n_particles);
        c.master_seed = static_cast<std::uint64_t>(get_int(s, "sim", "seed", static_cast<std::int64_t>(c.master_seed)));
        if (g_.seed) c.master_seed = *g_.seed;
        c.blowup_threshold = get_num(s, "sim", "blowup_threshold", c.blowup_threshold);
        if (s.contains("snapshot_times")) {
            if (!s["snapshot_times"].is_array()) throw InvalidInput("sim.snapshot_times: expected an array");
            for (const auto& v : s["snapshot_times"]) c.snapshot_times.push_back(to_double(v, "sim.snapshot_times"));
        } else {
            c.snapshot_times = {c.horizon};
        }
        const json& h = s.contains("histogram") ? s["histogram"] : json::object();
        c.histogram_bins = static_cast<int>(get_int(h, "sim.histogram", "bins", c.histogram_bins));
        c.histogram_lo = get_num(h, "sim.histogram", "lo", c.histogram_lo);
        c.histogram_hi = get_num(h, "sim.histogram", "hi", c.histogram_hi);
        const json& cv = s.contains("convergence") ? s["convergence"] : json::object();
        c.convergence_rule = cv.value("enabled", c.convergence_rule);
        c.converge_radius = get_num(cv, "sim.convergence", "radius", c.converge_radius);
        c.converge_hold = get_num(cv, "sim.convergence", "hold", c.converge_hold);
        c.threads = g_.threads;
        const std::string mode = s.value("mode", "ensemble");
        c.validate();

        json eff = to_json(c);
        eff["mode"] = mode;
        effective_["model"] = to_json(m);
        seed_ = c.master_seed;

        if (mode == "ensemble") {
            const double x0 = get_num(s, "sim", "x0", 1.0);
            eff["x0"] = number(x0);
            effective_["sim"] = eff;
            const EnsembleStats st = ensemble_run(m, {x0}, c);
            const Metadata md = meta("simulate");
            emit({{"summary.json", with_meta("simulate", {{"summary", summary_json(st)}}).dump(2) + "\n"},
                  {"histograms.csv", md.csv_header() + histogram_csv(st)},
                  {"absorption_times.csv", md.csv_header() + absorption_csv(st)}},
                 g_.format == "csv" ? 1 : 0);
        } else if (mode == "absorption") {
            const double x0 = get_num(s, "sim", "x0", -1.0);
            const auto e = mean_absorption_time(m, c, x0);
            eff["x0"] = number(e.x0);
            effective_["sim"] = eff;
            const json r = {{"mean", number(e.mean)},
                            {"stderr", number(e.stderr_)},
                            {"absorbed", e.absorbed},
                            {"censored_fraction", number(e.censored_fraction)},
                            {"biased_low", e.biased_low},
                            {"x0", number(e.x0)}};
            emit({{"absorption.json", with_meta("simulate", {{"absorption", r}}).dump(2) + "\n"}}, 0);
        } else if (mode == "exit") {
            if (!s.contains("x0_grid") || !s["x0_grid"].is_array()) {
                throw InvalidInput("sim.x0_grid: required array for mode 'exit'");
            }
            std::vector<double> grid;
            for (const auto& v : s["x0_grid"]) grid.push_back(to_double(v, "sim.x0_grid"));
            eff["x0_grid"] = s["x0_grid"];
            if (m.alpha() >= 1.0) eff["convergence"]["enabled"] = true;
            effective_["sim"] = eff;
            const auto f = exit_frequencies(m, grid, c);
            json arr = json::array();
            for (const auto& e : f) {
                arr.push_back({{"x0", number(e.x0)},
                               {"n", e.n},
                               {"right", e.right},
                               {"left", e.left},
                               {"unresolved", e.unresolved},
                               {"freq_right", number(e.freq_right)},
                               {"stderr", number(e.stderr_)}});
            }
            emit({{"exit.json", with_meta("simulate", {{"exit_frequencies", arr}}).dump(2) + "\n"},
                  {"exit.csv", meta("simulate").csv_header() + exit_csv(f)}},
                 g_.format == "csv" ? 1 : 0);
        } else {
            throw InvalidInput("sim.mode: expected 'ensemble', 'absorption' or 'exit'");
        }
    }

private:
    ModelSpec model() const {
        if (!cfg_.contains("model")) throw InvalidInput("model: required section missing");
        return model_from_json(cfg_["model"]);
    }

    Metadata meta(const std::string& command) const {
        Metadata md;
        md.command = command;
        md.config = effective_;
        md.seed = seed_;
        md.version = HSDE_VERSION;
        return md;
    }

    json with_meta(const std::string& command, json body) const {
        json j = {{"metadata", meta(command).to_json()}};
        for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
        return j;
    }

    void emit(const std::vector<Artifact>& arts, std::size_t primary) {
        if (g_.out.empty()) {
            out_ << arts.at(primary).body;
            return;
        }
        const fs::path dir(g_.out);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec || !fs::is_directory(dir)) throw InvalidInput("--out: cannot create directory '" + g_.out + "'");
        for (const auto& a : arts) {
            const fs::path p = dir / a.name;
            std::ofstream f(p, std::ios::binary);
            if (!f) throw InvalidInput("--out: cannot write '" + p.string() + "'");
            f << a.body;
            out_ << p.string() << "\n";
        }
    }

    const Globals& g_;
    json cfg_;
    std::ostream& out_;
    json effective_ = json::object();
    std::uint64_t seed_ = 0;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Singular SDE analysis: regime classification, Feller scale functions, stationary densities, "
                 "quasipotentials and Euler-Maruyama ensembles"};
    app.set_version_flag("--version", HSDE_VERSION);
    Globals g;
    app.add_option("--config", g.config_path, "JSON configuration file");
    app.add_option("--out", g.out, "directory for the output artifacts (default: primary artifact on stdout)");
    app.add_option("--format", g.format, "primary artifact format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", g.seed, "master seed for simulate (overrides sim.seed)");
    app.add_option("--threads", g.threads, "worker threads for simulate")->check(CLI::PositiveNumber);
    app.require_subcommand(1);
    app.allow_extras();
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
             {"classify", "regime report"},
             {"scale", "scale function table and Feller boundary verdict"},
             {"density", "normalized stationary density and its scalars"},
             {"ldp", "quasipotential and asymptotic regime"},
             {"simulate", "Euler-Maruyama ensemble, absorption times or exit frequencies"}}) {
        CLI::App* s = app.add_subcommand(name, help);
        s->allow_extras();
        s->fallthrough();
        subs[name] = s;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << HSDE_VERSION << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        std::vector<std::string> extras = app.remaining();
        std::string command;
        for (const auto& [name, s] : subs) {
            if (s->parsed()) {
                command = name;
                const auto more = s->remaining();
                extras.insert(extras.end(), more.begin(), more.end());
            }
        }
        json cfg = load_config(g.config_path);
        apply_overrides(cfg, extras);
        Runner r(g, cfg, out);
        if (command == "classify") r.classify();
        else if (command == "scale") r.scale();
        else if (command == "density") r.density();
        else if (command == "ldp") r.ldp();
        else r.simulate();
        return 0;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        err << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const AnalyticRefusal& e) {
        err << "refused: " << e.what() << "\n";
        return 3;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace hsde
