#include "hsde/serialize.hpp"

#include "hsde/error.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace hsde {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    return s;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

json number(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

double to_double(const json& j, const std::string& field) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "infinity" || s == "+inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf" || s == "-infinity") return -std::numeric_limits<double>::infinity();
    }
    throw InvalidInput(field + ": expected a number");
}

json to_json(const Interval& iv) { return json::array({number(iv.lo), number(iv.hi)}); }

Interval interval_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2) throw InvalidInput(field + ": expected [lo, hi]");
    Interval iv{to_double(j[0], field + "[0]"), to_double(j[1], field + "[1]")};
    if (!(iv.lo < iv.hi)) throw InvalidInput(field + ": need lo < hi");
    return iv;
}

json to_json(const ModelSpec& m) {
    const auto& p = m.params();
    return {{"kind", std::string(to_string(p.kind))},
            {"lambda", p.lambda},
            {"sigma", p.sigma},
            {"alpha", p.alpha},
            {"mu", p.mu},
            {"kappa", p.kappa},
            {"nu", p.nu},
            {"beta", p.beta},
            {"tail_threshold", p.tail_threshold},
            {"d", p.d_coef},
            {"delta", p.delta_exp},
            {"a", p.a}};
}

ModelSpec model_from_json(const json& j) {
    if (!j.is_object()) throw InvalidInput("model: expected an object");
    ModelParams p;
    if (!j.contains("kind") || !j["kind"].is_string()) throw InvalidInput("model.kind: required string");
    p.kind = model_kind_from_string(j["kind"].get<std::string>());
    bool has_d = false, has_delta = false;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k == "kind") continue;
        const std::string field = "model." + k;
        if (!it.value().is_number()) throw InvalidInput(field + ": expected a number");
        const double v = it.value().get<double>();
        if (k == "lambda") p.lambda = v;
        else if (k == "sigma") p.sigma = v;
        else if (k == "alpha") p.alpha = v;
        else if (k == "mu") p.mu = v;
        else if (k == "kappa") p.kappa = v;
        else if (k == "nu") p.nu = v;
        else if (k == "beta") p.beta = v;
        else if (k == "tail_threshold") p.tail_threshold = v;
        else if (k == "d") p.d_coef = v, has_d = true;
        else if (k == "delta") p.delta_exp = v, has_delta = true;
        else if (k == "a") p.a = v;
        else throw InvalidInput(field + ": unknown field");
    }
    if (p.kind == ModelKind::GeneralPower) {
        if (!has_d) p.d_coef = p.sigma;
        if (!has_delta) p.delta_exp = p.alpha;
    }
    return ModelSpec(p);
}

json to_json(const AssumptionReport& r) {
    json out = json::object();
    for (int i = 1; i <= 6; ++i) {
        out["H" + std::to_string(i)] = {{"verdict", std::string(to_string(r[i].verdict))}, {"witness", r[i].witness}};
    }
    return out;
}

json to_json(const Condition& c) {
    return {{"expression", c.expression},
            {"margin", number(c.margin)},
            {"relation", std::string(to_string(c.relation))},
            {"text", c.text()}};
}

json to_json(const RegimeReport& r) {
    json points = json::array();
    for (const auto& p : r.points) {
        points.push_back({{"point", number(p.point)},
                          {"status", std::string(to_string(p.status))},
                          {"condition", to_json(p.condition)}});
    }
    json stat = json::array();
    for (const auto& e : r.stationary) {
        json s = {{"form", std::string(to_string(e.form))}, {"support", to_json(e.support)}};
        if (e.form == StationaryForm::DiracAtPoint) s["point"] = number(e.point);
        if (e.shape) s["shape"] = std::string(to_string(*e.shape));
        s["first_approximation"] = std::string(to_string(e.first_approximation));
        s["note"] = e.note;
        stat.push_back(s);
    }
    return {{"model", to_json(r.model)},
            {"assumptions", to_json(r.assumptions)},
            {"existence",
             {{"existence", std::string(to_string(r.existence.existence))},
              {"blowup", std::string(to_string(r.existence.blowup))},
              {"note", r.existence.note}}},
            {"absorption",
             {{"absorption", std::string(to_string(r.absorption.absorption))},
              {"condition", r.absorption.condition}}},
            {"singular_points", points},
            {"stationary", stat},
            {"qsd", {{"qsd", std::string(to_string(r.qsd.qsd))}, {"condition", r.qsd.condition}}}};
}

json to_json(const LocalForm& l) {
    return {{"kind", std::string(to_string(l.kind))},
            {"point", number(l.point)},
            {"coef", number(l.coef)},
            {"power", number(l.power)},
            {"noise", number(l.noise)},
            {"exponent", number(l.exponent)},
            {"p_finite", l.p_finite},
            {"v_finite", l.v_finite},
            {"m_finite", l.m_finite},
            {"rule", l.rule}};
}

json to_json(const Limit& l) {
    json j = {{"kind", std::string(to_string(l.kind))}, {"numerically_confirmed", l.numerically_confirmed}};
    if (l.kind == LimitKind::Finite) {
        j["value"] = number(l.value);
        j["error"] = number(l.error);
    }
    return j;
}

json to_json(const BoundaryReport& r) {
    auto end = [](const EndpointReport& e) {
        return json{{"local", to_json(e.local)}, {"p", to_json(e.p)}, {"v", to_json(e.v)}};
    };
    return {{"interval", to_json(r.interval)},
            {"c", number(r.c)},
            {"lo", end(r.lo)},
            {"hi", end(r.hi)},
            {"verdict", std::string(to_string(r.verdict))},
            {"exit_side", r.exit_side},
            {"reason", r.reason}};
}

json to_json(const ScaleTable& t) {
    return {{"interval", to_json(t.interval)},
            {"c", number(t.c)},
            {"points", t.grid.size()},
            {"boundary", to_json(t.boundary)},
            {"error_estimate", number(t.error_estimate)}};
}

json to_json(const DensityProfile& d) {
    json th = json::array();
    for (const auto& t : d.thresholds) {
        th.push_back({{"parameter", t.parameter}, {"value", number(t.value)}, {"description", t.description}});
    }
    json j = {{"support", to_json(d.support)},
              {"Z", number(d.Z)},
              {"mode", {{"kind", std::string(to_string(d.mode.kind))}, {"location", number(d.mode.location)}}},
              {"m", number(d.mean)},
              {"s", number(d.second_moment)},
              {"shape", std::string(to_string(d.shape))},
              {"thresholds", th}};
    j["l"] = d.lyapunov ? number(*d.lyapunov) : json(nullptr);
    return j;
}

json to_json(const ExtReal& v) {
    if (v.infinite) return "inf";
    return number(v.value);
}

json to_json(const QuasipotentialReport& r) {
    json path = json::array();
    for (const auto& p : r.path) {
        path.push_back({{"alpha", number(p.alpha)},
                        {"lambda", number(p.lambda)},
                        {"U0", number(p.U0)},
                        {"expansion", number(p.expansion)},
                        {"expansion_flipped", number(p.expansion_flipped)}});
    }
    json j = {{"lambda", number(r.lambda)},
              {"mu", number(r.mu)},
              {"kappa", number(r.kappa)},
              {"alpha", number(r.alpha)},
              {"U0", to_json(r.U0)},
              {"c", to_json(r.c)},
              {"regime", std::string(to_string(r.regime))},
              {"limit", to_json(r.limit)},
              {"path_rule", r.path_rule},
              {"path", path},
              {"empirical_limit", number(r.empirical_limit)},
              {"expansion_sign", r.expansion_sign}};
    j["deviation"] = r.limit.infinite ? json(nullptr) : number(r.deviation);
    return j;
}

json to_json(const SimConfig& c) {
    json snaps = json::array();
    for (double t : c.snapshot_times) snaps.push_back(number(t));
    return {{"dt", number(c.dt)},
            {"horizon", number(c.horizon)},
            {"n_particles", c.n_particles},
            {"seed", c.master_seed},
            {"blowup_threshold", number(c.blowup_threshold)},
            {"snapshot_times", snaps},
            {"histogram", {{"bins", c.histogram_bins}, {"lo", number(c.histogram_lo)}, {"hi", number(c.histogram_hi)}}},
            {"convergence",
             {{"enabled", c.convergence_rule},
              {"radius", number(c.converge_radius)},
              {"hold", number(c.converge_hold)}}}};
}

json summary_json(const EnsembleStats& s) {
    json labels = json::object();
    for (auto l : {PathLabel::AbsorbedAtZero, PathLabel::ExitLeft, PathLabel::ExitRight, PathLabel::BlownUp,
                   PathLabel::Alive}) {
        labels[std::string(to_string(l))] = s.count(l);
    }
    json snaps = json::array();
    for (const auto& h : s.histograms) {
        snaps.push_back({{"time", number(h.time)}, {"survivors", h.survivors}, {"median", number(h.median)}});
    }
    double mean = std::numeric_limits<double>::quiet_NaN();
    if (!s.absorption_times.empty()) {
        double acc = 0.0;
        for (double t : s.absorption_times) acc += t;
        mean = acc / static_cast<double>(s.absorption_times.size());
    }
    double min_d = std::numeric_limits<double>::infinity();
    for (double d : s.min_distance) min_d = std::min(min_d, d);
    return {{"particles", s.labels.size()},
            {"labels", labels},
            {"absorbed_fraction", number(s.absorbed_fraction())},
            {"mean_absorption_time", number(mean)},
            {"min_distance_to_singular_point", number(min_d)},
            {"snapshots", snaps}};
}

std::string Metadata::config_hash() const { return hex64(fnv1a64(config.dump())); }

json Metadata::to_json() const {
    return {{"command", command}, {"config_hash", config_hash()}, {"seed", seed}, {"version", version},
            {"config", config}};
}

std::string Metadata::csv_header() const {
    std::string s;
    s += "# command: " + command + "\n";
    s += "# config_hash: " + config_hash() + "\n";
    s += "# seed: " + std::to_string(seed) + "\n";
    s += "# version: " + version + "\n";
    s += "# config: " + config.dump() + "\n";
    return s;
}

namespace {

std::string row(std::initializer_list<std::string> cells) {
    std::string s;
    bool first = true;
    for (const auto& c : cells) {
        if (!first) s += ',';
        s += c;
        first = false;
    }
    s += '\n';
    return s;
}

}  // namespace

std::string scale_csv(const ScaleTable& t) {
    std::string s = "x,G,p,v\n";
    for (std::size_t i = 0; i < t.grid.size(); ++i) {
        s += row({format_double(t.grid[i]), format_double(t.G_vals[i]), format_double(t.p_vals[i]),
                  format_double(t.v_vals[i])});
    }
    return s;
}

std::string density_csv(const DensityProfile& d) {
    std::string s = "x,density\n";
    for (std::size_t i = 0; i < d.grid.size(); ++i) s += row({format_double(d.grid[i]), format_double(d.density[i])});
    return s;
}

std::string histogram_csv(const EnsembleStats& st) {
    std::string s = "snapshot_time,bin_lo,bin_hi,mass,survivor_count\n";
    for (const auto& h : st.histograms) {
        for (std::size_t b = 0; b < h.counts.size(); ++b) {
            s += row({format_double(h.time), format_double(h.edges[b]), format_double(h.edges[b + 1]),
                      format_double(h.mass[b]), std::to_string(h.survivors)});
        }
    }
    return s;
}

std::string absorption_csv(const EnsembleStats& st) {
    std::string s = "particle_index,time,label\n";
    for (std::size_t i = 0; i < st.labels.size(); ++i) {
        s += row({std::to_string(i), format_double(st.times[i]), std::string(to_string(st.labels[i]))});
    }
    return s;
}

std::string quasipotential_csv(const std::vector<double>& x, const std::vector<double>& u) {
    std::string s = "x,U\n";
    for (std::size_t i = 0; i < x.size(); ++i) s += row({format_double(x[i]), format_double(u[i])});
    return s;
}

std::string exit_csv(const std::vector<ExitFrequency>& f) {
    std::string s = "x0,n,right,left,unresolved,freq_right,stderr\n";
    for (const auto& e : f) {
        s += row({format_double(e.x0), std::to_string(e.n), std::to_string(e.right), std::to_string(e.left),
                  std::to_string(e.unresolved), format_double(e.freq_right), format_double(e.stderr_)});
    }
    return s;
}

}  // namespace hsde
