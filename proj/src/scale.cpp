#include "hsde/scale.hpp"

#include "hsde/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hsde {

namespace {

constexpr double kInfD = std::numeric_limits<double>::infinity();
constexpr double kMinWidth = 1e-6;
constexpr double kMaxWidth = 4.0;
constexpr double kMaxDeltaG = 40.0;
constexpr double kStopRel = 1e-15;
constexpr double kMaxG = 1e3;

enum Q { kP = 0, kV = 1, kM = 2, kM1 = 3, kM2 = 4 };

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

bool is_minus_one(double eta) { return std::fabs(eta + 1.0) < 1e-12; }

}  // namespace

std::string_view to_string(LimitKind k) {
    switch (k) {
        case LimitKind::Finite: return "Finite";
        case LimitKind::PlusInfinity: return "PlusInfinity";
        case LimitKind::MinusInfinity: return "MinusInfinity";
        case LimitKind::Unknown: return "Unknown";
    }
    return "?";
}

std::string_view to_string(EndpointKind k) {
    switch (k) {
        case EndpointKind::Regular: return "Regular";
        case EndpointKind::Singular: return "Singular";
        case EndpointKind::Infinite: return "Infinite";
    }
    return "?";
}

std::string_view to_string(FellerVerdict v) {
    switch (v) {
        case FellerVerdict::ExitAlmostSurelyFinite: return "ExitAlmostSurelyFinite";
        case FellerVerdict::NoExit: return "NoExit";
        case FellerVerdict::ExitWithPositiveProbability: return "ExitWithPositiveProbability";
        case FellerVerdict::Unknown: return "Unknown";
    }
    return "?";
}

std::string_view to_string(HittingMode m) {
    return m == HittingMode::Exit ? "Exit" : "ConvergenceProbability";
}

LocalForm local_form(const ModelSpec& m, double e, bool is_lo) {
    LocalForm L;
    L.point = e;
    const auto sp = singular_points(m);
    const bool singular = std::find(sp.begin(), sp.end(), e) != sp.end();

    if (std::isinf(e)) {
        L.kind = EndpointKind::Infinite;
        switch (m.kind()) {
            case ModelKind::SaddleNode:
                L.coef = e > 0 ? -1.0 : 1.0;
                L.power = 2.0;
                L.noise = m.sigma();
                L.exponent = 2.0 * m.alpha();
                break;
            case ModelKind::Pitchfork:
            case ModelKind::SubcriticalPitchfork:
                L.coef = -1.0;
                L.power = 3.0;
                L.noise = m.sigma();
                L.exponent = m.alpha();
                break;
            case ModelKind::GeneralPower:
                if (m.nu() != 0.0) {
                    L.coef = -m.nu();
                    L.power = 1.0 + m.beta();
                } else {
                    L.coef = m.lambda();
                    L.power = 1.0;
                }
                L.noise = m.d_coef();
                L.exponent = m.delta_exp();
                break;
        }
        const double eta = L.power - 2.0 * L.exponent;
        const double k = 2.0 * L.coef / (L.noise * L.noise);
        if (L.coef == 0.0) {
            L.p_finite = false;
            L.m_finite = L.exponent > 0.5;
            L.rule = "no drift in the tail: p' -> const, m ~ u^{-2 delta}";
        } else if (is_minus_one(eta)) {
            L.p_finite = k > 1.0;
            L.m_finite = k - 2.0 * L.exponent < -1.0;
            L.rule = "G ~ (" + fmt(k / 2.0) + ") log u: p' ~ u^{" + fmt(-k) + "}";
        } else if (eta > -1.0) {
            L.p_finite = L.coef > 0.0;
            L.m_finite = L.coef < 0.0;
            L.rule = std::string("G ~ ") + (L.coef > 0 ? "+" : "-") + "u^{" + fmt(eta + 1.0) + "}: p' " +
                     (L.coef > 0 ? "decays" : "grows") + " faster than any power";
        } else {
            L.p_finite = false;
            L.m_finite = L.exponent > 0.5;
            L.rule = "G converges: p' -> const, m ~ u^{" + fmt(-2.0 * L.exponent) + "}";
        }
        L.v_finite = L.p_finite && L.power > 1.0;
        L.rule += L.v_finite ? "; v finite (int du / |f| < inf)" : "; v infinite";
        return L;
    }

    if (!singular) {
        L.kind = EndpointKind::Regular;
        L.rule = "gamma(" + fmt(e) + ") > 0: regular endpoint";
        return L;
    }

    L.kind = EndpointKind::Singular;
    switch (m.kind()) {
        case ModelKind::SaddleNode:
            if (m.a() > 0.0) {
                const double r = std::sqrt(m.a());
                L.coef = -2.0 * e;
                L.power = 1.0;
                L.noise = m.sigma() * std::pow(2.0 * r, m.alpha());
                L.exponent = m.alpha();
            } else {
                L.coef = is_lo ? -1.0 : 1.0;
                L.power = 2.0;
                L.noise = m.sigma();
                L.exponent = 2.0 * m.alpha();
            }
            break;
        case ModelKind::Pitchfork:
        case ModelKind::SubcriticalPitchfork:
            if (m.lambda() != 0.0) {
                L.coef = m.lambda();
                L.power = 1.0;
            } else {
                L.coef = -1.0;
                L.power = 3.0;
            }
            L.noise = m.sigma();
            L.exponent = m.alpha();
            break;
        case ModelKind::GeneralPower:
            if (m.lambda() != 0.0) {
                L.coef = m.lambda();
                L.power = 1.0;
            } else if (m.mu() != 0.0) {
                L.coef = m.mu();
                L.power = 1.0 + m.kappa();
            } else {
                L.coef = 0.0;
                L.power = kInfD;
            }
            L.noise = m.sigma();
            L.exponent = m.alpha();
            break;
    }
    const double eta = L.power - 2.0 * L.exponent;
    const double k = 2.0 * L.coef / (L.noise * L.noise);
    if (is_minus_one(eta)) {
        L.p_finite = k < 1.0;
        L.m_finite = k - 2.0 * L.exponent > -1.0;
        L.rule = "G ~ (" + fmt(k / 2.0) + ") log u: p' ~ u^{" + fmt(-k) + "}, m ~ u^{" +
                 fmt(k - 2.0 * L.exponent) + "}";
    } else if (eta > -1.0) {
        L.p_finite = true;
        L.m_finite = L.exponent < 0.5;
        L.rule = "f/gamma^2 ~ u^{" + fmt(eta) + "} integrable: G finite, m ~ u^{" + fmt(-2.0 * L.exponent) + "}";
    } else {
        L.p_finite = L.coef < 0.0;
        L.m_finite = L.coef > 0.0;
        L.rule = std::string("G -> ") + (L.coef < 0 ? "+inf" : "-inf") + " like u^{" + fmt(eta + 1.0) + "}";
    }
    L.v_finite = L.p_finite && (L.m_finite || L.exponent < 1.0);
    L.rule += L.v_finite ? "; v finite" : "; v infinite";
    return L;
}

ScaleFunctions::ScaleFunctions(const ModelSpec& model, const Interval& interval, double c, double tol)
    : model_(model), iv_(interval), c_(c), tol_(tol) {
    if (std::isnan(iv_.lo) || std::isnan(iv_.hi) || !(iv_.lo < iv_.hi)) {
        throw InvalidInput("scale.interval: need lo < hi");
    }
    if (!std::isfinite(c_) || !iv_.contains(c_)) throw InvalidInput("scale.c: reference point must lie inside the interval");
    if (model_.sigma() == 0.0) throw AnalyticRefusal("scale: deterministic system (sigma = 0), gamma vanishes");
    for (double sp : singular_points(model_)) {
        if (iv_.contains(sp)) {
            throw InvalidInput("scale.interval: " + to_string(iv_) + " contains the singular point " + fmt(sp));
        }
    }
    if (iv_.lo_finite() && iv_.hi_finite()) {
        map_ = MapKind::Logistic;
    } else if (iv_.lo_finite()) {
        map_ = MapKind::Exp;
    } else if (iv_.hi_finite()) {
        map_ = MapKind::NegExp;
    } else {
        map_ = MapKind::Sinh;
    }
    s_c_ = s_of(c_);
    if (model_.kind() == ModelKind::GeneralPower) {
        const double A = model_.tail_threshold();
        for (double b : {-2.0 * A, -A, A, 2.0 * A}) {
            if (iv_.contains(b)) breaks_.push_back(s_of(b));
        }
        std::sort(breaks_.begin(), breaks_.end());
    }
    right_.dir = 1;
    left_.dir = -1;
    for (Walk* w : {&right_, &left_}) {
        w->s = s_c_;
        w->status.fill(Status::Active);
    }
}

ScaleFunctions::Point ScaleFunctions::at(double s) const {
    switch (map_) {
        case MapKind::Logistic: {
            const double L = iv_.hi - iv_.lo;
            const double dlo = L / (1.0 + std::exp(-s));
            const double dhi = L / (1.0 + std::exp(s));
            const double x = dlo <= dhi ? iv_.lo + dlo : iv_.hi - dhi;
            return {x, dlo * dhi / L, dlo, dhi};
        }
        case MapKind::Exp: {
            const double d = std::exp(s);
            return {iv_.lo + d, d, d, kInfD};
        }
        case MapKind::NegExp: {
            const double d = std::exp(-s);
            return {iv_.hi - d, d, kInfD, d};
        }
        case MapKind::Sinh: return {std::sinh(s), std::cosh(s), kInfD, kInfD};
    }
    return {};
}

double ScaleFunctions::s_of(double x) const {
    double s = 0.0;
    switch (map_) {
        case MapKind::Logistic: s = std::log((x - iv_.lo) / (iv_.hi - x)); break;
        case MapKind::Exp: s = std::log(x - iv_.lo); break;
        case MapKind::NegExp: s = -std::log(iv_.hi - x); break;
        case MapKind::Sinh: s = std::asinh(x); break;
    }
    return std::clamp(s, s_min_, s_max_);
}

std::pair<double, double> ScaleFunctions::coeffs(const Point& p) const {
    if (model_.kind() == ModelKind::SaddleNode && model_.a() > 0.0) {
        // factorise x^2 - a so that distances to +-sqrt(a) keep full precision
        const double r = std::sqrt(model_.a());
        double f1 = p.x - r, f2 = p.x + r;
        if (iv_.hi == r) f1 = -p.dhi;
        else if (iv_.lo == r) f1 = p.dlo;
        if (iv_.lo == -r) f2 = p.dlo;
        else if (iv_.hi == -r) f2 = -p.dhi;
        const double prod = f1 * f2;
        return {-prod, model_.sigma() * std::pow(std::fabs(prod), model_.alpha())};
    }
    return {drift_eval(model_, p.x), diffusion_eval(model_, p.x)};
}

std::pair<double, double> ScaleFunctions::coefficients(double x) const {
    return coeffs(Point{x, 1.0, x - iv_.lo, iv_.hi - x});
}

double ScaleFunctions::g_integrand(double s) const {
    const Point p = at(s);
    const auto [f, g] = coeffs(p);
    return f / (g * g) * p.dx;
}

bool ScaleFunctions::advance(Walk& w) {
    if (w.done) return false;
    using cheb::kN;
    const double s0 = w.s;
    double h = w.h;
    for (;;) {
        double s1 = s0 + w.dir * h;
        if (w.dir > 0) {
            s1 = std::min(s1, s_max_);
            for (double b : breaks_) {
                if (b > s0 + 1e-12) {
                    s1 = std::min(s1, b);
                    break;
                }
            }
        } else {
            s1 = std::max(s1, s_min_);
            for (auto it = breaks_.rbegin(); it != breaks_.rend(); ++it) {
                if (*it < s0 - 1e-12) {
                    s1 = std::max(s1, *it);
                    break;
                }
            }
        }
        if (s1 == s0) {
            w.done = true;
            return false;
        }
        const double a = std::min(s0, s1), b = std::max(s0, s1);
        const auto ns = cheb::nodes(a, b);
        cheb::Values xi{}, dxi{}, gam{}, gfun{};
        bool ok = true;
        for (int j = 0; j <= kN; ++j) {
            const Point p = at(ns[j]);
            const auto [f, g] = coeffs(p);
            xi[j] = p.x;
            dxi[j] = p.dx;
            gam[j] = g;
            gfun[j] = f / (g * g) * p.dx;
            // 1e36 leaves headroom for exp(2 dG) within a panel
            if (!(std::isfinite(p.x) && std::isfinite(gfun[j]) && g * g >= std::numeric_limits<double>::min() &&
                  std::isfinite(g * g) &&
                  std::isfinite(1e36 * p.dx / (g * g)))) {
                ok = false;
            }
        }
        if (!ok) {
            if (h > kMinWidth) {
                h *= 0.5;
                continue;
            }
            w.done = true;
            return false;
        }
        auto orient = [&](const cheb::Values& v) {
            cheb::Values c = cheb::cumulative(v, a, b);
            if (w.dir < 0) {
                const double end = c[kN];
                for (auto& x : c) x -= end;
            }
            return c;
        };
        const int last = w.dir > 0 ? kN : 0;
        const cheb::Values cg = orient(gfun);
        double dgmax = 0.0;
        for (double v : cg) dgmax = std::max(dgmax, std::fabs(v));
        double worst = cheb::tail_ratio(gfun);
        if ((worst > tol_ || dgmax > kMaxDeltaG) && h > kMinWidth) {
            h *= 0.5;
            continue;
        }

        cheb::Values G{}, pp{}, mh{}, m1h{}, m2h{};
        bool pp_ok = true, m_ok = true;
        for (int j = 0; j <= kN; ++j) {
            G[j] = w.G + cg[j];
            pp[j] = std::exp(-2.0 * G[j]) * dxi[j];
            mh[j] = 2.0 * dxi[j] / (gam[j] * gam[j]) * std::exp(2.0 * cg[j]);
            m1h[j] = mh[j] * xi[j];
            m2h[j] = m1h[j] * xi[j];
            if (!std::isfinite(pp[j])) pp_ok = false;
            if (!std::isfinite(m2h[j])) m_ok = false;
        }
        const cheb::Values Mh = orient(mh);
        cheb::Values W{}, vv{};
        for (int j = 0; j <= kN; ++j) {
            W[j] = std::exp(-2.0 * cg[j]) * (w.W + Mh[j]);
            vv[j] = W[j] * dxi[j];
        }
        worst = std::max(worst, cheb::tail_ratio(mh));
        worst = std::max(worst, cheb::tail_ratio(vv));
        if (pp_ok && w.status[kP] == Status::Active) worst = std::max(worst, cheb::tail_ratio(pp));
        if (m_ok && w.status[kM] == Status::Active) {
            worst = std::max(worst, cheb::tail_ratio(m1h));
            worst = std::max(worst, cheb::tail_ratio(m2h));
        }
        if (worst > tol_ && h > kMinWidth) {
            h *= 0.5;
            continue;
        }
        if (worst > tol_) err_ += worst;

        Panel panel;
        panel.s_lo = a;
        panel.s_hi = b;
        panel.G = G;
        const double e2g0 = std::exp(2.0 * w.G);
        std::array<cheb::Values, kQ> inc{};
        inc[kP] = pp_ok ? orient(pp) : cheb::Values{};
        inc[kV] = orient(vv);
        if (m_ok) {
            const cheb::Values c1 = orient(m1h), c2 = orient(m2h);
            for (int j = 0; j <= kN; ++j) {
                inc[kM][j] = e2g0 * Mh[j];
                inc[kM1][j] = e2g0 * c1[j];
                inc[kM2][j] = e2g0 * c2[j];
            }
        }
        std::array<cheb::Values*, kQ> dst = {&panel.P, &panel.V, &panel.M, &panel.M1, &panel.M2};
        const double mid = 0.5 * (a + b);
        for (int q = 0; q < kQ; ++q) {
            bool overflow = w.status[q] == Status::Overflow;
            if (!overflow && ((q == kP && !pp_ok) || (q >= kM && !m_ok))) overflow = true;
            if (!overflow) {
                for (int j = 0; j <= kN; ++j) (*dst[q])[j] = w.q[q] + inc[q][j];
                if (!std::isfinite((*dst[q])[last])) overflow = true;
            }
            if (overflow) {
                const double inf = (q == kV || q == kM2) ? kInfD : w.dir * kInfD;
                dst[q]->fill(inf);
                w.status[q] = Status::Overflow;
                w.q[q] = inf;
                continue;
            }
            const double delta = (*dst[q])[last] - w.q[q];
            w.q[q] = (*dst[q])[last];
            if (w.status[q] != Status::Active) continue;
            const double rate = delta / (b - a);
            double tail = 0.0;
            bool small = false;
            if (delta == 0.0) {
                small = true;
            } else if (w.last_rate[q] != 0.0 && std::signbit(rate) == std::signbit(w.last_rate[q]) &&
                       std::fabs(rate) < std::fabs(w.last_rate[q])) {
                const double kappa = std::log(w.last_rate[q] / rate) / std::fabs(mid - w.last_mid[q]);
                tail = rate * std::exp(-kappa * (b - a) / 2.0) / kappa;
                small = std::fabs(tail) <= kStopRel * std::fabs(w.q[q]);
            }
            w.tail[q] = tail;
            w.quiet[q] = small ? w.quiet[q] + 1 : 0;
            if (w.quiet[q] >= 3) w.status[q] = Status::Converged;
            w.last_rate[q] = rate;
            w.last_mid[q] = mid;
        }
        w.G = G[last];
        w.W = W[last];
        w.s = s1;
        w.h = std::min(h * 1.5, kMaxWidth);
        ++w.panels;
        w.panels_.push_back(panel);
        if (s1 == s_max_ || s1 == s_min_ || std::fabs(w.G) > kMaxG) w.done = true;
        bool active = false;
        for (auto st : w.status) active = active || st == Status::Active;
        if (!active) w.done = true;
        return true;
    }
}

void ScaleFunctions::walk_to(Walk& w, double s) {
    while (!w.done && (w.dir > 0 ? w.s < s : w.s > s)) advance(w);
}

double ScaleFunctions::lookup(int which, double x) {
    if (!iv_.contains(x)) throw InvalidInput("scale: x = " + fmt(x) + " outside " + to_string(iv_));
    if (x == c_) return 0.0;
    const double s = s_of(x);
    Walk& w = s > s_c_ ? right_ : left_;
    walk_to(w, s);
    const bool covered = w.dir > 0 ? w.s >= s : w.s <= s;
    if (covered) {
        const auto& ps = w.panels_;
        std::size_t lo = 0, hi = ps.size() - 1;
        while (lo < hi) {
            const std::size_t midp = (lo + hi) / 2;
            const bool past = w.dir > 0 ? ps[midp].s_hi >= s : ps[midp].s_lo <= s;
            if (past) hi = midp;
            else lo = midp + 1;
        }
        const Panel& p = ps[lo];
        const cheb::Values* vals = nullptr;
        switch (which) {
            case -1: vals = &p.G; break;
            case kP: vals = &p.P; break;
            case kV: vals = &p.V; break;
            case kM: vals = &p.M; break;
            default: vals = &p.G; break;
        }
        if (!std::isfinite((*vals)[0])) return (*vals)[0];
        return cheb::interpolate(*vals, p.s_lo, p.s_hi, s);
    }
    if (which == -1) {
        QuadOptions o;
        o.abs_tol = 1e-12;
        o.rel_tol = 1e-12;
        const auto r = integrate([this](double t) { return g_integrand(t); }, w.s, s, o);
        return w.G + require_converged(r, "compute_G").value;
    }
    const int q = which;
    if (w.status[q] == Status::Overflow) return w.q[q];
    if (w.status[q] == Status::Converged) return w.q[q] + w.tail[q];
    throw NumericalFailure("scale: x = " + fmt(x) + " beyond the resolvable range of the interval", kInfD);
}

double ScaleFunctions::G(double x) { return lookup(-1, x); }
double ScaleFunctions::p(double x) { return lookup(kP, x); }
double ScaleFunctions::v(double x) { return lookup(kV, x); }
double ScaleFunctions::M(double x) { return lookup(kM, x); }

ScaleFunctions::EndValues ScaleFunctions::limits(bool hi) {
    Walk& w = hi ? right_ : left_;
    while (advance(w)) {
    }
    EndValues ev;
    ev.reached = at(w.s).x;
    std::array<Limit*, kQ> out = {&ev.p, &ev.v, &ev.m, &ev.m1, &ev.m2};
    for (int q = 0; q < kQ; ++q) {
        Limit& L = *out[q];
        if (w.status[q] == Status::Overflow) {
            L.kind = w.q[q] > 0 ? LimitKind::PlusInfinity : LimitKind::MinusInfinity;
            L.value = w.q[q];
            L.numerically_confirmed = true;
            continue;
        }
        L.kind = LimitKind::Finite;
        L.value = w.q[q] + w.tail[q];
        L.error = std::fabs(w.tail[q]) + err_ * std::fabs(L.value);
        L.numerically_confirmed = w.status[q] == Status::Converged;
    }
    return ev;
}

Interval default_interval(const ModelSpec& m) {
    if (m.kind() == ModelKind::SaddleNode) {
        if (m.a() > 0.0) {
            const double r = std::sqrt(m.a());
            return {-r, r};
        }
        if (m.a() == 0.0) return {0.0, kInf};
        return {-kInf, kInf};
    }
    return {0.0, kInf};
}

double default_reference_point(const Interval& iv) {
    if (iv.lo_finite() && iv.hi_finite()) return 0.5 * (iv.lo + iv.hi);
    if (iv.lo_finite()) return iv.lo + 1.0;
    if (iv.hi_finite()) return iv.hi - 1.0;
    return 0.0;
}

double compute_G(const ModelSpec& model, const Interval& interval, double c, double x) {
    ScaleFunctions sf(model, interval, c);
    return sf.G(x);
}

double scale_p(const ModelSpec& model, const Interval& interval, double c, double x) {
    ScaleFunctions sf(model, interval, c);
    return sf.p(x);
}

double scale_v(const ModelSpec& model, const Interval& interval, double c, double x) {
    ScaleFunctions sf(model, interval, c);
    return sf.v(x);
}

namespace {

EndpointReport end_report(ScaleFunctions& sf, const ModelSpec& model, double e, bool is_lo) {
    EndpointReport r;
    r.local = local_form(model, e, is_lo);
    const auto ev = sf.limits(!is_lo);
    const LimitKind p_inf = is_lo ? LimitKind::MinusInfinity : LimitKind::PlusInfinity;
    if (r.local.p_finite) {
        r.p = ev.p;
        if (!ev.p.is_finite()) {
            r.p.kind = LimitKind::Unknown;
            r.p.numerically_confirmed = false;
        }
    } else {
        r.p.kind = p_inf;
        r.p.value = is_lo ? -kInfD : kInfD;
        r.p.numerically_confirmed = ev.p.is_infinite() || !ev.p.numerically_confirmed;
    }
    if (r.local.v_finite) {
        r.v = ev.v;
        if (!ev.v.is_finite()) {
            r.v.kind = LimitKind::Unknown;
            r.v.numerically_confirmed = false;
        }
    } else {
        r.v.kind = LimitKind::PlusInfinity;
        r.v.value = kInfD;
        r.v.numerically_confirmed = ev.v.is_infinite() || !ev.v.numerically_confirmed;
    }
    return r;
}

}  // namespace

BoundaryReport boundary_limits(const ModelSpec& model, const Interval& interval) {
    BoundaryReport br;
    br.interval = interval;
    br.c = default_reference_point(interval);
    ScaleFunctions sf(model, interval, br.c);
    br.lo = end_report(sf, model, interval.lo, true);
    br.hi = end_report(sf, model, interval.hi, false);

    const auto& L = br.lo;
    const auto& R = br.hi;
    if (L.p.kind == LimitKind::Unknown || R.p.kind == LimitKind::Unknown || L.v.kind == LimitKind::Unknown ||
        R.v.kind == LimitKind::Unknown) {
        br.verdict = FellerVerdict::Unknown;
        br.exit_side = "none";
        br.reason = "a boundary limit could not be resolved";
        return br;
    }
    const bool vl = L.v.is_finite(), vr = R.v.is_finite();
    const bool pl_inf = L.p.kind == LimitKind::MinusInfinity;
    const bool pr_inf = R.p.kind == LimitKind::PlusInfinity;
    if (!vl && !vr) {
        br.verdict = FellerVerdict::NoExit;
        br.exit_side = "none";
        br.reason = "v(lo+) = v(hi-) = inf: the exit time is a.s. infinite";
    } else if (vl && vr) {
        br.verdict = FellerVerdict::ExitAlmostSurelyFinite;
        br.exit_side = "either";
        br.reason = "v(lo+) < inf and v(hi-) < inf";
    } else if (vl && pr_inf) {
        br.verdict = FellerVerdict::ExitAlmostSurelyFinite;
        br.exit_side = "lo";
        br.reason = "v(lo+) < inf and p(hi-) = +inf: exit through lo a.s.";
    } else if (vr && pl_inf) {
        br.verdict = FellerVerdict::ExitAlmostSurelyFinite;
        br.exit_side = "hi";
        br.reason = "v(hi-) < inf and p(lo+) = -inf: exit through hi a.s.";
    } else {
        br.verdict = FellerVerdict::ExitWithPositiveProbability;
        br.exit_side = vl ? "lo" : "hi";
        br.reason = "one v limit finite but the opposite p limit finite: exit has probability in (0, 1)";
    }
    return br;
}

ScaleTable scale_table(const ModelSpec& model, const Interval& interval, double c, const std::vector<double>& grid) {
    ScaleTable t;
    t.interval = interval;
    t.c = c;
    ScaleFunctions sf(model, interval, c);
    std::vector<double> xs = grid;
    std::sort(xs.begin(), xs.end());
    for (double x : xs) {
        t.grid.push_back(x);
        t.G_vals.push_back(sf.G(x));
        t.p_vals.push_back(sf.p(x));
        t.v_vals.push_back(sf.v(x));
    }
    t.boundary = boundary_limits(model, interval);
    t.error_estimate = sf.error_estimate();
    return t;
}

double hitting_probability(const ModelSpec& model, double x0, HittingMode mode) {
    if (model.kind() != ModelKind::SaddleNode || !(model.a() > 0.0)) {
        throw InvalidInput("hitting_probability: requires a SaddleNode model with a > 0");
    }
    const double r = std::sqrt(model.a());
    if (!(x0 > -r && x0 < r)) throw InvalidInput("hitting_probability: x0 must lie in (-sqrt(a), sqrt(a))");
    if (mode == HittingMode::Exit && model.alpha() >= 1.0) {
        throw AnalyticRefusal(
            "hitting_probability: for alpha >= 1 the roots are never reached (v infinite at both ends); "
            "use the convergence-probability interpretation");
    }
    const Interval iv{-r, r};
    ScaleFunctions sf(model, iv, 0.0);
    const auto lo = local_form(model, -r, true);
    const auto hi = local_form(model, r, false);
    if (!lo.p_finite && !hi.p_finite) {
        throw AnalyticRefusal("hitting_probability: p diverges at both roots");
    }
    const double px = sf.p(x0);
    if (!lo.p_finite) return 0.0;
    if (!hi.p_finite) return 1.0;
    const auto el = sf.limits(false);
    const auto eh = sf.limits(true);
    if (!el.p.is_finite() || !eh.p.is_finite()) {
        throw NumericalFailure("hitting_probability: endpoint limit of p did not resolve", kInfD);
    }
    const double val = (eh.p.value - px) / (eh.p.value - el.p.value);
    return std::clamp(val, 0.0, 1.0);
}

}  // namespace hsde
