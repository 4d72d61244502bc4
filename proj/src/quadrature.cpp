#include "hsde/quadrature.hpp"

#include "hsde/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

namespace hsde {

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const Integrand& f, double a, double b, int& evals) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    double resabs = std::fabs(resk);
    std::array<double, 7> f1{}, f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        f1[j] = f(c - dx);
        f2[j] = f(c + dx);
        resk += kWgk[j] * (f1[j] + f2[j]);
        resabs += kWgk[j] * (std::fabs(f1[j]) + std::fabs(f2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * (f1[j] + f2[j]);
    }
    evals += 15;
    const double mean = resk * 0.5;
    double resasc = kWgk[7] * std::fabs(fc - mean);
    for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::fabs(f1[j] - mean) + std::fabs(f2[j] - mean));

    double err = std::fabs((resk - resg) * h);
    resasc *= std::fabs(h);
    resabs *= std::fabs(h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double round = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
    if (resabs > std::numeric_limits<double>::min() / (50.0 * std::numeric_limits<double>::epsilon())) {
        err = std::max(err, round);
    }
    if (!std::isfinite(resk)) err = std::numeric_limits<double>::infinity();
    return {a, b, resk * h, err};
}

QuadResult adapt(const Integrand& f, double a, double b, const QuadOptions& opts) {
    int evals = 0;
    std::priority_queue<Segment> heap;
    Segment first = gk15(f, a, b, evals);
    double total = first.value;
    double total_err = first.error;
    heap.push(first);
    int n = 1;
    auto done = [&] { return total_err <= std::max(opts.abs_tol, opts.rel_tol * std::fabs(total)); };
    while (!done() && n < opts.max_subdivisions) {
        Segment s = heap.top();
        const double mid = 0.5 * (s.a + s.b);
        if (!(mid > s.a && mid < s.b)) break;
        heap.pop();
        Segment l = gk15(f, s.a, mid, evals);
        Segment r = gk15(f, mid, s.b, evals);
        total += l.value + r.value - s.value;
        total_err += l.error + r.error - s.error;
        heap.push(l);
        heap.push(r);
        ++n;
    }
    // re-sum to shed accumulated cancellation in the running totals
    double v = 0.0, e = 0.0;
    while (!heap.empty()) {
        v += heap.top().value;
        e += heap.top().error;
        heap.pop();
    }
    QuadResult res;
    res.value = v;
    res.error = e;
    res.evaluations = evals;
    res.converged = std::isfinite(v) && e <= std::max(opts.abs_tol, opts.rel_tol * std::fabs(v));
    return res;
}

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& opts) {
    if (a == b) return {};
    if (a > b) {
        QuadResult r = integrate(f, b, a, opts);
        r.value = -r.value;
        return r;
    }
    const bool ia = std::isinf(a);
    const bool ib = std::isinf(b);
    if (!ia && !ib) return adapt(f, a, b, opts);
    if (ia && ib) {
        QuadOptions half = opts;
        half.abs_tol *= 0.5;
        QuadResult l = integrate(f, a, 0.0, half);
        QuadResult r = integrate(f, 0.0, b, half);
        return {l.value + r.value, l.error + r.error, l.evaluations + r.evaluations, l.converged && r.converged};
    }
    if (ib) {
        auto g = [&](double t) {
            const double s = 1.0 - t;
            return f(a + t / s) / (s * s);
        };
        return adapt(g, 0.0, 1.0, opts);
    }
    auto g = [&](double t) {
        const double s = 1.0 - t;
        return f(b - t / s) / (s * s);
    };
    return adapt(g, 0.0, 1.0, opts);
}

QuadResult integrate_singular(const Integrand& f, double a, double b, double qa, double qb,
                              const QuadOptions& opts) {
    if (!(qa >= 0.0 && qa < 1.0 && qb >= 0.0 && qb < 1.0)) {
        throw InvalidInput("integrate_singular: endpoint exponents must lie in [0, 1)");
    }
    if (!(std::isfinite(a) && std::isfinite(b))) throw InvalidInput("integrate_singular: finite range required");
    if (a == b) return {};
    const double sign = a < b ? 1.0 : -1.0;
    const double lo = std::min(a, b), hi = std::max(a, b);
    const double qlo = a < b ? qa : qb, qhi = a < b ? qb : qa;
    const double mid = 0.5 * (lo + hi);
    QuadOptions half = opts;
    half.abs_tol *= 0.5;

    auto side = [&](double e, double q, double dir) {
        if (q == 0.0) return dir > 0 ? adapt(f, e, mid, half) : adapt(f, mid, e, half);
        const double k = 1.0 / (1.0 - q);
        const double umax = std::pow(std::fabs(mid - e), 1.0 / k);
        auto g = [&](double u) { return f(e + dir * std::pow(u, k)) * k * std::pow(u, k - 1.0); };
        return adapt(g, 0.0, umax, half);
    };
    QuadResult l = side(lo, qlo, 1.0);
    QuadResult r = side(hi, qhi, -1.0);
    return {sign * (l.value + r.value), l.error + r.error, l.evaluations + r.evaluations,
            l.converged && r.converged};
}

const QuadResult& require_converged(const QuadResult& r, const std::string& what) {
    if (!r.converged) {
        throw NumericalFailure(what + ": quadrature did not converge (achieved error " + std::to_string(r.error) +
                                   ")",
                               r.error);
    }
    return r;
}

namespace cheb {

namespace {

struct Tables {
    std::array<std::array<double, kN + 1>, kN + 1> cum{};  // cum[j][i]: weight of f_i in F(x_j) on [-1,1]
    std::array<std::array<double, kN + 1>, kN + 1> T{};    // T[k][j] = T_k(x_j)
    std::array<double, kN + 1> x{};
};

const Tables& tables() {
    static const Tables t = [] {
        Tables tb;
        const double pi = std::numbers::pi;
        for (int j = 0; j <= kN; ++j) tb.x[j] = -std::cos(pi * j / kN);
        for (int k = 0; k <= kN; ++k) {
            for (int j = 0; j <= kN; ++j) tb.T[k][j] = std::cos(k * std::acos(tb.x[j]));
        }
        for (int i = 0; i <= kN; ++i) {
            Values e{};
            e[i] = 1.0;
            // Chebyshev coefficients of the unit vector
            std::array<double, kN + 2> c{};
            for (int k = 0; k <= kN; ++k) {
                double s = 0.0;
                for (int j = 0; j <= kN; ++j) {
                    const double w = (j == 0 || j == kN) ? 0.5 : 1.0;
                    s += w * e[j] * std::cos(k * std::acos(tb.x[j]));
                }
                c[k] = 2.0 * s / kN;
            }
            c[0] *= 0.5;
            c[kN] *= 0.5;
            // antiderivative coefficients
            std::array<double, kN + 2> B{};
            B[1] = c[0] - 0.5 * c[2];
            for (int k = 2; k <= kN + 1; ++k) {
                const double next = (k + 1 <= kN) ? c[k + 1] : 0.0;
                B[k] = (c[k - 1] - next) / (2.0 * k);
            }
            double b0 = 0.0;
            for (int k = 1; k <= kN + 1; ++k) b0 -= B[k] * ((k % 2 == 0) ? 1.0 : -1.0);
            B[0] = b0;
            for (int j = 0; j <= kN; ++j) {
                const double th = std::acos(tb.x[j]);
                double F = 0.0;
                for (int k = 0; k <= kN + 1; ++k) F += B[k] * std::cos(k * th);
                tb.cum[j][i] = F;
            }
        }
        return tb;
    }();
    return t;
}

}  // namespace

Values nodes(double a, double b) {
    const auto& t = tables();
    Values v{};
    for (int j = 0; j <= kN; ++j) v[j] = 0.5 * (a + b) + 0.5 * (b - a) * t.x[j];
    v[0] = a;
    v[kN] = b;
    return v;
}

Values cumulative(const Values& f, double a, double b) {
    const auto& t = tables();
    Values out{};
    const double h = 0.5 * (b - a);
    for (int j = 1; j <= kN; ++j) {
        double s = 0.0;
        for (int i = 0; i <= kN; ++i) s += t.cum[j][i] * f[i];
        out[j] = h * s;
    }
    return out;
}

double tail_ratio(const Values& f) {
    const auto& t = tables();
    std::array<double, kN + 1> c{};
    double big = 0.0;
    for (int k = 0; k <= kN; ++k) {
        double s = 0.0;
        for (int j = 0; j <= kN; ++j) {
            const double w = (j == 0 || j == kN) ? 0.5 : 1.0;
            s += w * f[j] * t.T[k][j];
        }
        c[k] = std::fabs(2.0 * s / kN) * ((k == 0 || k == kN) ? 0.5 : 1.0);
        big = std::max(big, c[k]);
    }
    if (big == 0.0) return 0.0;
    if (!std::isfinite(big)) return std::numeric_limits<double>::infinity();
    return std::max(c[kN], c[kN - 1]) / big;
}

double interpolate(const Values& f, double a, double b, double x) {
    const auto& t = tables();
    const double u = (2.0 * x - a - b) / (b - a);
    double num = 0.0, den = 0.0;
    for (int j = 0; j <= kN; ++j) {
        const double d = u - t.x[j];
        if (d == 0.0) return f[j];
        double w = (j % 2 == 0) ? 1.0 : -1.0;
        if (j == 0 || j == kN) w *= 0.5;
        w /= d;
        num += w * f[j];
        den += w;
    }
    return num / den;
}

}  // namespace cheb

}  // namespace hsde
