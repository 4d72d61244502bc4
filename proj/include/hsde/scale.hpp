#pragma once

#include "hsde/interval.hpp"
#include "hsde/model.hpp"
#include "hsde/quadrature.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace hsde {

// Feller functions on an interval I free of zeros of gamma, relative to c in I:
//   G(x) = int_c^x f / gamma^2,   p(x) = int_c^x exp(-2G),
//   m(dy) = 2 exp(2G(y)) / gamma(y)^2 dy,   v(x) = int_c^x (p(x) - p(y)) m(dy).

enum class LimitKind { Finite, PlusInfinity, MinusInfinity, Unknown };
std::string_view to_string(LimitKind k);

struct Limit {
    LimitKind kind = LimitKind::Unknown;
    double value = 0.0;   // meaningful for Finite
    double error = 0.0;   // estimated error of value
    bool numerically_confirmed = false;
    bool is_finite() const { return kind == LimitKind::Finite; }
    bool is_infinite() const { return kind == LimitKind::PlusInfinity || kind == LimitKind::MinusInfinity; }
};

enum class EndpointKind { Regular, Singular, Infinite };
std::string_view to_string(EndpointKind k);

/// Leading behaviour at an endpoint e, with u the distance to e (or |x| at infinity):
///   drift pointing away from e (outward at infinity) ~ coef * u^power,
///   gamma ~ noise * u^exponent.
struct LocalForm {
    EndpointKind kind = EndpointKind::Regular;
    double point = 0.0;
    double coef = 0.0;
    double power = 1.0;
    double noise = 0.0;
    double exponent = 0.0;

    bool p_finite = true;
    bool v_finite = true;
    bool m_finite = true;  // speed measure (and stationary density) integrable at e
    std::string rule;
};

/// Analytic local analysis; is_lo tells on which side of the interval e lies.
LocalForm local_form(const ModelSpec& model, double endpoint, bool is_lo);

class ScaleFunctions {
public:
    ScaleFunctions(const ModelSpec& model, const Interval& interval, double c, double tol = 1e-12);

    const ModelSpec& model() const { return model_; }
    const Interval& interval() const { return iv_; }
    double reference() const { return c_; }

    double G(double x);
    double p(double x);
    double v(double x);
    /// M(x) = m((c, x]) (negative for x < c) and its first two moments.
    double M(double x);

    /// Limits of p, v, M and the M moments at one end of the interval.
    struct EndValues {
        Limit p, v, m, m1, m2;
        double reached = 0.0;  // last abscissa integrated
    };
    EndValues limits(bool hi);

    /// Accumulated estimate of the local integration error.
    double error_estimate() const { return err_; }

    /// Drift and diffusion at x, evaluated with full accuracy near the endpoints.
    std::pair<double, double> coefficients(double x) const;

private:
    enum class MapKind { Logistic, Exp, NegExp, Sinh };
    struct Point {
        double x, dx, dlo, dhi;
    };
    enum class Status { Active, Converged, Overflow };
    struct Panel {
        double s_lo, s_hi;
        cheb::Values G, P, V, M, M1, M2;
    };
    static constexpr int kQ = 5;  // P, V, M, M1, M2
    struct Walk {
        int dir = 1;
        double s = 0.0, h = 0.5;
        double G = 0.0, W = 0.0;
        std::array<double, kQ> q{};
        std::array<Status, kQ> status{};
        std::array<double, kQ> tail{};
        std::array<double, kQ> last_rate{};
        std::array<double, kQ> last_mid{};
        std::array<int, kQ> quiet{};
        int panels = 0;
        bool done = false;
        std::vector<Panel> panels_;
    };

    Point at(double s) const;
    double s_of(double x) const;
    std::pair<double, double> coeffs(const Point& p) const;
    bool advance(Walk& w);
    void walk_to(Walk& w, double s);
    double lookup(int which, double x);
    double g_integrand(double s) const;

    ModelSpec model_;
    Interval iv_;
    double c_;
    double s_c_;
    double tol_;
    MapKind map_;
    double s_min_ = -700.0, s_max_ = 700.0;
    std::vector<double> breaks_;
    Walk right_, left_;
    double err_ = 0.0;
};

/// Natural interval for a model: (0, inf) for kinds with singular point 0,
/// (-sqrt a, sqrt a) for SaddleNode with a > 0, the real line for a < 0.
Interval default_interval(const ModelSpec& model);
double default_reference_point(const Interval& interval);

double compute_G(const ModelSpec& model, const Interval& interval, double c, double x);
double scale_p(const ModelSpec& model, const Interval& interval, double c, double x);
double scale_v(const ModelSpec& model, const Interval& interval, double c, double x);

enum class FellerVerdict { ExitAlmostSurelyFinite, NoExit, ExitWithPositiveProbability, Unknown };
std::string_view to_string(FellerVerdict v);

struct EndpointReport {
    LocalForm local;
    Limit p;
    Limit v;
};

struct BoundaryReport {
    Interval interval;
    double c = 0.0;
    EndpointReport lo, hi;
    FellerVerdict verdict = FellerVerdict::Unknown;
    std::string exit_side;  // "lo", "hi", "either" or "none"
    std::string reason;
};

BoundaryReport boundary_limits(const ModelSpec& model, const Interval& interval);

struct ScaleTable {
    Interval interval;
    double c = 0.0;
    std::vector<double> grid, G_vals, p_vals, v_vals;
    BoundaryReport boundary;
    double error_estimate = 0.0;
};

ScaleTable scale_table(const ModelSpec& model, const Interval& interval, double c, const std::vector<double>& grid);

enum class HittingMode { Exit, ConvergenceProbability };
std::string_view to_string(HittingMode m);

/// Probability that the SaddleNode path started at x0 in (-sqrt a, sqrt a)
/// reaches (or, in ConvergenceProbability mode, converges to) -sqrt a first.
double hitting_probability(const ModelSpec& model, double x0, HittingMode mode = HittingMode::Exit);

}  // namespace hsde
