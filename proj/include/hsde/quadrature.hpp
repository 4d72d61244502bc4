#pragma once

#include <array>
#include <functional>
#include <string>

namespace hsde {

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 4000;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    bool converged = true;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) on [a, b]. Either end may be
/// infinite; infinite ranges are mapped to [0, 1) by x = a + t / (1 - t).
QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& opts = {});

/// Finite [a, b] where f ~ |x - a|^{-qa} near a and |x - b|^{-qb} near b
/// (0 <= q < 1). Uses x = a + u^k, k = 1 / (1 - q) on each half.
QuadResult integrate_singular(const Integrand& f, double a, double b, double qa, double qb,
                              const QuadOptions& opts = {});

/// Throws NumericalFailure carrying the achieved error if r did not converge.
const QuadResult& require_converged(const QuadResult& r, const std::string& what);

/// Clenshaw-Curtis panels: values at the 17 Chebyshev points of [a, b] in
/// increasing order (node 0 = a, node 16 = b).
namespace cheb {

constexpr int kN = 16;
using Values = std::array<double, kN + 1>;

Values nodes(double a, double b);

/// Integral from a to each node.
Values cumulative(const Values& f, double a, double b);

/// Size of the two highest Chebyshev coefficients relative to the largest.
double tail_ratio(const Values& f);

/// Barycentric interpolation at x in [a, b].
double interpolate(const Values& f, double a, double b, double x);

}  // namespace cheb

}  // namespace hsde
