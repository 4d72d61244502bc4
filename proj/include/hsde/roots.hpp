#pragma once

#include <functional>

namespace hsde {

/// Bisection on [lo, hi]; f(lo) and f(hi) must differ in sign. Stops when the
/// bracket is narrower than rel_tol * |midpoint| (or abs_tol). Throws
/// NumericalFailure if the bracket holds no sign change.
double bisect(const std::function<double(double)>& f, double lo, double hi, double rel_tol = 1e-15,
              double abs_tol = 0.0, int max_iter = 400);

}  // namespace hsde
