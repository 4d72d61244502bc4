#include "hsde/roots.hpp"

#include "hsde/error.hpp"

#include <cmath>

namespace hsde {

double bisect(const std::function<double(double)>& f, double lo, double hi, double rel_tol, double abs_tol,
              int max_iter) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::isnan(flo) || std::isnan(fhi) || std::signbit(flo) == std::signbit(fhi)) {
        throw NumericalFailure("bisect: no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]",
                               std::fabs(hi - lo));
    }
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) return mid;
        if (hi - lo <= std::max(abs_tol, rel_tol * std::fabs(mid))) return mid;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace hsde
