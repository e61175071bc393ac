#pragma once

#include <cmath>
#include <utility>

namespace rrdps {

struct Minimum {
    double x;
    double value;
};

// Golden-section search for a minimum of f on [lo, hi]. Stops when the
// bracket width falls below rel_tol * (|lo| + |hi|) + abs_tol.
template <class F>
Minimum golden_section_minimize(F&& f, double lo, double hi, double rel_tol,
                                double abs_tol = 1e-300, int max_iter = 500)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < max_iter; ++it) {
        if (hi - lo <= rel_tol * (std::abs(lo) + std::abs(hi)) + abs_tol)
            break;
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? Minimum{x1, f1} : Minimum{x2, f2};
}

}  // namespace rrdps
