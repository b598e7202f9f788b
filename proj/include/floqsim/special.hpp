#pragma once

#include <functional>

namespace floqsim {

/// Bessel function of the first kind, order zero. Supported for |x| < 50.
double bessel_j0(double x);

/// Root of `f` in [lo, hi] by bisection to an absolute tolerance `tol`.
/// If f(lo) and f(hi) have the same sign the bracket is widened
/// symmetrically up to `max_widen` times before giving up with DomainError.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double tol = 1e-10, int max_widen = 8);

}  // namespace floqsim
