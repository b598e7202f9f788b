#include "floqsim/special.hpp"

#include "floqsim/error.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace floqsim {

namespace {

double j0_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 80; ++k) {
    term *= -q / (static_cast<double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) + 1e-300) break;
  }
  return sum;
}

// Miller's algorithm: run J_{n-1} = (2n/x) J_n - J_{n+1} downward from far
// above the turning point, then fix the scale with J0 + 2 sum J_2k = 1.
double j0_miller(double x) {
  const int start = 2 * ((static_cast<int>(x + 20.0 + 4.0 * std::sqrt(x)) + 1) / 2);
  double next = 0.0;
  double cur = 1e-300;
  double norm = 0.0;
  double j0 = 0.0;
  for (int n = start; n >= 1; --n) {
    const double prev = (2.0 * n / x) * cur - next;
    next = cur;
    cur = prev;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
    }
    if ((n - 1) % 2 == 0 && n - 1 > 0) norm += 2.0 * cur;
  }
  j0 = cur;
  norm += j0;
  return j0 / norm;
}

}  // namespace

double bessel_j0(double x) {
  if (!std::isfinite(x)) throw DomainError("bessel_j0: non-finite argument");
  const double ax = std::abs(x);
  if (ax >= 50.0) {
    throw DomainError("bessel_j0: |x| = " + std::to_string(ax) + " outside supported range");
  }
  if (ax <= 8.0) return j0_series(ax);
  return j0_miller(ax);
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol,
                   int max_widen) {
  if (!(lo < hi)) throw DomainError("bisect_root: empty bracket");
  double flo = f(lo);
  double fhi = f(hi);
  for (int k = 0; flo * fhi > 0.0; ++k) {
    if (k == max_widen) throw DomainError("bisect_root: root not bracketed");
    const double width = hi - lo;
    lo -= 0.5 * width;
    hi += 0.5 * width;
    flo = f(lo);
    fhi = f(hi);
  }
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace floqsim
