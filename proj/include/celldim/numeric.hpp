#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "celldim/errors.hpp"

namespace celldim {

// Neumaier compensated accumulator. Keeps certified probability masses
// honest when summing long, strongly decaying pmf arrays.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Bisection for the root of f on [lo, hi]; requires a sign change.
// The function need not be monotone: the method converges to some root.
template <class F>
double bisect_root(F&& f, double lo, double hi, double x_tol,
                   int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw BracketError("bisect_root: no sign change over bracket");
  }
  for (int i = 0; i < max_iter && (hi - lo) > x_tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// First downward crossing of `target` by f on [lo, hi]: scans with `step`
// for the first cell where f drops to target or below, then bisects inside
// it. Returns lo immediately when f(lo) <= target; nullopt when f stays
// above target on the whole interval. Used for the corrected tail equations
// of the dimensioning solvers, which are not globally monotone.
template <class F>
std::optional<double> first_downward_crossing(F&& f, double lo, double hi,
                                              double target,
                                              double step = 0.05,
                                              double x_tol = 1e-8) {
  if (f(lo) <= target) return lo;
  double x = lo;
  while (x < hi) {
    const double xn = std::min(x + step, hi);
    if (f(xn) <= target) {
      double a = x;
      double b = xn;
      while (b - a > x_tol) {
        const double mid = 0.5 * (a + b);
        if (f(mid) <= target) {
          b = mid;
        } else {
          a = mid;
        }
      }
      return 0.5 * (a + b);
    }
    x = xn;
  }
  return std::nullopt;
}

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::int64_t evaluations = 0;
};

namespace detail {

template <class F>
void adaptive_simpson_rec(const F& f, double a, double b, double fa,
                          double fm, double fb, double whole, double tol,
                          int depth, QuadratureResult& out) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  out.evaluations += 2;
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) {
    if (std::abs(delta) > 15.0 * tol) {
      throw QuadratureFailure("adaptive_simpson: tolerance unreachable");
    }
    out.value += left + right + delta / 15.0;
    out.error_estimate += std::abs(delta) / 15.0;
    return;
  }
  if (std::abs(delta) <= 15.0 * tol) {
    out.value += left + right + delta / 15.0;
    out.error_estimate += std::abs(delta) / 15.0;
    return;
  }
  adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, out);
  adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, out);
}

}  // namespace detail

// Adaptive Simpson quadrature of f over [a, b] with absolute tolerance.
// Throws QuadratureFailure when the recursion depth is exhausted before the
// local tolerance is met.
template <class F>
QuadratureResult adaptive_simpson(F&& f, double a, double b, double abs_tol,
                                  int max_depth = 48) {
  QuadratureResult out;
  if (a == b) return out;
  const double fa = f(a);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double fb = f(b);
  out.evaluations = 3;
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth,
                               out);
  return out;
}

}  // namespace celldim
