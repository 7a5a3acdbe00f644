#include "catlab/quadrature.hpp"

#include <cmath>

#include "catlab/error.hpp"
#include "catlab/format.hpp"

namespace catlab {

namespace {

struct Simpson {
  const std::function<double(double)>& f;

  double step(double a, double fa, double m, double fm, double b, double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) {
      return left + right + delta / 15.0;
    }
    if (depth <= 0) raise(ErrorCode::NoConvergence, "adaptive quadrature did not reach tolerance");
    return step(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
           step(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
  }
};

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol) {
  if (!(abs_tol > 0.0)) raise(ErrorCode::InvalidArgument, "quadrature tolerance must be positive");
  if (a == b) return 0.0;
  if (b < a) return -integrate(f, b, a, abs_tol);
  Simpson s{f};
  // Split into a few panels first so narrow features are not missed by the
  // first Simpson estimate.
  constexpr int kPanels = 8;
  double total = 0.0;
  for (int k = 0; k < kPanels; ++k) {
    const double lo = a + (b - a) * k / kPanels;
    const double hi = k + 1 == kPanels ? b : a + (b - a) * (k + 1) / kPanels;
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo), fmid = f(mid), fhi = f(hi);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    total += s.step(lo, flo, mid, fmid, hi, fhi, whole, abs_tol / kPanels, 48);
  }
  if (!std::isfinite(total)) raise(ErrorCode::NoConvergence, "integrand is not finite on the interval");
  return total;
}

double bisect_increasing(const std::function<double(double)>& g, double target, double lo, double hi,
                         double residual_tol) {
  double glo = g(lo), ghi = g(hi);
  if (!(glo <= target && target <= ghi)) {
    raise(ErrorCode::InvalidArgument, "target " + format_double(target) + " not bracketed by [" + format_double(glo) +
                                          ", " + format_double(ghi) + "]");
  }
  if (std::abs(glo - target) <= residual_tol) return lo;
  if (std::abs(ghi - target) <= residual_tol) return hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return mid;
    const double gm = g(mid);
    if (std::abs(gm - target) <= residual_tol) return mid;
    (gm < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace catlab
