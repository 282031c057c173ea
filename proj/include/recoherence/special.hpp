#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace recoherence {

// Spherical Bessel function j2.  Series below the cancellation-prone
// region, closed form elsewhere.
inline double spherical_j2(double x) {
  const double ax = std::abs(x);
  if (ax < 0.5) {
    // j2(x) = x^2/15 * (1 - x^2/14 + x^4/504 - ...); nested factors are
    // (x^2/2)/(k (2k+5)), carried far enough that the truncation sits
    // below double roundoff on the whole branch
    const double x2 = x * x;
    return x2 / 15.0 *
           (1.0 -
            x2 / 14.0 *
                (1.0 -
                 x2 / 36.0 *
                     (1.0 -
                      x2 / 66.0 *
                          (1.0 -
                           x2 / 104.0 *
                               (1.0 - x2 / 150.0 * (1.0 - x2 / 204.0))))));
  }
  return ((3.0 / (x * x) - 1.0) * std::sin(x) - 3.0 * std::cos(x) / x) / x;
}

// Cylindrical Bessel J0 (used for classical sinusoidal phase averaging).
inline double bessel_j0(double x) { return std::cyl_bessel_j(0.0, std::abs(x)); }

// First positive zero of J0.
inline constexpr double bessel_j0_first_zero = 2.4048255576957728;

// Brent's method on a bracketing interval [a, b] with f(a)*f(b) <= 0.
inline double find_root_brent(const std::function<double(double)>& f, double a,
                              double b, double tol = 1e-14,
                              int max_iter = 200) {
  double fa = f(a);
  double fb = f(b);
  if (fa * fb > 0.0)
    throw std::invalid_argument("find_root_brent: interval does not bracket a root");
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < max_iter; ++iter) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // inverse quadratic interpolation, falling back to secant
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  return b;
}

// n-th positive zero of j2 (n = 1, 2, ...), by bracketing between
// successive multiples of pi past the first sign change.
inline double spherical_j2_zero(int n) {
  if (n < 1) throw std::invalid_argument("spherical_j2_zero: n must be >= 1");
  const double step = 0.5;
  double lo = 3.0; // j2 > 0 on (0, ~5.76)
  double flo = spherical_j2(lo);
  int found = 0;
  for (double hi = lo + step; hi < 1000.0; hi += step) {
    const double fhi = spherical_j2(hi);
    if (flo * fhi <= 0.0) {
      ++found;
      if (found == n)
        return find_root_brent([](double x) { return spherical_j2(x); }, lo, hi);
    }
    lo = hi;
    flo = fhi;
  }
  throw std::runtime_error("spherical_j2_zero: search exhausted");
}

} // namespace recoherence
