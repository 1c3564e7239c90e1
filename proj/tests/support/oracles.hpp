#pragma once

// Slow, independent reference implementations used only by tests. These
// deliberately avoid the library's own algorithms: integration is adaptive
// Simpson, inverses are bisection, and expansions are brute force.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ged/special_functions.hpp"

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b) {
  const double m = 0.5 * (a + b);
  return (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                                   double b, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = simpson(f, a, m);
  const double right = simpson(f, m, b);
  const double delta = left + right - whole;
  if (depth <= 0) return left + right + delta / 15.0;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
  return adaptive_simpson_rec(f, a, b, simpson(f, a, b), tol, 48);
}

// Integral over [a, inf) for integrands with a decaying tail: fixed blocks
// of growing width until a block contributes nothing.
inline double integrate_to_inf(const std::function<double(double)>& f, double a,
                               double tol = 1e-12) {
  double total = 0.0;
  double lo = a;
  double width = 1.0;
  for (int block = 0; block < 200; ++block) {
    const double part = integrate(f, lo, lo + width, tol);
    total += part;
    if (block > 2 && std::abs(part) < tol * std::max(1.0, std::abs(total))) break;
    lo += width;
    width *= 1.5;
  }
  return total;
}

// Laguerre polynomial L_m(z) by direct expansion; also reports the sum of
// absolute terms so callers can scale tolerances by the conditioning.
inline double laguerre(int m, double z, double* abs_sum = nullptr) {
  double binom = 1.0;  // C(m, k)
  double zk = 1.0, kfact = 1.0;
  double sum = 0.0, asum = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double term = ((k % 2 == 0) ? 1.0 : -1.0) * binom * zk / kfact;
    sum += term;
    asum += std::abs(term);
    binom *= static_cast<double>(m - k) / (k + 1);
    zk *= z;
    kfact *= (k + 1);
  }
  if (abs_sum) *abs_sum = asum;
  return sum;
}

// Modified Bessel I0 (series for x <= 15, asymptotic beyond); used by the
// envelope goodness-of-fit check. Accuracy ~1e-12, plenty for binning.
inline double bessel_i0(double x) {
  x = std::abs(x);
  if (x <= 15.0) {
    double term = 1.0, sum = 1.0;
    const double q = 0.25 * x * x;
    for (int k = 1; k < 300; ++k) {
      term *= q / (static_cast<double>(k) * k);
      sum += term;
      if (term < sum * 1e-17) break;
    }
    return sum;
  }
  double sum = 1.0, term = 1.0;
  for (int k = 1; k < 12; ++k) {
    term *= (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * x * k);
    sum += term;
  }
  return std::exp(x) / std::sqrt(2.0 * 3.141592653589793 * x) * sum;
}

// Bisection inverse of a strictly decreasing function.
inline double bisect_decreasing(const std::function<double(double)>& f, double target,
                                double lo, double hi, double tol = 1e-13) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < tol) break;
  }
  return 0.5 * (lo + hi);
}

// E[(A + G B)^{n/2}] for G ~ Exp(1) in closed form:
// e^{A/B} B^{n/2} Gamma(n/2 + 1, A/B); valid for every n > -2.
inline double laplacian_signal_moment(double n, double A, double B) {
  return std::pow(B, 0.5 * n) * ged::upper_incomplete_gamma_scaled(0.5 * n + 1.0, A / B);
}

}  // namespace oracle
