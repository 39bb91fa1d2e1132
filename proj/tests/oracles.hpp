// Test-only reference implementations, kept independent of the library's
// quadrature/FFT paths: composite Simpson on fine fixed grids, closed-form
// densities, and simple statistics.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

/// Composite Simpson with a fixed (even) panel count; no adaptivity shared
/// with the library code.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int panels = 20000) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + h * i) * ((i % 2) ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Log-spaced composite Simpson for integrands with power-law behaviour.
inline double simpson_log(const std::function<double(double)>& f, double a, double b,
                          int panels = 20000) {
  return simpson([&](double u) { const double s = std::exp(u); return f(s) * s; },
                 std::log(a), std::log(b), panels);
}

/// Cauchy density with scale t: the 1-d symmetric 1-stable law whose
/// exponent has unit slope.
inline double cauchy_density(double t, double x) {
  return t / (M_PI * (t * t + x * x));
}

/// Two-sample Kolmogorov-Smirnov statistic (inputs get sorted).
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    const double fa = static_cast<double>(i) / a.size();
    const double fb = static_cast<double>(j) / b.size();
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

/// KS two-sample critical value at level 0.01.
inline double ks_critical_001(std::size_t n, std::size_t m) {
  return 1.628 * std::sqrt((static_cast<double>(n) + m) / (static_cast<double>(n) * m));
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

}  // namespace oracles
