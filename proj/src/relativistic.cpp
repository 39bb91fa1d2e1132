#include "levykit/relativistic.hpp"

#include <cmath>
#include <stdexcept>

#include "levykit/common.hpp"
#include "levykit/quadrature.hpp"

namespace levykit {

namespace {

void check_args(int d, double alpha, double s) {
  if (d < 1) throw std::invalid_argument("relativistic_kernel: d >= 1 required");
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("relativistic_kernel: alpha in (0,2) required");
  if (!(s > 0.0)) throw std::invalid_argument("relativistic_kernel: s > 0 required");
}

}  // namespace

double relativistic_kernel_limit0(int d, double alpha) {
  const double nu = 0.5 * (d + alpha);
  return std::pow(2.0, d + alpha) * std::tgamma(nu);
}

double relativistic_kernel_asymptote(int d, double alpha, double s) {
  return std::pow(1.0 + s, 0.5 * (d + alpha - 1.0)) * std::exp(-s);
}

// After u = s^2/(4v) the kernel becomes
//   K(s) = 2^{d+alpha} \int_0^inf v^{nu-1} e^{-v - s^2/(4v)} dv,  nu = (d+alpha)/2,
// which we integrate with v = e^z. For large s the further substitution
// v = (s/2) e^z gives K(s) = 2^{d+alpha} (s/2)^nu e^{-s} I(s) with
//   I(s) = \int e^{nu z} e^{-s(cosh z - 1)} dz,
// an O(1) integrand that keeps everything finite in log space.
double relativistic_kernel_log(int d, double alpha, double s) {
  check_args(d, alpha, s);
  const double nu = 0.5 * (d + alpha);
  const double log2f = (d + alpha) * std::log(2.0);
  if (s <= 2.0) {
    const double vlo = std::max(1e-300, s * s / 220.0);
    const double vhi = 60.0 + 12.0 * nu;
    auto f = [&](double v) {
      return std::pow(v, nu - 1.0) * std::exp(-v - s * s / (4.0 * v));
    };
    const double val = quad::integrate_log(f, vlo, vhi, 1e-13).value;
    return log2f + std::log(val);
  }
  const double zm = std::acosh(1.0 + 55.0 / s) + 1.0;
  auto g = [&](double z) { return std::exp(nu * z - s * (std::cosh(z) - 1.0)); };
  const double ival = quad::integrate(g, -zm, zm, 1e-13).value;
  return log2f + nu * std::log(0.5 * s) - s + std::log(ival);
}

double relativistic_kernel(int d, double alpha, double s) {
  return std::exp(relativistic_kernel_log(d, alpha, s));
}

}  // namespace levykit
