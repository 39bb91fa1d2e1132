#include "levykit/bound_shapes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "levykit/common.hpp"
#include "levykit/quadrature.hpp"

namespace levykit {

double h_scale(double t, double alpha, double beta) {
  if (!(t > 0.0)) throw std::invalid_argument("h_scale: t > 0 required");
  return std::min(std::pow(t, 1.0 / alpha), std::pow(t, 1.0 / beta));
}

double g_profile(double s, double c2, double c3) {
  if (!(s >= 0.0)) throw std::invalid_argument("g_profile: s >= 0 required");
  return std::exp(-c2 * s * std::log1p(c3 * s));
}

double density_upper_bound(const LevyModel& m, double t, double r,
                           const BoundParams& p) {
  if (!(t > 0.0)) throw std::invalid_argument("density_upper_bound: t > 0 required");
  if (!(r >= 0.0)) throw std::invalid_argument("density_upper_bound: r >= 0 required");
  const double d = static_cast<double>(m.dim());
  const double a = m.alpha(), b = m.beta(), g = m.gamma();
  if (t <= 1.0) {
    double minterm = 1.0;
    if (r > 0.0) {
      const double shape = std::pow(t, 1.0 + g / a) * std::pow(r, -g - a) *
                           m.profile().q(r) * m.profile().phi(0.25 * r);
      minterm = std::min(1.0, shape);
    }
    return p.c * std::pow(t, -d / a) * minterm;
  }
  double minterm = 1.0;
  if (r > 0.0) {
    const double shape = std::pow(t, 1.0 + g / b) * std::pow(r, -g - a) *
                         m.profile().q(r) * m.profile().phi(0.25 * r);
    minterm = std::min(1.0, shape);
  }
  const double s = std::pow(t, -1.0 / b) * r;
  return p.c1 * std::pow(t, -d / b) * (minterm + g_profile(s, p.c2, p.c3));
}

double bounded_support_tail_bound(double a, double r, double M, double xi0, int d) {
  if (d < 1) throw std::invalid_argument("bounded_support_tail_bound: d >= 1");
  const double sd = std::sqrt(static_cast<double>(d));
  const double threshold = 2.0 * sd * (xi0 + M / M_E);
  if (!(a >= threshold)) {
    std::ostringstream os;
    os << "bounded_support_tail_bound: a = " << a << " below the claimed range a >= "
       << threshold;
    throw std::invalid_argument(os.str());
  }
  return 2.0 * d * std::exp(-a / (2.0 * sd * (r + 1.0)) * std::log(a / (2.0 * sd * M)));
}

double bounded_support_density_bound(double x_norm, double r, double M, double xi0,
                                     double m0, double m1, int d,
                                     const BoundParams& p) {
  if (d < 1) throw std::invalid_argument("bounded_support_density_bound: d >= 1");
  const double sd = std::sqrt(static_cast<double>(d));
  const double threshold =
      std::max(4.0 * sd * (xi0 + M / M_E), m0 / (m1 * sd));
  if (!(x_norm > threshold)) {
    std::ostringstream os;
    os << "bounded_support_density_bound: |x| = " << x_norm
       << " below the claimed range |x| > " << threshold;
    throw std::invalid_argument(os.str());
  }
  const double dd = static_cast<double>(d);
  return p.c1 * std::pow(m1, dd / (dd + 1.0)) *
         std::exp(-p.c2 * x_norm / (r + 1.0) * std::log(p.c3 * x_norm / M));
}

double convolution_power_bound(const LevyModel& m, double r, int n,
                               const SetDescriptor& A, double c, double psi_r) {
  if (n < 1) throw std::invalid_argument("convolution_power_bound: n >= 1 required");
  if (psi_r < 0.0) psi_r = tail_mass_psi(m, r).psi;
  const double g = m.gamma(), a = m.alpha();
  double core;
  if (A.kind == SetDescriptor::Kind::annulus) {
    if (!(A.delta > 0.0))
      throw std::invalid_argument("convolution_power_bound: delta(A) > 0 required");
    core = std::pow(A.delta, -g - a) * m.profile().q(A.delta) *
           m.profile().phi(0.5 * A.delta) * std::pow(A.diam, g);
  } else {
    if (!(A.rho < 0.5 * A.x_norm))
      throw std::invalid_argument("convolution_power_bound: rho < |x|/2 required");
    core = std::pow(A.x_norm, -g - a) * m.profile().q(A.x_norm) *
           m.profile().phi(0.25 * A.x_norm) * std::pow(A.rho, g);
  }
  return std::pow(c, n) * std::pow(psi_r, n - 1) * core;
}

double large_jump_ball_bound(const LevyModel& m, double r, double t, double x_norm,
                             double rho, double c, double psi_r, double nu_bar_r) {
  if (!(t > 0.0)) throw std::invalid_argument("large_jump_ball_bound: t > 0 required");
  if (!(rho < 0.5 * x_norm))
    throw std::invalid_argument("large_jump_ball_bound: rho < |x|/2 required");
  if (psi_r < 0.0 || nu_bar_r < 0.0) {
    const TailMass tm = tail_mass_psi(m, r);
    psi_r = tm.psi;
    nu_bar_r = tm.nu_bar;
  }
  const double g = m.gamma(), a = m.alpha();
  return c * t * std::exp(t * (c * psi_r - nu_bar_r)) * std::pow(x_norm, -g - a) *
         m.profile().q(x_norm) * m.profile().phi(0.25 * x_norm) * std::pow(rho, g);
}

double truncated_density_bound(const LevyModel& m, double t, double x_norm,
                               const BoundParams& p) {
  const double h = h_scale(t, m.alpha(), m.beta());
  return p.c1 * std::pow(h, -static_cast<double>(m.dim())) *
         g_profile(x_norm / h, p.c2, p.c3);
}

TailIntegralReport tail_integral_check(const std::function<double(double)>& f,
                                       double a_pow, double v_pow, double r0, double c1,
                                       const std::vector<double>& r_grid) {
  if (!(a_pow > v_pow) || !(v_pow >= 0.0))
    throw std::invalid_argument("tail_integral_check: need a > v >= 0");
  TailIntegralReport rep;
  rep.r_grid = r_grid;
  rep.hypothesis_ok = true;

  auto weighted = [&](double s) { return std::pow(s, a_pow) * f(s); };
  for (double r : r_grid) {
    if (!(r >= r0)) throw std::invalid_argument("tail_integral_check: grid below r0");
    const double lhs = quad::integrate_log(weighted, r * 1e-12, r, 1e-12).value;
    if (lhs > c1 * std::pow(r, v_pow) * (1.0 + 1e-9)) {
      rep.hypothesis_ok = false;
      break;
    }
  }
  if (!rep.hypothesis_ok) return rep;

  rep.conclusion_ok = true;
  for (double r : r_grid) {
    double tail = 0.0, b0 = r, b1 = 2.0 * r, prev = 1e308;
    bool converged = false;
    for (int k = 0; k < 70 && !converged; ++k) {
      const double inc = quad::integrate_log(f, b0, b1, 1e-13).value;
      tail += inc;
      if (inc < 1e-13 && inc <= 0.6 * prev) converged = true;
      prev = std::max(inc, 1e-300);
      b0 = b1;
      b1 *= 2.0;
    }
    if (!converged) throw NumericError("tail_integral_check: tail did not settle");
    const double bound = c1 * a_pow / (a_pow - v_pow) * std::pow(r, v_pow - a_pow);
    rep.tail.push_back(tail);
    rep.bound.push_back(bound);
    rep.worst_margin = std::max(rep.worst_margin, bound > 0 ? tail / bound : 1e308);
    if (tail > bound * (1.0 + 1e-9)) rep.conclusion_ok = false;
  }
  return rep;
}

}  // namespace levykit
