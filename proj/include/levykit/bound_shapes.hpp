#pragma once

#include <functional>
#include <vector>

#include "levykit/model.hpp"

namespace levykit {

/// h(t) = t^{1/alpha} ∧ t^{1/beta}.
double h_scale(double t, double alpha, double beta);

/// Fitted constants of the bound evaluators. The defaults (all 1) give the
/// bare shape used for fitting.
struct BoundParams {
  double c = 1.0;   // small-t prefactor
  double c1 = 1.0;  // large-t / truncated-density prefactor
  double c2 = 1.0;  // decay rate inside g
  double c3 = 1.0;  // log scale inside g
};

/// g(s) = exp(-c2 s log(1 + c3 s)): the super-exponential tail profile of
/// the truncated density.
double g_profile(double s, double c2, double c3);

/// Transition-density upper bound at radius r in the recentered frame:
///   t <= 1:  c  t^{-d/a} min{1, t^{1+g/a} r^{-g-a} q(r) phi(r/4)}
///   t >  1:  c1 t^{-d/b} (min{1, t^{1+g/b} r^{-g-a} q(r) phi(r/4)}
///                          + g(t^{-1/b} r)).
/// r = 0 returns the on-diagonal branch.
double density_upper_bound(const LevyModel& m, double t, double r,
                           const BoundParams& p = {});

/// Tail bound for a bounded-support infinitely divisible law:
///   2d exp(-(a / (2 sqrt(d) (r+1))) log(a / (2 sqrt(d) M)))
/// valid for a >= 2 sqrt(d)(xi0 + M/e); below that threshold the bound is
/// not claimed and the call throws std::invalid_argument.
double bounded_support_tail_bound(double a, double r, double M, double xi0, int d);

/// Density bound for the same law, with measured sup-density m0 and
/// sup-gradient m1:
///   c1 m1^{d/(d+1)} exp(-(c2 |x| / (r+1)) log(c3 |x| / M)),
/// claimed for |x| > max{4 sqrt(d)(xi0 + M/e), m0/(m1 sqrt(d))}.
double bounded_support_density_bound(double x_norm, double r, double M, double xi0,
                                     double m0, double m1, int d,
                                     const BoundParams& p = {});

/// Target set for the convolution-power bound.
struct SetDescriptor {
  enum class Kind { annulus, ball } kind = Kind::annulus;
  double delta = 0.0;   // dist(0, A)      (annulus)
  double diam = 0.0;    // diam(A)         (annulus)
  double x_norm = 0.0;  // |center|        (ball)
  double rho = 0.0;     // radius          (ball, requires rho < |x|/2)
};

/// n-fold convolution bound for the r-tail measure:
///   annulus: c^n psi(r)^{n-1} delta^{-g-a} q(delta) phi(delta/2) diam^g
///   ball:    c^n psi(r)^{n-1} |x|^{-g-a}  q(|x|)  phi(|x|/4)  rho^g.
/// psi_r may be supplied to avoid recomputing tail_mass_psi.
double convolution_power_bound(const LevyModel& m, double r, int n,
                               const SetDescriptor& A, double c = 1.0,
                               double psi_r = -1.0);

/// Ball bound for the large-jump compound Poisson law at time t:
///   c t e^{t (c psi(r) - |nu_bar_r|)} |x|^{-g-a} q(|x|) phi(|x|/4) rho^g,
/// requires rho < |x|/2.
double large_jump_ball_bound(const LevyModel& m, double r, double t, double x_norm,
                             double rho, double c = 1.0, double psi_r = -1.0,
                             double nu_bar_r = -1.0);

/// Truncated-density bound c1 h(t)^{-d} g(|x|/h(t)).
double truncated_density_bound(const LevyModel& m, double t, double x_norm,
                               const BoundParams& p = {});

struct TailIntegralReport {
  bool hypothesis_ok = false;  // \int_0^r s^a f <= c1 r^v held on the grid
  bool conclusion_ok = false;  // \int_r^inf f <= (c1 a/(a-v)) r^{v-a} held
  double worst_margin = 0.0;   // max tail / bound over the grid
  std::vector<double> r_grid, tail, bound;
};

/// Checks the weighted-tail implication: if \int_0^r s^a f(s) ds <= c1 r^v
/// on the grid (a > v >= 0), then \int_r^inf f <= (c1 a / (a - v)) r^{v-a}.
/// Both sides evaluated by quadrature; no claim when the hypothesis fails.
TailIntegralReport tail_integral_check(const std::function<double(double)>& f,
                                       double a_pow, double v_pow, double r0, double c1,
                                       const std::vector<double>& r_grid);

}  // namespace levykit
