#pragma once

#include <functional>
#include <vector>

namespace levykit::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;   // achieved absolute error estimate
  std::size_t evals = 0;
};

/// Adaptive Gauss–Kronrod 7/15 on a finite interval. Splits the worst
/// panel until the summed error estimate is below abs_tol. Throws
/// NumericError (with the achieved residual) if the panel budget runs out.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, std::size_t max_panels = 4000);

/// Same integral computed after the substitution s = e^u; requires a > 0.
/// Suited to integrands with power-law behaviour at either end.
Result integrate_log(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, std::size_t max_panels = 4000);

/// ∫_a^∞ f(s) ds, a > 0, for f ≥ 0 with a caller-supplied tail majorant:
/// tail_bound(b) must dominate ∫_b^∞ f. The finite upper limit is pushed
/// out geometrically until the majorant drops below abs_tol / 2.
Result integrate_tail(const std::function<double(double)>& f, double a,
                      const std::function<double(double)>& tail_bound,
                      double abs_tol);

/// ∫_a^b f(s)·trig(w s) ds with trig = sin (sine = true) or cos, w > 0 and
/// f ≥ 0 nonincreasing. Integrates half-period panels between the zeros of
/// the trig factor; an infinite b is handled by accelerating the resulting
/// alternating series.
Result oscillatory(const std::function<double(double)>& f, double w, bool sine,
                   double a, double b, double abs_tol);

/// Σ_{k≥0} (−1)^k a_k for a_k ≥ 0 (decreasing), from the first n terms,
/// by Chebyshev-polynomial acceleration. Geometric convergence in n.
double alternating_series(const std::vector<double>& terms_abs);

}  // namespace levykit::quad
