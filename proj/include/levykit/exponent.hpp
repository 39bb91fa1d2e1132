#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <vector>

#include "levykit/model.hpp"

namespace levykit {

/// Radial window of the Levy measure used by an exponent evaluation:
/// radii in [lo, hi) with the jump compensator active on s < comp.
/// Defaults reproduce the full exponent (comp = 1, the unit-ball cutoff).
struct RadialWindow {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  double comp = 1.0;
  bool full() const { return lo == 0.0 && !std::isfinite(hi) && comp == 1.0; }
};

/// J(w) = \int_lo^hi (e^{iws} - 1 - iws 1_{s<comp}) s^{-1-alpha} q phi ds,
/// the per-unit-spectral-mass radial factor of the exponent. The inner
/// region uses the cancellation-free compensated integrand; past the
/// oscillation scale 1/w the trigonometric parts integrate between the
/// zeros of sin/cos with series acceleration for the infinite tail.
std::complex<double> radial_cf_integral(double alpha, const RadialProfile& prof,
                                        const RadialWindow& win, double w,
                                        double abs_tol = 1e-10);

/// Real part alone: \int_lo^hi (cos(ws) - 1) s^{-1-alpha} q phi ds.
double radial_cos_integral(double alpha, const RadialProfile& prof, double lo,
                           double hi, double w, double abs_tol = 1e-10);

/// Levy-Khinchin exponent by radial-angular quadrature:
///   Phi(xi) = -sum_a mu_a J(<xi, theta_a>) - i <xi, b>.
std::complex<double> evaluate_exponent(const LevyModel& m, const Vec& xi,
                                       double abs_tol = 1e-10);

/// Closed form for q = phi = 1 (strictly stable normalization):
///   a_alpha \int |<xi,theta>|^alpha (1 - i tan(pi alpha/2) sgn<xi,theta>) mu(dtheta)
/// and the log form at alpha = 1, which requires \int theta mu = 0.
std::complex<double> stable_exponent_closed_form(const SpectralMeasure& mu, double alpha,
                                                 const Vec& xi);

/// a_alpha = pi / (2 sin(pi alpha / 2) Gamma(1 + alpha)).
double stable_prefactor(double alpha);

/// Interpolated table of J(w) on a log-spaced |w| grid, for lattice fills.
/// Below the table range a second-order small-w expansion is used when the
/// radial moments exist, else direct quadrature.
class ExponentTable {
 public:
  ExponentTable(double alpha, const RadialProfile& prof, const RadialWindow& win,
                double w_max, double abs_tol = 1e-10, int per_decade = 256);
  std::complex<double> eval(double w) const;
  double w_max() const { return w_max_; }

 private:
  std::complex<double> small_w(double w) const;
  double alpha_;
  RadialProfile prof_;
  RadialWindow win_;
  double tol_;
  double w_min_ = 0.0, w_max_ = 0.0, v0_ = 0.0, dv_ = 0.0;
  std::vector<double> re_, im_;
  double m2_ = 0.0, m1_tail_ = 0.0, m3_ = 0.0;
  bool moments_ok_ = false;
};

/// Exponent evaluator for lattice fills: closed form for stable models on
/// the full window, interpolated quadrature table otherwise.
class ExponentEvaluator {
 public:
  ExponentEvaluator(const LevyModel& m, double w_max, double abs_tol = 1e-10,
                    RadialWindow win = {});
  std::complex<double> operator()(const Vec& xi) const;
  bool closed_form() const { return closed_form_; }
  const LevyModel& model() const { return model_; }
  const RadialWindow& window() const { return win_; }

 private:
  LevyModel model_;
  RadialWindow win_;
  bool closed_form_ = false;
  Vec drift_adjust_;  // b - b_strict for the closed form; b for the table path
  std::shared_ptr<const ExponentTable> table_;
};

struct LowerBoundFit {
  double c_lower = 0.0;  // inf of Re Phi / (|xi|^alpha ∧ |xi|^beta)
  Vec argmin;
  bool pass = false;
};

/// Grid infimum certificate for Re Phi(xi) >= c (|xi|^alpha ∧ |xi|^beta).
/// Stores c_lower on the model. Degenerate spectral measures drive the
/// infimum to zero and fail.
LowerBoundFit verify_lower_bound(const LevyModel& m, const std::vector<Vec>& xi_grid,
                                 double abs_tol = 1e-10);
LowerBoundFit verify_lower_bound(const LevyModel& m);

/// |F(P~^r_t)(xi)| for the r-truncated, fully compensated semigroup, plus
/// the certified majorant exp(-t Re Phi(xi)) exp(2 t |nu_bar_r|).
struct TruncatedModulus {
  double modulus = 0.0;
  double majorant = 0.0;
};
TruncatedModulus truncated_exponent_modulus(const LevyModel& m, double r, double t,
                                            const Vec& xi, double abs_tol = 1e-10);

/// Phi sampled on the centered frequency lattice xi_k = (k - n/2) * dxi,
/// Hermitian-symmetrized, with Phi(0) = 0 exactly.
struct CharExponentGrid {
  int dim = 1;
  std::size_t n = 0;  // per axis, power of two
  double xi_extent = 0.0;
  std::string model_hash;
  double tol = 0.0;
  std::vector<std::complex<double>> values;
  double dxi() const { return 2.0 * xi_extent / static_cast<double>(n); }
};

CharExponentGrid make_exponent_grid(const ExponentEvaluator& ev, int dim, std::size_t n,
                                    double xi_extent, const std::string& model_hash,
                                    double tol = 1e-10);

/// Binary cache for exponent grids (keyed externally by model hash and
/// grid geometry). Loading verifies the stored key fields.
void save_exponent_grid(const CharExponentGrid& g, const std::string& path);
std::optional<CharExponentGrid> load_exponent_grid(const std::string& path,
                                                   const std::string& model_hash,
                                                   int dim, std::size_t n,
                                                   double xi_extent);

}  // namespace levykit
