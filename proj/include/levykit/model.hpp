#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "levykit/geometry.hpp"
#include "levykit/profiles.hpp"
#include "levykit/spectral.hpp"

namespace levykit {

/// Jump process specification in polar form: the Levy measure acts as
///   nu(A) = \int_S \int_0^inf 1_A(s theta) s^{-1-alpha} q(s) phi(s) ds mu(d theta)
/// with spectral measure mu on the sphere and radial damping profile (q, phi).
class LevyModel {
 public:
  LevyModel(int dim, double alpha, double beta, double gamma, Vec drift,
            SpectralMeasure mu, RadialProfile profile);

  int dim() const { return dim_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  const Vec& drift() const { return drift_; }
  const SpectralMeasure& mu() const { return mu_; }
  const RadialProfile& profile() const { return profile_; }

  /// q(s) * phi(s) at radius s.
  double qphi(double s) const { return profile_.q(s) * profile_.phi(s); }

  /// Truncation radius h(t) = t^{1/alpha} ∧ t^{1/beta}.
  double h(double t) const;

  /// True iff q == phi == 1, enabling the closed-form stable exponent.
  bool is_stable() const { return profile_.is_trivial(); }

  /// Certificates cached by the check routines (NaN until computed).
  double c_beta() const { return c_beta_; }
  double c_lower() const { return c_lower_; }
  double c_gamma() const { return c_gamma_; }
  void set_c_beta(double v) const { c_beta_ = v; }
  void set_c_lower(double v) const { c_lower_ = v; }
  void set_c_gamma(double v) const { c_gamma_ = v; }

 private:
  int dim_;
  double alpha_, beta_, gamma_;
  Vec drift_;
  SpectralMeasure mu_;
  RadialProfile profile_;
  mutable double c_beta_ = std::numeric_limits<double>::quiet_NaN();
  mutable double c_lower_ = std::numeric_limits<double>::quiet_NaN();
  mutable double c_gamma_ = std::numeric_limits<double>::quiet_NaN();
};

/// Mass and moments of the shell restriction nu_{rho,r} (rho <= |y| < r).
struct TruncationMoments {
  double rho = 0.0, r = 0.0;
  double mass = 0.0;            // |nu_{rho,r}|; +inf when rho = 0
  double second_moment = 0.0;   // \int |y|^2 nu_{rho,r}(dy)
  Vec first_moment_vector;      // \int_{B(0,1)} y nu_{rho,r}(dy); NaN if divergent
};

/// Radial integral |mu|-free building block:
///   \int_lo^hi s^{power-1-alpha} q(s) phi(s) [/ phi(s/2)] ds.
/// hi may be +inf; lo = 0 is allowed when power > alpha (else returns +inf).
double radial_integral(const LevyModel& m, double lo, double hi, double power,
                       bool phi_half_ratio, double abs_tol = 1e-12);

struct TailMass {
  double psi = 0.0;       // |mu| phi(0) \int_r^inf s^{-1-a} q phi/phi(s/2)
  double nu_bar = 0.0;    // |nu_{r,inf}|, always <= psi
};

/// Weighted tail mass psi(r) together with the plain tail mass as a
/// cross-check. Throws NumericError if the tail integral cannot be pinned.
TailMass tail_mass_psi(const LevyModel& m, double r, double abs_tol = 1e-12);

/// Re-centering drift b_r: subtracts the compensator over r < |y| < 1
/// (r <= 1) or adds it over 1 < |y| < r (r > 1).
Vec centering_shift(const LevyModel& m, double r, double abs_tol = 1e-12);

struct BetaCondition {
  double c_beta = 0.0;  // max over the grid of I(r) / r^{2-beta}
  bool pass = false;
  std::vector<double> r_grid;
  std::vector<double> integral;  // I(r) = \int_0^r s^{1-alpha} q phi/phi(s/2)
};

/// Certifies \int_0^r s^{1-alpha} q phi/phi(s/2) ds <= c r^{2-beta} on the
/// grid and stores c_beta on the model.
BetaCondition beta_condition_check(const LevyModel& m,
                                   const std::vector<double>& r_grid);

TruncationMoments truncation_moments(const LevyModel& m, double rho, double r,
                                     double abs_tol = 1e-12);

/// Weighted direction Gram matrix Sum_a w_a theta theta^T scaled by the
/// radial second moment of the (rho, r) shell; row-major d x d.
std::vector<double> second_moment_matrix(const LevyModel& m, double rho, double r,
                                         double abs_tol = 1e-12);

/// Runs every structural hypothesis check: spectral invariants, profile
/// certificates, the beta growth condition and the cap-dimension fit for
/// the declared gamma. Fills the model's cached constants.
ValidationReport validate_model(const LevyModel& m);

}  // namespace levykit
