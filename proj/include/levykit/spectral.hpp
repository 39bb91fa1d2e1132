#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "levykit/geometry.hpp"

namespace levykit {

/// Finite nonnegative measure on the unit sphere S^{d-1}, either a list of
/// atoms or a continuous density against surface measure carried by a
/// product quadrature rule of declared resolution. Immutable once built.
class SpectralMeasure {
 public:
  static SpectralMeasure atomic(int dim, std::vector<Vec> directions,
                                std::vector<double> weights);

  /// Density g >= 0 against surface measure. d = 1 degenerates to the two
  /// atoms {+1, -1}; d = 2 uses a uniform angular grid; d = 3 a
  /// Gauss-Legendre x uniform-azimuth product rule.
  static SpectralMeasure density(int dim, std::function<double(const Vec&)> g,
                                 int resolution, std::string tag = "custom");

  /// Uniform measure with the given total mass.
  static SpectralMeasure uniform(int dim, double total_mass, int resolution = 256);

  int dim() const { return dim_; }
  bool is_atomic() const { return atomic_; }
  const std::string& density_tag() const { return tag_; }
  int resolution() const { return resolution_; }
  double total_mass() const { return total_mass_; }

  /// Atoms, or quadrature nodes with g-weighted quadrature weights.
  const std::vector<Vec>& directions() const { return dirs_; }
  const std::vector<double>& weights() const { return weights_; }

  /// True iff the linear span of the support is all of R^d.
  bool nondegenerate() const;

  /// Invariance under theta <-> -theta within tol on weights.
  bool symmetric(double tol = 1e-9) const;

  /// \int theta mu(d theta).
  Vec mean_direction() const;

  /// mu(S ∩ B(theta, rho)) for rho in (0, 2]. Exact sum for atoms;
  /// cap quadrature of g for the density form.
  double cap_mass(const Vec& theta, double rho) const;

  std::string describe() const;

 private:
  SpectralMeasure() = default;
  int dim_ = 0;
  bool atomic_ = true;
  std::string tag_;
  int resolution_ = 0;
  double total_mass_ = 0.0;
  std::vector<Vec> dirs_;
  std::vector<double> weights_;
  std::function<double(const Vec&)> g_;
};

struct GammaFit {
  double gamma = 1.0;       // smallest exponent fitting the cap envelope
  double constant = 0.0;    // envelope constant c in mu(cap) <= c rho^{gamma-1}
  double worst_residual = 0.0;  // sup log-deviation of the fit on the grid
};

/// Fits the cap-mass growth mu(S ∩ B(theta, rho)) <= c rho^{gamma-1} by an
/// upper-envelope log-log regression over support samples and rho_grid.
GammaFit gamma_exponent(const SpectralMeasure& mu, const std::vector<double>& rho_grid);

std::vector<double> default_rho_grid();

}  // namespace levykit
