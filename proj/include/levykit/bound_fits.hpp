#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "levykit/bound_shapes.hpp"
#include "levykit/density.hpp"
#include "levykit/model.hpp"

namespace levykit {

struct RatioRow {
  double t = 0.0;
  double x = 0.0;       // radius in the recentered frame
  double density = 0.0;
  double shape = 0.0;   // bound with unit prefactor
  double ratio = 0.0;
};

/// Result of fitting the transition-density bound constants against FFT
/// densities, evaluated at lattice points shifted by t b_{h(t)}.
struct DensityBoundFit {
  BoundParams params;        // c (small t), c1/c2/c3 (large t)
  double sup_ratio_small = 0.0;
  double sup_ratio_large = 0.0;
  double coverage_small = 0.0;  // largest |x| reached while bound >= floor
  double coverage_large = 0.0;
  bool clamped = false;         // lattice hit the memory budget before the floor
  bool pass = false;
  std::vector<RatioRow> rows;   // subsampled diagnostics
};

/// Fits the minimal constants making the density bound hold over
/// (t_grid) x (lattice points with bound >= bound_floor). x_stride
/// subsamples the lattice (refinement passes use a smaller stride).
DensityBoundFit fit_constants(const LevyModel& m, const std::vector<double>& t_grid,
                              int x_stride = 2, double bound_floor = 1e-10,
                              double spectral_tol = 1e-8);

/// Pooled fit of c1 h^{-d} g(|x|/h) against the h(t)-truncated densities.
struct TruncatedDensityFit {
  BoundParams params;       // c1, c2, c3 (c3 fixed at 1)
  double sup_ratio = 0.0;   // max density / bound (<= 1 by construction)
  double c_power_2gamma = 0.0;  // fitted c in g(s) <= c s^{-2 gamma}
  bool pass = false;
  std::size_t points = 0;
};
TruncatedDensityFit fit_truncated_density(const LevyModel& m,
                                          const std::vector<double>& t_grid,
                                          double x_over_h = 30.0,
                                          double spectral_tol = 1e-8);

/// Lattice-convolution oracle for the tail-measure powers (d = 1).
struct ConvPowerRow {
  int n = 1;
  double a = 0.0, b = 0.0;  // annulus radii
  double oracle = 0.0;      // lattice mass of nu_bar^{n*} on the annulus
  double shape = 0.0;       // psi^{n-1} delta^{-g-a} q phi(delta/2) diam^g
};
struct ConvPowerReport {
  double c_fit = 0.0;  // max over rows of (oracle/shape)^{1/n}
  double psi = 0.0, nu_bar = 0.0;
  double out_of_lattice = 0.0;  // worst relative mass dropped by the lattice
  std::vector<ConvPowerRow> rows;
  bool pass = false;
};
ConvPowerReport convolution_power_check(const LevyModel& m, double r, int n_max = 4,
                                        std::size_t cells = std::size_t{1} << 16,
                                        int n_annuli = 20);

/// Monte Carlo ball frequencies of the large-jump law against the ball
/// bound shape (d = 1).
struct BallBoundRow {
  double x = 0.0, rho = 0.0;
  double freq = 0.0, stderr_freq = 0.0;
  double shape = 0.0;  // t e^{-t nu_bar} ... core (unit constant)
};
struct BallBoundReport {
  double c_fit = 0.0;
  std::vector<BallBoundRow> rows;
  bool pass = false;
};
BallBoundReport large_jump_ball_check(const LevyModel& m, double r, double t,
                                      std::size_t n_samples, std::uint64_t seed);

/// Monte Carlo tail of a bounded-support compound Poisson against the
/// closed-form tail bound; admissible a only, zero violations required.
struct BoundedTailRow {
  double a = 0.0;
  double mc_tail = 0.0;
  double bound = 0.0;
};
struct BoundedTailReport {
  double support_radius = 0.0, M = 0.0, xi0 = 0.0, threshold = 0.0;
  std::vector<BoundedTailRow> rows;
  std::size_t n = 0;
  bool pass = false;  // no violations
};
BoundedTailReport bounded_support_tail_check(const std::vector<Vec>& atoms,
                                             const std::vector<double>& weights,
                                             std::size_t n_samples, std::uint64_t seed,
                                             int n_points = 12);

/// FFT density of the model truncated at the given support radius against
/// the bounded-support density bound, with m0/m1 measured from the lattice.
struct BoundedDensityReport {
  double m0 = 0.0, m1 = 0.0, M = 0.0;
  double c1_fit = 0.0;
  double x_lo = 0.0, x_hi = 0.0;
  bool pass = false;
};
BoundedDensityReport bounded_support_density_check(const LevyModel& m,
                                                   double support_radius, double t,
                                                   double x_lo, double x_hi,
                                                   double spectral_tol = 1e-10);

}  // namespace levykit
