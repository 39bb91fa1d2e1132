#pragma once

#include <string>
#include <vector>

#include "levykit/exponent.hpp"
#include "levykit/model.hpp"

namespace levykit {

/// Centered lattice pair: frequency nodes xi_k = (k - n/2) dxi with
/// dxi = 2 xi_extent / n, spatial nodes x_j = (j - n/2) dx with
/// dx = pi / xi_extent, so that dx * dxi = 2 pi / n.
struct GridSpec {
  int dim = 1;
  std::size_t n = 0;  // per axis, power of two
  double xi_extent = 0.0;
  double dxi() const { return 2.0 * xi_extent / static_cast<double>(n); }
  double dx() const { return M_PI / xi_extent; }
  double extent() const { return static_cast<double>(n) * dx(); }
};

/// Chooses (Xi, N, dx): Xi so the spectral tail exp(-t c_lower Xi^alpha)
/// is below tol (and the lattice resolves h(t)); N so the spatial window
/// covers the region where the density upper bound exceeds tol, plus
/// min_extent margin per side. Throws ValidationError when the lower-bound
/// certificate is missing/zero (the density may not exist) and
/// NumericError when the lattice would exceed the memory budget.
GridSpec design_grid(const LevyModel& m, double t, double tol, double min_extent = 0.0);

/// The frequency-extent half of the design rule alone (no memory check).
double design_xi_extent(const LevyModel& m, double t, double tol);

/// Largest power-of-two per-axis size within the total-node budget.
std::size_t max_lattice_axis(int dim);

/// Rescaled lattice: same N, frequency extent divided by s (spatial step
/// multiplied by s). Used for scale sweeps over t.
inline GridSpec scale_spec(const GridSpec& g, double s) {
  return GridSpec{g.dim, g.n, g.xi_extent / s};
}

struct DensityGrid {
  int dim = 1;
  std::size_t n = 0;
  double dx = 0.0;
  double t = 0.0;
  double xi_extent = 0.0;
  std::vector<double> p;  // row-major, axis 0 slowest
  double total_mass = 0.0;   // dx^d sum p
  double abs_mass = 0.0;     // dx^d sum |p|
  double min_value = 0.0;
  double max_value = 0.0;
  double max_imag = 0.0;     // residual imaginary magnitude (scaled like p)

  std::size_t size() const { return p.size(); }
  /// Lattice point of a flat row-major index.
  Vec point(std::size_t flat) const;
  /// Flat index from per-axis indices in [0, n).
  std::size_t flat_index(const std::vector<long>& k) const;
  double cell_volume() const;
  /// Multilinear interpolation; zero outside the window.
  double interpolate(const Vec& x) const;
};

/// Fourier inversion of exp(-t Phi) on the lattice via FFT, with the
/// continuous-transform normalization. Enforces the grid invariants
/// (|total|mass| near 1, bounded negative undershoot).
DensityGrid invert_with(const ExponentEvaluator& ev, int dim, double t,
                        const GridSpec& spec);
DensityGrid invert(const LevyModel& m, double t, const GridSpec& spec,
                   double tol = 1e-10);
/// Inversion from a precomputed (possibly cached) exponent grid.
DensityGrid invert_grid(const CharExponentGrid& g, double t);

struct OnDiagonalRow {
  double t = 0.0;
  double sup_p = 0.0;       // sup_x p_t(x)
  double sup_scaled = 0.0;  // sup_x p_t(x) * h(t)^d
};
struct OnDiagonalReport {
  std::vector<OnDiagonalRow> rows;
  double spread = 0.0;  // max/min of sup_scaled
  bool pass = false;    // bounded spread
};

/// Sweeps sup_x p_t h(t)^d over t_grid; stable models reuse one lattice in
/// rescaled form so the scaling identity is reproduced exactly.
OnDiagonalReport on_diagonal_check(const LevyModel& m, const std::vector<double>& t_grid,
                                   double tol = 1e-8, double pass_spread = 10.0);

/// Slow adaptive-quadrature inversion at a few points (d <= 2), as an
/// FFT-independent cross-check.
std::vector<double> direct_inversion_check(const LevyModel& m, double t,
                                           const std::vector<Vec>& points,
                                           double tol = 1e-10);

void write_density_csv(const DensityGrid& g, const std::string& path);
/// Little-endian dump: magic "LKDG0001", uint32 dim, uint64 n, float64 dx,
/// float64 t, then n^dim row-major float64 values.
void write_density_binary(const DensityGrid& g, const std::string& path);

}  // namespace levykit
