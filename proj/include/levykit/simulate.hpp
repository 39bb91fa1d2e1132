#pragma once

#include <cstdint>
#include <vector>

#include "levykit/model.hpp"

namespace levykit {

/// Increment sampler configuration. The process law is realized as
/// (large jumps: compound Poisson of the r-tail measure) * (small-jump
/// surrogate) * (shift t b_r).
struct SimConfig {
  double r = 0.0;  // jump-size threshold; 0 means h(t)
  enum class Scheme { discard, gaussian } scheme = Scheme::gaussian;
  double rho = 0.0;          // inner cutoff for the discard scheme
  std::uint64_t seed = 0;
  std::size_t n = 0;
  bool include_small = true;  // false: large jumps + shift only
};

struct SampleBatch {
  double t = 0.0;
  int dim = 1;
  std::size_t n = 0;
  std::vector<double> x;                    // n * dim, row-major
  std::vector<std::uint32_t> jump_counts;   // large-jump count per sample
  SimConfig config;                         // echo (with r resolved)
  double nu_bar_mass = 0.0;                 // |nu_{r,inf}|
  double mean_jump_count = 0.0;
  double acceptance_rate = 1.0;             // radial envelope rejection
  double chebyshev_second_moment = 0.0;     // t \int_{|y|<rho} |y|^2 nu(dy) (discard)

  Vec sample(std::size_t i) const {
    return Vec(x.begin() + static_cast<long>(i) * dim,
               x.begin() + static_cast<long>(i + 1) * dim);
  }
};

/// Pure compound Poisson of the r-tail measure: K ~ Poisson(t |nu_bar_r|)
/// jumps, directions from mu/|mu|, radii from the normalized radial tail
/// law via rejection under the power-law envelope s^{-1-alpha} q(r) phi(r).
/// Throws NumericError if the envelope acceptance rate degenerates.
SampleBatch sample_large_jumps(const LevyModel& m, double r, double t, std::size_t n,
                               std::uint64_t seed);

/// Centered compound Poisson of the (rho, r) shell alone: jumps from
/// nu_{rho,r} minus the shell mean drift. This is the building block whose
/// second moment equals t \int |y|^2 nu_{rho,r}(dy).
SampleBatch sample_shell(const LevyModel& m, double rho, double r, double t,
                         std::size_t n, std::uint64_t seed);

/// Full increment: large jumps + small-jump surrogate + t b_r.
///  - gaussian: centered normal with covariance t \int_{|y|<r} y y^T nu(dy)
///  - discard: compensated compound Poisson of the (rho, r) shell; jumps
///    below rho are dropped and the second-moment error proxy is reported.
SampleBatch sample_increment(const LevyModel& m, double t, const SimConfig& config);

/// Normalized 1-d histogram; total mass exactly 1 by construction.
struct Histogram {
  std::vector<double> edges;    // bins + 1
  std::vector<double> density;  // mass_i / width_i
  double mass() const;
};
Histogram empirical_density(const SampleBatch& batch, int bins);
Histogram empirical_density(const std::vector<double>& values, int bins, double lo,
                            double hi);

}  // namespace levykit
