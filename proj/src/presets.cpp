#include "levykit/presets.hpp"

#include <cmath>

#include "levykit/common.hpp"

namespace levykit {

namespace {

double fitted_gamma(const SpectralMeasure& mu) {
  if (!mu.is_atomic() && mu.density_tag() == "uniform")
    return static_cast<double>(mu.dim());
  return gamma_exponent(mu, default_rho_grid()).gamma;
}

}  // namespace

LevyModel make_stable(int d, double alpha, SpectralMeasure mu) {
  if (!mu.nondegenerate())
    throw std::invalid_argument("make_stable: mu must be nondegenerate");
  RadialProfile prof = make_profile("one", {}, "one", {});
  const Vec mean = mu.mean_direction();
  Vec b = zero_vec(d);
  if (alpha == 1.0) {
    if (norm(mean) > 1e-9 * std::max(1.0, mu.total_mass()))
      throw std::invalid_argument(
          "make_stable: alpha = 1 requires int theta mu(dtheta) = 0");
  } else if (alpha < 1.0) {
    // \int_{|y|<1} y nu(dy) = mean * \int_0^1 s^{-alpha} ds
    b = scaled(mean, 1.0 / (1.0 - alpha));
  } else {
    // -\int_{|y|>1} y nu(dy)
    b = scaled(mean, -1.0 / (alpha - 1.0));
  }
  const double gamma = fitted_gamma(mu);
  return LevyModel(d, alpha, alpha, gamma, std::move(b), std::move(mu), std::move(prof));
}

LevyModel make_layered(int d, double alpha, double m_decay, SpectralMeasure mu) {
  if (!(m_decay > 2.0)) throw std::invalid_argument("make_layered: m > 2 required");
  if (!mu.nondegenerate())
    throw std::invalid_argument("make_layered: mu must be nondegenerate");
  RadialProfile prof =
      make_profile("powerlaw", {{"a", m_decay - alpha}}, "one", {});
  const double gamma = fitted_gamma(mu);
  return LevyModel(d, alpha, 2.0, gamma, zero_vec(d), std::move(mu), std::move(prof));
}

LevyModel make_tempered(int d, double alpha, double lambda, SpectralMeasure mu) {
  if (!(lambda > 0.0)) throw std::invalid_argument("make_tempered: lambda > 0 required");
  if (!mu.nondegenerate())
    throw std::invalid_argument("make_tempered: mu must be nondegenerate");
  RadialProfile prof = make_profile("one", {}, "exp", {{"lambda", lambda}});
  const double gamma = fitted_gamma(mu);
  return LevyModel(d, alpha, 2.0, gamma, zero_vec(d), std::move(mu), std::move(prof));
}

LevyModel make_relativistic(int d, double alpha, int resolution) {
  const double area = (d == 1) ? 2.0 : (d == 2) ? 2.0 * M_PI : 4.0 * M_PI;
  SpectralMeasure mu = SpectralMeasure::uniform(d, area, resolution);
  RadialProfile prof = make_profile(
      "one", {}, "kdalpha", {{"d", static_cast<double>(d)}, {"alpha", alpha}});
  return LevyModel(d, alpha, 2.0, static_cast<double>(d), zero_vec(d), std::move(mu),
                   std::move(prof));
}

}  // namespace levykit
