#pragma once

#include "levykit/model.hpp"
#include "levykit/relativistic.hpp"

namespace levykit {

/// q = phi = 1, beta = alpha; the drift makes the exponent strictly
/// scale-homogeneous (alpha < 1: compensator refund; alpha = 1: zero, with
/// a centered mu required; alpha > 1: outer-tail compensation).
LevyModel make_stable(int d, double alpha, SpectralMeasure mu);

/// q(s) = (1+s)^{alpha-m} with m > 2, phi = 1, beta = 2: stable-like core
/// with a polynomially lighter tail.
LevyModel make_layered(int d, double alpha, double m_decay, SpectralMeasure mu);

/// q = 1, phi(s) = exp(-lambda s), beta = 2: exponentially tempered tail.
LevyModel make_tempered(int d, double alpha, double lambda, SpectralMeasure mu);

/// Uniform spectral measure with the standard surface mass, q = 1,
/// phi = K_{d,alpha}(s)/K_{d,alpha}(0+), beta = 2, gamma = d.
LevyModel make_relativistic(int d, double alpha, int resolution = 256);

}  // namespace levykit
