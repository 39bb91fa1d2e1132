#pragma once

namespace levykit {

/// Radial kernel of the relativistic jump density:
///   K(s) = s^{d+alpha} \int_0^inf e^{-u} e^{-s^2/(4u)} u^{(-2-d-alpha)/2} du,  s > 0,
/// evaluated by adaptive quadrature after an exponential substitution.
/// Throws std::invalid_argument for s <= 0.
double relativistic_kernel(int d, double alpha, double s);

/// Small-s limit K(0+) = 2^{d+alpha} Gamma((d+alpha)/2).
double relativistic_kernel_limit0(int d, double alpha);

/// Comparison shape (1+s)^{(d+alpha-1)/2} e^{-s}; K/shape stays within a
/// bounded window on s in (0, inf).
double relativistic_kernel_asymptote(int d, double alpha, double s);

/// log K(s), stable for large s (K underflows past s ~ 700).
double relativistic_kernel_log(int d, double alpha, double s);

}  // namespace levykit
