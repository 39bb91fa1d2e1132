#include <doctest.h>

#include <cmath>
#include <complex>

#include "levykit/common.hpp"
#include "levykit/quadrature.hpp"
#include "oracles.hpp"

using namespace levykit;

TEST_CASE("adaptive panels reproduce closed forms") {
  auto r = quad::integrate([](double x) { return x * x; }, 0.0, 1.0, 1e-12);
  CHECK(oracles::rel_err(r.value, 1.0 / 3.0) < 1e-13);

  r = quad::integrate([](double x) { return std::exp(-x); }, 0.0, 40.0, 1e-12);
  CHECK(oracles::rel_err(r.value, 1.0) < 1e-11);

  // endpoint-steep integrand via the log substitution
  r = quad::integrate_log([](double s) { return std::pow(s, -0.5); }, 1e-12, 1.0, 1e-12);
  CHECK(oracles::rel_err(r.value, 2.0 * (1.0 - 1e-6)) < 1e-10);
}

TEST_CASE("tail integration with a majorant") {
  auto r = quad::integrate_tail([](double s) { return std::pow(s, -2.0); }, 1.0,
                                [](double b) { return 1.0 / b; }, 1e-12);
  CHECK(oracles::rel_err(r.value, 1.0) < 1e-10);

  // exponential tail: the loose power-law majorant still terminates
  r = quad::integrate_tail([](double s) { return std::exp(-s); }, 2.0,
                           [](double b) { return 10.0 / b; }, 1e-12);
  CHECK(oracles::rel_err(r.value, std::exp(-2.0)) < 1e-10);
}

TEST_CASE("oscillatory tails against closed forms") {
  // \int_a^inf e^{-s} sin(ws) ds = Im[ e^{-(1-iw)a} / (1-iw) ]
  for (double w : {0.3, 1.0, 7.5}) {
    for (double a : {0.0, 0.7}) {
      const std::complex<double> z(1.0, -w);
      const std::complex<double> exact_c = std::exp(-z * a) / z;
      auto r = quad::oscillatory([](double s) { return std::exp(-s); }, w, true, a,
                                 std::numeric_limits<double>::infinity(), 1e-12);
      CHECK(std::abs(r.value - exact_c.imag()) < 1e-10);
      auto rc = quad::oscillatory([](double s) { return std::exp(-s); }, w, false, a,
                                  std::numeric_limits<double>::infinity(), 1e-12);
      CHECK(std::abs(rc.value - exact_c.real()) < 1e-10);
    }
  }

  // \int_1^inf sin(s)/s ds = pi/2 - Si(1)
  auto r = quad::oscillatory([](double s) { return 1.0 / s; }, 1.0, true, 1.0,
                             std::numeric_limits<double>::infinity(), 1e-12);
  CHECK(std::abs(r.value - 0.6247132564277136) < 1e-10);

  // slowly decaying envelope: acceleration must still converge
  auto rs = quad::oscillatory([](double s) { return std::pow(s, -0.25); }, 2.0, false,
                              1.0, std::numeric_limits<double>::infinity(), 1e-11);
  // self-consistency at a different starting phase split
  auto rs2 = quad::oscillatory([](double s) { return std::pow(s, -0.25); }, 2.0, false,
                               1.0, 1.0 + 40.0 * M_PI, 1e-12);
  auto rs3 = quad::oscillatory([](double s) { return std::pow(s, -0.25); }, 2.0, false,
                               1.0 + 40.0 * M_PI, std::numeric_limits<double>::infinity(),
                               1e-12);
  CHECK(std::abs(rs.value - (rs2.value + rs3.value)) < 1e-9);
}

TEST_CASE("finite oscillatory ranges") {
  // \int_0^b sin(ws) ds = (1 - cos(wb))/w
  const double w = 11.0, b = 3.7;
  auto r = quad::oscillatory([](double) { return 1.0; }, w, true, 0.0, b, 1e-12);
  CHECK(std::abs(r.value - (1.0 - std::cos(w * b)) / w) < 1e-11);
}

TEST_CASE("alternating series acceleration") {
  // log 2 = sum (-1)^k / (k+1)
  std::vector<double> terms;
  for (int k = 0; k < 30; ++k) terms.push_back(1.0 / (k + 1.0));
  CHECK(std::abs(quad::alternating_series(terms) - std::log(2.0)) < 1e-12);
  // pi/4 = sum (-1)^k / (2k+1)
  terms.clear();
  for (int k = 0; k < 30; ++k) terms.push_back(1.0 / (2.0 * k + 1.0));
  CHECK(std::abs(quad::alternating_series(terms) - M_PI / 4.0) < 1e-12);
}

TEST_CASE("non-convergence is reported") {
  CHECK_THROWS_AS(
      quad::integrate([](double x) { return std::abs(std::sin(1.0 / x)) / x; }, 1e-9,
                      1.0, 1e-14, 40),
      NumericError);
}

TEST_CASE("small-angle helpers") {
  CHECK(one_minus_cos(1e-9) == doctest::Approx(5e-19).epsilon(1e-6));
  CHECK(std::abs(sin_minus_x(0.099) - (std::sin(0.099) - 0.099)) < 1e-18);
  CHECK(std::abs(sin_minus_x(0.3) - (std::sin(0.3) - 0.3)) < 1e-16);
}
