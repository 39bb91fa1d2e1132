#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "levykit/spectral.hpp"
#include "oracles.hpp"

using namespace levykit;

TEST_CASE("atomic invariants: unit norms, positive weights, mass") {
  CHECK_THROWS_AS(SpectralMeasure::atomic(2, {Vec{1.0, 1.0}}, {1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SpectralMeasure::atomic(1, {Vec{1.0}}, {0.0}), std::invalid_argument);
  auto mu = SpectralMeasure::atomic(2, {Vec{1.0, 0.0}, Vec{0.0, 1.0}}, {1.5, 0.5});
  CHECK(mu.total_mass() == doctest::Approx(2.0));
  CHECK(mu.nondegenerate());
  CHECK_FALSE(mu.symmetric());
}

TEST_CASE("degenerate support is detected by the rank test") {
  auto line = SpectralMeasure::atomic(2, {Vec{1.0, 0.0}, Vec{-1.0, 0.0}}, {1.0, 1.0});
  CHECK_FALSE(line.nondegenerate());
  CHECK(line.symmetric());
  auto plane3 =
      SpectralMeasure::atomic(3, {Vec{1, 0, 0}, Vec{0, 1, 0}, Vec{-1, 0, 0}}, {1, 1, 1});
  CHECK_FALSE(plane3.nondegenerate());
}

TEST_CASE("gamma fit: few separated atoms give gamma = 1") {
  auto mu = SpectralMeasure::atomic(2, {Vec{1.0, 0.0}, Vec{0.0, 1.0}}, {1.0, 1.0});
  const auto fit = gamma_exponent(mu, default_rho_grid());
  CHECK(fit.gamma == doctest::Approx(1.0).epsilon(0.05));
  // cap mass never exceeds c rho^{gamma-1} = c by construction
  CHECK(fit.constant >= 1.0 - 1e-9);
}

TEST_CASE("gamma fit: random separated atoms stay at gamma = 1") {
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<Vec> dirs;
    std::vector<double> ws;
    const int k = 2 + rep;
    for (int a = 0; a < k; ++a) {
      const double phi = u(eng) / k + 2.0 * M_PI * a / k;  // >= spacing 2pi/k - jitter
      dirs.push_back(Vec{std::cos(phi), std::sin(phi)});
      ws.push_back(0.5 + 0.1 * a);
    }
    auto mu = SpectralMeasure::atomic(2, dirs, ws);
    std::vector<double> rho;
    for (int i = 0; i < 16; ++i)
      rho.push_back(0.02 * std::pow(10.0, 1.2 * i / 15.0));  // 0.02 .. ~0.3
    const auto fit = gamma_exponent(mu, rho);
    CHECK(fit.gamma < 1.3);
  }
}

TEST_CASE("gamma fit: uniform circle measure gives gamma = d = 2") {
  auto mu = SpectralMeasure::uniform(2, 2.0 * M_PI, 512);
  const auto fit = gamma_exponent(mu, default_rho_grid());
  CHECK(fit.gamma == doctest::Approx(2.0).epsilon(0.025));
  // cap mass of the unit-density circle is 2 * 2 asin(rho/2)
  const double rho = 0.5;
  const double expect = 4.0 * std::asin(0.5 * rho);
  CHECK(mu.cap_mass(Vec{1.0, 0.0}, rho) == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("gamma fit: great circle embedded in d = 3 gives gamma = 2") {
  // brute-force cap masses over a dense atomic discretization of the equator
  std::vector<Vec> dirs;
  std::vector<double> ws;
  const int n = 720;
  for (int i = 0; i < n; ++i) {
    const double phi = 2.0 * M_PI * (i + 0.5) / n;
    dirs.push_back(Vec{std::cos(phi), std::sin(phi), 0.0});
    ws.push_back(2.0 * M_PI / n);
  }
  auto mu = SpectralMeasure::atomic(3, dirs, ws);
  std::vector<double> rho;
  for (int i = 0; i < 20; ++i)
    rho.push_back(0.05 * std::pow(20.0, i / 19.0));  // 0.05 .. 1
  const auto fit = gamma_exponent(mu, rho);
  CHECK(fit.gamma == doctest::Approx(2.0).epsilon(0.04));
}

TEST_CASE("uniform sphere measure in d = 3: nondegenerate, symmetric, cap mass") {
  auto mu = SpectralMeasure::uniform(3, 4.0 * M_PI, 48);
  CHECK(mu.nondegenerate());
  CHECK(mu.symmetric());
  CHECK(norm(mu.mean_direction()) < 1e-10);
  // spherical cap area = 2 pi (1 - cos psi), unit density
  const double rho = 0.8;
  const double psi = std::acos(1.0 - rho * rho / 2.0);
  const double expect = 2.0 * M_PI * (1.0 - std::cos(psi));
  CHECK(mu.cap_mass(Vec{0.0, 0.0, 1.0}, rho) == doctest::Approx(expect).epsilon(1e-6));
  const auto fit = gamma_exponent(mu, default_rho_grid());
  CHECK(fit.gamma == doctest::Approx(3.0).epsilon(0.03));
}

TEST_CASE("empty support errors") {
  auto mu = SpectralMeasure::atomic(1, {Vec{1.0}}, {1.0});
  CHECK_THROWS_AS(gamma_exponent(mu, {}), std::invalid_argument);
}
