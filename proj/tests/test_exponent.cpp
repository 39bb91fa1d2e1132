#include <doctest.h>

#include <cmath>
#include <complex>

#include "levykit/exponent.hpp"
#include "levykit/model.hpp"
#include "levykit/presets.hpp"
#include "oracles.hpp"

using namespace levykit;

namespace {

SpectralMeasure sym1d(double w = 0.5) {
  return SpectralMeasure::atomic(1, {Vec{1.0}, Vec{-1.0}}, {w, w});
}

}  // namespace

TEST_CASE("Phi(0) = 0 for every model") {
  for (const LevyModel& m :
       {make_stable(1, 0.7, sym1d()), make_tempered(1, 1.3, 2.0, sym1d()),
        make_layered(1, 0.5, 3.0, sym1d())}) {
    const auto z = evaluate_exponent(m, Vec{0.0});
    CHECK(z.real() == 0.0);
    CHECK(z.imag() == 0.0);
  }
}

TEST_CASE("two-sided 1-stable: Re Phi = pi |xi| from the cosine integral") {
  // unit atom weights: Re Phi(xi) = 2 |xi| \int_0^inf (1-cos u)/u^2 du = pi |xi|
  auto mu = SpectralMeasure::atomic(1, {Vec{1.0}, Vec{-1.0}}, {1.0, 1.0});
  auto m = make_stable(1, 1.0, mu);
  for (double xi : {0.3, 1.0, 17.0}) {
    const auto z = evaluate_exponent(m, Vec{xi}, 1e-12);
    CHECK(oracles::rel_err(z.real(), M_PI * xi) < 1e-10);
    CHECK(std::abs(z.imag()) < 1e-10);
  }
}

TEST_CASE("radial factor against an independent Simpson oracle (tempered)") {
  const double alpha = 0.8, w = 3.0;
  auto prof = make_profile("one", {}, "exp", {{"lambda", 1.0}});
  const auto J = radial_cf_integral(alpha, prof, RadialWindow{}, w, 1e-12);
  auto rho = [&](double s) { return std::pow(s, -1.0 - alpha) * std::exp(-s); };
  const double re_oracle = oracles::simpson_log(
      [&](double s) { return (std::cos(w * s) - 1.0) * rho(s); }, 1e-10, 80.0, 200000);
  // split at the compensator jump s = 1
  const double im_oracle =
      oracles::simpson_log([&](double s) { return (std::sin(w * s) - w * s) * rho(s); },
                           1e-10, 1.0, 100000) +
      oracles::simpson_log([&](double s) { return std::sin(w * s) * rho(s); }, 1.0,
                           80.0, 100000);
  CHECK(std::abs(J.real() - re_oracle) < 1e-8);
  CHECK(std::abs(J.imag() - im_oracle) < 1e-8);
}

TEST_CASE("stable prefactor: a_{1/2} = sqrt(2 pi)") {
  CHECK(oracles::rel_err(stable_prefactor(0.5), std::sqrt(2.0 * M_PI)) < 1e-12);
}

TEST_CASE("symmetric mu: jump part is real, drift gives -<xi, b>") {
  auto mu = sym1d();
  auto prof = make_profile("one", {}, "exp", {{"lambda", 1.0}});
  LevyModel m(1, 1.2, 2.0, 1.0, Vec{0.7}, mu, prof);
  const auto z = evaluate_exponent(m, Vec{2.0}, 1e-12);
  CHECK(std::abs(z.imag() - (-2.0 * 0.7)) < 1e-10);
}

TEST_CASE("quadrature matches the stable closed form to 1e-6") {
  SUBCASE("one-sided and symmetric, alpha != 1") {
    for (double alpha : {0.5, 1.5}) {
      auto one_sided = SpectralMeasure::atomic(1, {Vec{1.0}}, {1.0});
      auto m = make_stable(1, alpha, one_sided);
      for (double xi : {-3.0, 0.25, 1.0, 40.0}) {
        const auto zq = evaluate_exponent(m, Vec{xi}, 1e-11);
        const auto zc = stable_exponent_closed_form(m.mu(), alpha, Vec{xi});
        CHECK(std::abs(zq - zc) / std::abs(zc) < 1e-6);
      }
    }
  }
  SUBCASE("alpha = 1 symmetric") {
    auto m = make_stable(1, 1.0, sym1d(0.8));
    for (double xi : {0.5, 5.0}) {
      const auto zq = evaluate_exponent(m, Vec{xi}, 1e-11);
      const auto zc = stable_exponent_closed_form(m.mu(), 1.0, Vec{xi});
      CHECK(std::abs(zq - zc) / std::abs(zc) < 1e-6);
    }
  }
  SUBCASE("alpha = 1 asymmetric with centered mu: the log form") {
    // three atoms at 120 degrees, equal weights: mean zero, not symmetric
    std::vector<Vec> dirs;
    for (int k = 0; k < 3; ++k) {
      const double a = 2.0 * M_PI * k / 3.0 + 0.2;
      dirs.push_back(Vec{std::cos(a), std::sin(a)});
    }
    auto mu = SpectralMeasure::atomic(2, dirs, {1.0, 1.0, 1.0});
    CHECK(norm(mu.mean_direction()) < 1e-12);
    auto m = make_stable(2, 1.0, mu);
    for (const Vec& xi : {Vec{1.0, 0.3}, Vec{-2.0, 5.0}}) {
      const auto zq = evaluate_exponent(m, xi, 1e-11);
      const auto zc = stable_exponent_closed_form(m.mu(), 1.0, xi);
      CHECK(std::abs(zq - zc) / std::abs(zc) < 1e-6);
    }
  }
  SUBCASE("alpha = 1 with uncentered mu is refused") {
    auto one = SpectralMeasure::atomic(1, {Vec{1.0}}, {1.0});
    CHECK_THROWS_AS(stable_exponent_closed_form(one, 1.0, Vec{1.0}),
                    std::invalid_argument);
  }
}

TEST_CASE("stable scaling: Phi(a xi) = a^alpha Phi(xi) from quadrature") {
  auto m = make_stable(1, 0.6, SpectralMeasure::atomic(1, {Vec{1.0}}, {1.0}));
  const Vec xi{1.3};
  const auto base = evaluate_exponent(m, xi, 1e-12);
  for (double a : {0.5, 2.0, 7.0}) {
    const auto scaled_phi = evaluate_exponent(m, Vec{a * 1.3}, 1e-12);
    const auto expect = std::pow(a, 0.6) * base;
    CHECK(std::abs(scaled_phi - expect) / std::abs(expect) < 1e-8);
  }
}

TEST_CASE("lower bound certificate") {
  SUBCASE("degenerate 2-d single atom fails") {
    auto mu = SpectralMeasure::atomic(2, {Vec{1.0, 0.0}}, {1.0});
    auto prof = make_profile("one", {}, "one", {});
    LevyModel m(2, 0.8, 0.8, 1.0, zero_vec(2), mu, prof);
    const auto fit = verify_lower_bound(m);
    CHECK_FALSE(fit.pass);
    CHECK(fit.c_lower < 1e-10);
  }
  SUBCASE("axis atoms in 2-d pass") {
    auto mu = SpectralMeasure::atomic(
        2, {Vec{1.0, 0.0}, Vec{0.0, 1.0}, Vec{-1.0, 0.0}, Vec{0.0, -1.0}},
        {1.0, 1.0, 1.0, 1.0});
    auto m = make_stable(2, 0.8, mu);
    const auto fit = verify_lower_bound(m);
    CHECK(fit.pass);
    CHECK(fit.c_lower > 0.1);
  }
  SUBCASE("1-d stable ratio is constant in |xi|") {
    auto m = make_stable(1, 0.7, sym1d());
    std::vector<Vec> grid;
    for (double r : {1.0, 4.0, 64.0, 1000.0}) grid.push_back(Vec{r});
    const auto fit = verify_lower_bound(m, grid);
    const double expect = stable_exponent_closed_form(m.mu(), 0.7, Vec{1.0}).real();
    CHECK(fit.c_lower == doctest::Approx(expect).epsilon(1e-6));
  }
}

TEST_CASE("truncated modulus: no truncation means equality, xi = 0 means 1") {
  auto m = make_tempered(1, 1.0, 1.0, sym1d());
  const Vec xi{5.0};
  SUBCASE("r large approximates no truncation") {
    const auto tm = truncated_exponent_modulus(m, 60.0, 1.0, xi);
    const double exact = std::exp(-evaluate_exponent(m, xi).real());
    CHECK(oracles::rel_err(tm.modulus, exact) < 1e-8);
  }
  SUBCASE("xi = 0") {
    const auto tm = truncated_exponent_modulus(m, 1.0, 1.0, Vec{0.0});
    CHECK(tm.modulus == doctest::Approx(1.0));
  }
  SUBCASE("tempered r = 1, t = 1, xi = 5: majorant dominates") {
    const auto tm = truncated_exponent_modulus(m, 1.0, 1.0, xi);
    CHECK(tm.modulus <= tm.majorant * (1.0 + 1e-9));
    CHECK(tm.modulus > 0.0);
  }
  SUBCASE("monotone in r: larger truncation radius keeps more damping") {
    double prev = 2.0;
    for (double r : {0.25, 1.0, 4.0, 16.0}) {
      const double mod = truncated_exponent_modulus(m, r, 1.0, xi).modulus;
      CHECK(mod <= prev * (1.0 + 1e-12));
      prev = mod;
    }
  }
}

TEST_CASE("exponent table matches direct quadrature") {
  SUBCASE("full window, tempered") {
    auto prof = make_profile("one", {}, "exp", {{"lambda", 1.0}});
    ExponentTable tab(0.9, prof, RadialWindow{}, 500.0, 1e-11);
    for (double w : {1e-7, 3e-4, 0.02, 0.7, 3.0, 41.0, 350.0, -5.0}) {
      const auto direct = radial_cf_integral(0.9, prof, RadialWindow{}, w, 1e-12);
      const auto interp = tab.eval(w);
      // relative target away from zero, absolute floor near it
      CHECK(std::abs(interp - direct) <
            std::max(2e-7 * std::abs(direct), 2e-10));
    }
  }
  SUBCASE("truncated window with full compensation, layered") {
    auto prof = make_profile("powerlaw", {{"a", 2.5}}, "one", {});
    const RadialWindow win{0.0, 0.3, 0.3};
    ExponentTable tab(0.5, prof, win, 700.0, 1e-11);
    for (double w : {1e-5, 0.4, 11.0, 650.0}) {
      const auto direct = radial_cf_integral(0.5, prof, win, w, 1e-12);
      const auto interp = tab.eval(w);
      CHECK(std::abs(interp - direct) <
            std::max(2e-7 * std::abs(direct), 2e-10));
    }
  }
}

TEST_CASE("exponent evaluator: table path equals quadrature for tempered") {
  auto m = make_tempered(1, 1.1, 1.0, sym1d());
  ExponentEvaluator ev(m, 200.0, 1e-11);
  CHECK_FALSE(ev.closed_form());
  for (double xi : {0.05, 1.0, 30.0, -150.0}) {
    const auto a = ev(Vec{xi});
    const auto b = evaluate_exponent(m, Vec{xi}, 1e-12);
    CHECK(std::abs(a - b) / (std::abs(b) + 1e-12) < 1e-6);
  }
}

TEST_CASE("exponent grid invariants: Hermitian symmetry, Phi(0)=0, Re >= 0") {
  auto m = make_tempered(1, 1.0, 1.0, sym1d());
  ExponentEvaluator ev(m, 40.0, 1e-10);
  const auto g = make_exponent_grid(ev, 1, 64, 32.0, "testhash");
  CHECK(g.values[32] == std::complex<double>{0.0, 0.0});
  for (std::size_t i = 1; i < 64; ++i) {
    const auto a = g.values[i];
    const auto b = std::conj(g.values[(64 - i) % 64]);
    CHECK(std::abs(a - b) == 0.0);  // exact after symmetrization
    CHECK(a.real() >= -1e-12);
  }
}
