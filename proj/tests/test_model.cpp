#include <doctest.h>

#include <cmath>

#include "levykit/common.hpp"
#include "levykit/model.hpp"
#include "levykit/model_io.hpp"
#include "levykit/presets.hpp"
#include "oracles.hpp"

using namespace levykit;

namespace {

LevyModel symmetric_1d(const std::string& qf, std::map<std::string, double> qp,
                       const std::string& pf, std::map<std::string, double> pp,
                       double alpha, double beta) {
  auto mu = SpectralMeasure::atomic(1, {Vec{1.0}, Vec{-1.0}}, {0.5, 0.5});
  return LevyModel(1, alpha, beta, 1.0, Vec{0.0}, mu, make_profile(qf, qp, pf, pp));
}

LevyModel onesided_1d(double alpha, double b = 0.0) {
  auto mu = SpectralMeasure::atomic(1, {Vec{1.0}}, {1.0});
  return LevyModel(1, alpha, alpha, 1.0, Vec{b}, mu, make_profile("one", {}, "one", {}));
}

}  // namespace

TEST_CASE("psi closed form for the trivial profile: r^{-alpha}/alpha") {
  for (double alpha : {0.5, 1.0, 1.5}) {
    auto m = onesided_1d(alpha);
    for (double r : {0.25, 1.0, 4.0}) {
      const auto tm = tail_mass_psi(m, r);
      const double expect = std::pow(r, -alpha) / alpha;
      CHECK(oracles::rel_err(tm.psi, expect) < 1e-9);
      CHECK(oracles::rel_err(tm.nu_bar, expect) < 1e-9);
    }
  }
}

TEST_CASE("psi dominates the tail mass and is nonincreasing") {
  auto m = symmetric_1d("one", {}, "exp", {{"lambda", 1.0}}, 1.0, 2.0);
  double prev = 1e308;
  for (double r : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    const auto tm = tail_mass_psi(m, r);
    CHECK(tm.psi >= tm.nu_bar * (1.0 - 1e-9));
    CHECK(tm.psi <= prev * (1.0 + 1e-12));
    prev = tm.psi;
  }
}

TEST_CASE("tempered psi against an independent fine Riemann sum") {
  auto m = onesided_1d(1.0);
  auto mt = make_tempered(1, 1.0, 1.0, SpectralMeasure::atomic(1, {Vec{1.0}}, {1.0}));
  const double r = 1.0;
  const auto tm = tail_mass_psi(mt, r);
  // psi(1) = \int_1^inf s^{-2} e^{-s/2} ds by log-Simpson
  const double oracle = oracles::simpson_log(
      [](double s) { return std::pow(s, -2.0) * std::exp(-0.5 * s); }, 1.0, 200.0,
      40000);
  CHECK(oracles::rel_err(tm.psi, oracle) < 1e-8);
  const double oracle_nb = oracles::simpson_log(
      [](double s) { return std::pow(s, -2.0) * std::exp(-s); }, 1.0, 200.0, 40000);
  CHECK(oracles::rel_err(tm.nu_bar, oracle_nb) < 1e-8);
}

TEST_CASE("centering shift: both branches and the r = 1 joint") {
  SUBCASE("r = 1 returns b") {
    auto m = onesided_1d(0.5, 2.5);
    const Vec br = centering_shift(m, 1.0);
    CHECK(br[0] == doctest::Approx(2.5));
  }
  SUBCASE("symmetric mu keeps b for every r") {
    auto m = symmetric_1d("one", {}, "one", {}, 0.7, 0.7);
    for (double r : {0.1, 0.9, 1.0, 3.0}) {
      CHECK(centering_shift(m, r)[0] == doctest::Approx(0.0));
    }
  }
  SUBCASE("one-sided alpha = 1/2 at r = 1/4: antiderivative 2 sqrt(s)") {
    auto m = onesided_1d(0.5, 1.0);
    // b - \int_{1/4}^{1} s^{-1/2} ds = b - (2 - 1)
    const Vec br = centering_shift(m, 0.25);
    CHECK(br[0] == doctest::Approx(1.0 - 1.0).epsilon(1e-10));
  }
  SUBCASE("continuity at r = 1") {
    auto m = onesided_1d(0.5, 0.0);
    const double left = centering_shift(m, 1.0 - 1e-9)[0];
    const double right = centering_shift(m, 1.0 + 1e-9)[0];
    CHECK(std::abs(left) < 1e-8);
    CHECK(std::abs(right) < 1e-8);
  }
}

TEST_CASE("beta growth condition") {
  std::vector<double> r_grid;
  for (int i = 0; i < 12; ++i) r_grid.push_back(std::pow(10.0, 2.0 * i / 11.0));
  SUBCASE("trivial profile: I(r) = r^{2-alpha}/(2-alpha), beta = alpha") {
    auto m = onesided_1d(0.8);
    const auto bc = beta_condition_check(m, r_grid);
    CHECK(bc.pass);
    CHECK(bc.c_beta == doctest::Approx(1.0 / (2.0 - 0.8)).epsilon(1e-8));
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
      const double expect = std::pow(r_grid[i], 1.2) / 1.2;
      CHECK(oracles::rel_err(bc.integral[i], expect) < 1e-8);
    }
  }
  SUBCASE("tempered: I(inf) = Gamma(2-alpha) 2^{2-alpha} at beta = 2") {
    const double alpha = 0.9;
    auto mt =
        make_tempered(1, alpha, 1.0, SpectralMeasure::atomic(1, {Vec{1.0}}, {1.0}));
    const auto bc = beta_condition_check(mt, r_grid);
    CHECK(bc.pass);
    const double gamma_id = std::tgamma(2.0 - alpha) * std::pow(2.0, 2.0 - alpha);
    CHECK(bc.integral.back() == doctest::Approx(gamma_id).epsilon(1e-6));
    CHECK(bc.c_beta <= gamma_id * (1.0 + 1e-9));
  }
  SUBCASE("layered m > 2 passes with beta = 2") {
    auto ml = make_layered(1, 0.5, 3.0,
                           SpectralMeasure::atomic(1, {Vec{1.0}, Vec{-1.0}}, {0.5, 0.5}));
    const auto bc = beta_condition_check(ml, r_grid);
    CHECK(bc.pass);
    CHECK(std::isfinite(bc.c_beta));
  }
}

TEST_CASE("truncation moments") {
  SUBCASE("trivial profile second moment over (0,1) at alpha = 1 equals 1") {
    auto m = onesided_1d(1.0);
    const auto tm = truncation_moments(m, 0.0, 1.0);
    CHECK(tm.second_moment == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::isinf(tm.mass));
  }
  SUBCASE("degenerate shell vanishes") {
    auto m = onesided_1d(0.7);
    const auto tm = truncation_moments(m, 0.5, 0.5 + 1e-12);
    CHECK(tm.mass < 1e-9);
    CHECK(tm.second_moment < 1e-12);
  }
  SUBCASE("shell additivity") {
    auto m = symmetric_1d("powerlaw", {{"a", 2.5}}, "one", {}, 0.5, 2.0);
    const double m1 = truncation_moments(m, 0.1, 1.0).mass;
    const double m2 = truncation_moments(m, 1.0, 7.0).mass;
    const double m12 = truncation_moments(m, 0.1, 7.0).mass;
    CHECK(oracles::rel_err(m1 + m2, m12) < 1e-9);
  }
  SUBCASE("layered shell (1, 10) mass against a fine Riemann sum") {
    auto ml = make_layered(1, 0.5, 3.0,
                           SpectralMeasure::atomic(1, {Vec{1.0}, Vec{-1.0}}, {0.5, 0.5}));
    const auto tm = truncation_moments(ml, 1.0, 10.0);
    const double oracle = oracles::simpson_log(
        [](double s) { return std::pow(s, -1.5) * std::pow(1.0 + s, -2.5); }, 1.0, 10.0,
        40000);
    CHECK(oracles::rel_err(tm.mass, oracle) < 1e-8);
  }
  SUBCASE("symmetric mu has zero first moment") {
    auto m = symmetric_1d("one", {}, "exp", {{"lambda", 2.0}}, 1.2, 2.0);
    const auto tm = truncation_moments(m, 0.0, 5.0);
    CHECK(std::abs(tm.first_moment_vector[0]) < 1e-12);
  }
}

TEST_CASE("model JSON round trip preserves the hash") {
  auto ml = make_layered(1, 0.5, 3.0,
                         SpectralMeasure::atomic(1, {Vec{1.0}, Vec{-1.0}}, {0.5, 0.5}));
  const std::string text = model_to_json_string(ml);
  const LevyModel back = model_from_json_string(text);
  CHECK(model_hash(back) == model_hash(ml));
  CHECK(back.alpha() == ml.alpha());
  CHECK(back.profile().q.family == "powerlaw");
}

TEST_CASE("model JSON rejects unknown families and bad fields") {
  const std::string bad = R"({
    "schema": "levykit-model-1", "dimension": 1, "alpha": 1.0, "beta": 1.0,
    "gamma": 1.0, "drift": [0.0],
    "spectral": {"type": "atomic", "directions": [[1.0]], "weights": [1.0]},
    "profile": {"q": {"family": "mystery", "params": {}},
                "phi": {"family": "one", "params": {}}}})";
  CHECK_THROWS_AS(model_from_json_string(bad), std::invalid_argument);
  CHECK_THROWS_AS(model_from_json_string("{"), std::invalid_argument);
}

TEST_CASE("validate_model passes the reference presets") {
  auto mu1 = SpectralMeasure::atomic(1, {Vec{1.0}, Vec{-1.0}}, {0.5, 0.5});
  for (const LevyModel& m :
       {make_stable(1, 1.0, mu1), make_tempered(1, 1.0, 1.0, mu1),
        make_layered(1, 0.5, 3.0, mu1)}) {
    const auto rep = validate_model(m);
    for (const auto& c : rep.checks) {
      INFO(c.name, ": ", c.detail);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("parameter range validation") {
  auto mu = SpectralMeasure::atomic(1, {Vec{1.0}}, {1.0});
  auto prof = make_profile("one", {}, "one", {});
  CHECK_THROWS_AS(LevyModel(1, 2.0, 2.0, 1.0, Vec{0.0}, mu, prof),
                  std::invalid_argument);
  CHECK_THROWS_AS(LevyModel(1, 0.5, 0.4, 1.0, Vec{0.0}, mu, prof),
                  std::invalid_argument);
  CHECK_THROWS_AS(LevyModel(1, 0.5, 1.0, 2.0, Vec{0.0}, mu, prof),
                  std::invalid_argument);
  CHECK_THROWS_AS(LevyModel(2, 0.5, 1.0, 1.0, Vec{0.0}, mu, prof),
                  std::invalid_argument);
}
