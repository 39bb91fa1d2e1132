#include <doctest.h>

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstdio>

#include "levykit/common.hpp"
#include "levykit/density.hpp"
#include "levykit/presets.hpp"
#include "oracles.hpp"

using namespace levykit;

namespace {

// Symmetric 1-stable model normalized so Re Phi(xi) = |xi| exactly; its
// density is the Cauchy law t/(pi (t^2 + x^2)).
LevyModel unit_cauchy() {
  const double w = 1.0 / M_PI;
  return make_stable(1, 1.0, SpectralMeasure::atomic(1, {Vec{1.0}, Vec{-1.0}}, {w, w}));
}

LevyModel tempered1d() {
  return make_tempered(1, 1.0, 1.0,
                       SpectralMeasure::atomic(1, {Vec{1.0}, Vec{-1.0}}, {0.5, 0.5}));
}

}  // namespace

TEST_CASE("design rule: frequency extent from the spectral tail") {
  auto m = unit_cauchy();
  verify_lower_bound(m);
  CHECK(m.c_lower() == doctest::Approx(1.0).epsilon(1e-9));
  // with c_lower = pi the example extent is 12 ln 10 / pi ~ 8.8
  auto mpi = make_stable(1, 1.0,
                         SpectralMeasure::atomic(1, {Vec{1.0}, Vec{-1.0}}, {1.0, 1.0}));
  verify_lower_bound(mpi);
  CHECK(mpi.c_lower() == doctest::Approx(M_PI).epsilon(1e-9));
  CHECK(design_xi_extent(mpi, 1.0, 1e-12) >= 12.0 * std::log(10.0) / M_PI - 1e-9);

  // strictly monotone in tol while the tail rule binds
  auto mt = tempered1d();
  verify_lower_bound(mt);
  const double x1 = design_xi_extent(mt, 1.0, 1e-6);
  const double x2 = design_xi_extent(mt, 1.0, 1e-9);
  const double x3 = design_xi_extent(mt, 1.0, 1e-12);
  CHECK(x1 < x2);
  CHECK(x2 < x3);
  // doubling t halves t Xi^alpha's requirement: Xi(2t)^a = Xi(t)^a / 2
  const double xa = design_xi_extent(mt, 0.001, 1e-9);
  const double xb = design_xi_extent(mt, 0.002, 1e-9);
  CHECK(std::pow(xb, mt.alpha()) * 2.0 ==
        doctest::Approx(std::pow(xa, mt.alpha())).epsilon(1e-6));
}

TEST_CASE("Cauchy closed form: 1e-6 relative on |x| <= 10") {
  auto m = unit_cauchy();
  const double t = 1.0;
  const GridSpec spec = design_grid(m, t, 1e-9);
  const DensityGrid g = invert(m, t, spec);
  CHECK(std::abs(g.total_mass - 1.0) < 1e-6);
  double worst = 0.0;
  for (std::size_t f = 0; f < g.size(); ++f) {
    const double x = g.point(f)[0];
    if (std::abs(x) > 10.0) continue;
    const double want = oracles::cauchy_density(t, x);
    worst = std::max(worst, std::abs(g.p[f] - want) / want);
  }
  CHECK(worst < 1e-6);
  // p_1(0) = 1/pi
  std::vector<long> center{static_cast<long>(g.n) / 2};
  CHECK(g.p[g.flat_index(center)] == doctest::Approx(1.0 / M_PI).epsilon(1e-8));
}

TEST_CASE("probability mass and symmetry invariants") {
  auto m = tempered1d();
  const DensityGrid g = invert(m, 1.0, design_grid(m, 1.0, 1e-10));
  CHECK(std::abs(g.total_mass - 1.0) < 1e-4);
  CHECK(g.min_value >= -1e-6 * g.max_value);
  // symmetric model: p(x) = p(-x) to 1e-8 relative (above the lattice
  // noise floor; below it only absolute symmetry is meaningful)
  double worst = 0.0;
  const long n = static_cast<long>(g.n);
  for (long j = 1; j < n; ++j) {
    const double a = g.p[static_cast<std::size_t>(j)];
    const double b = g.p[static_cast<std::size_t>(n - j)];
    if (a > 1e-6 * g.max_value) worst = std::max(worst, std::abs(a - b) / a);
    CHECK(std::abs(a - b) < 1e-12 * g.max_value);
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("stable scaling: p_t(x) = t^{-d/a} p_1(t^{-1/a} x) on matched lattices") {
  // one-sided 0.7-stable: exercises the drift/asymmetric path too
  auto m = make_stable(1, 0.7, SpectralMeasure::atomic(1, {Vec{1.0}}, {1.0}));
  const GridSpec base = design_grid(m, 1.0, 1e-8);
  const DensityGrid g1 = invert(m, 1.0, base);
  for (double t : {0.25, 4.0}) {
    const double h = std::pow(t, 1.0 / 0.7);
    const DensityGrid gt = invert(m, t, scale_spec(base, h));
    double worst = 0.0;
    const double hd = h;
    for (std::size_t f = 0; f < g1.size(); ++f) {
      const double ref = g1.p[f];
      if (ref < 1e-10 * g1.max_value) continue;
      worst = std::max(worst, std::abs(gt.p[f] * hd - ref) / ref);
    }
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("on-diagonal sweep: exactly flat for stable, bounded for tempered") {
  SUBCASE("Cauchy: sup p_t * t = 1/pi across four decades") {
    auto m = unit_cauchy();
    std::vector<double> ts;
    for (int k = 0; k <= 8; ++k) ts.push_back(std::pow(10.0, -2.0 + 0.5 * k));
    const auto rep = on_diagonal_check(m, ts, 1e-8);
    CHECK(rep.pass);
    CHECK(rep.spread < 1.0 + 1e-6);
    for (const auto& row : rep.rows)
      CHECK(row.sup_scaled == doctest::Approx(1.0 / M_PI).epsilon(1e-6));
  }
  SUBCASE("tempered: bounded spread") {
    auto m = tempered1d();
    const auto rep = on_diagonal_check(m, {0.01, 0.1, 1.0, 10.0, 100.0}, 1e-8);
    CHECK(rep.pass);
    CHECK(rep.spread < 10.0);
  }
}

TEST_CASE("Chapman-Kolmogorov on the lattice: p_t * p_t vs p_2t") {
  auto m = tempered1d();
  const GridSpec spec = design_grid(m, 2.0, 1e-10);  // window sized for 2t
  const DensityGrid ga = invert(m, 1.0, spec);
  const DensityGrid gb = invert(m, 2.0, spec);
  const std::size_t n = ga.n;
  // circular self-convolution via FFT on the same lattice
  std::vector<std::complex<double>> buf(n);
  for (std::size_t i = 0; i < n; ++i) buf[i] = ga.p[i];
  fftw_plan fwd = fftw_plan_dft_1d(static_cast<int>(n),
                                   reinterpret_cast<fftw_complex*>(buf.data()),
                                   reinterpret_cast<fftw_complex*>(buf.data()),
                                   FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(fwd);
  fftw_destroy_plan(fwd);
  for (auto& z : buf) z *= z;
  fftw_plan bwd = fftw_plan_dft_1d(static_cast<int>(n),
                                   reinterpret_cast<fftw_complex*>(buf.data()),
                                   reinterpret_cast<fftw_complex*>(buf.data()),
                                   FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_execute(bwd);
  fftw_destroy_plan(bwd);
  // circular index shift: x_j + x_k lands at j + k - n/2 (mod n)
  double l1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t src = (i + n / 2) % n;
    const double conv = buf[src].real() / static_cast<double>(n) * ga.dx;
    l1 += std::abs(conv - gb.p[i]) * gb.dx;
  }
  CHECK(l1 < 1e-3);
}

TEST_CASE("refinement convergence: halving the frequency step") {
  for (const LevyModel& m : {tempered1d(),
                             make_layered(1, 0.5, 3.0,
                                          SpectralMeasure::atomic(
                                              1, {Vec{1.0}, Vec{-1.0}}, {0.5, 0.5}))}) {
    const GridSpec coarse = design_grid(m, 1.0, 1e-10);
    const GridSpec fine{coarse.dim, coarse.n * 2, coarse.xi_extent};  // same dx
    const DensityGrid gc = invert(m, 1.0, coarse);
    const DensityGrid gf = invert(m, 1.0, fine);
    double worst = 0.0;
    for (std::size_t j = 0; j < gc.size(); ++j) {
      const std::size_t jf = j + gc.n / 2;  // same x in the doubled window
      worst = std::max(worst, std::abs(gc.p[j] - gf.p[jf]));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("direct quadrature inversion agrees with the FFT lattice") {
  SUBCASE("1-d tempered") {
    auto m = tempered1d();
    const DensityGrid g = invert(m, 1.0, design_grid(m, 1.0, 1e-10));
    std::vector<Vec> pts;
    std::vector<double> lattice_vals;
    for (long off : {0L, 7L, 31L}) {
      const std::size_t f = g.n / 2 + static_cast<std::size_t>(off);
      pts.push_back(g.point(f));
      lattice_vals.push_back(g.p[f]);
    }
    const auto direct = direct_inversion_check(m, 1.0, pts, 1e-11);
    for (std::size_t i = 0; i < pts.size(); ++i)
      CHECK(std::abs(direct[i] - lattice_vals[i]) < 1e-7);
  }
  SUBCASE("2-d tempered (light tails: tight lattice agreement)") {
    auto mu = SpectralMeasure::atomic(
        2, {Vec{1.0, 0.0}, Vec{0.0, 1.0}, Vec{-1.0, 0.0}, Vec{0.0, -1.0}},
        {0.5, 0.5, 0.5, 0.5});
    auto m = make_tempered(2, 1.0, 1.0, mu);
    const GridSpec spec = design_grid(m, 1.0, 1e-8);
    const DensityGrid g = invert(m, 1.0, spec);
    std::vector<Vec> pts;
    std::vector<double> lattice_vals;
    const long n = static_cast<long>(g.n);
    for (long ox : {0L, 5L}) {
      std::vector<long> idx{n / 2 + ox, n / 2 - 2 * ox};
      const std::size_t f = g.flat_index(idx);
      pts.push_back(g.point(f));
      lattice_vals.push_back(g.p[f]);
    }
    const auto direct = direct_inversion_check(m, 1.0, pts, 1e-8);
    for (std::size_t i = 0; i < pts.size(); ++i)
      CHECK(std::abs(direct[i] - lattice_vals[i]) < 1e-5 * (lattice_vals[i] + 0.01));
  }
}

TEST_CASE("under-resolved lattice is rejected") {
  auto m = tempered1d();
  // frequency window far too small: heavy spectral truncation
  CHECK_THROWS_AS(invert(m, 0.001, GridSpec{1, 256, 3.0}), NumericError);
}

TEST_CASE("degenerate model: density path refuses") {
  auto mu = SpectralMeasure::atomic(2, {Vec{1.0, 0.0}}, {1.0});
  auto prof = make_profile("one", {}, "one", {});
  LevyModel m(2, 0.8, 0.8, 1.0, zero_vec(2), mu, prof);
  CHECK_THROWS_AS(design_grid(m, 1.0, 1e-8), ValidationError);
}

TEST_CASE("binary dump layout") {
  auto m = tempered1d();
  GridSpec spec{1, 64, 16.0};
  const DensityGrid g = invert(m, 2.0, spec);
  const std::string path = "/tmp/levykit_test_grid.bin";
  write_density_binary(g, path);
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  REQUIRE(fp != nullptr);
  char magic[8];
  std::uint32_t dim;
  std::uint64_t n;
  double dx, t;
  REQUIRE(std::fread(magic, 1, 8, fp) == 8);
  CHECK(std::string(magic, 8) == "LKDG0001");
  REQUIRE(std::fread(&dim, 4, 1, fp) == 1);
  REQUIRE(std::fread(&n, 8, 1, fp) == 1);
  REQUIRE(std::fread(&dx, 8, 1, fp) == 1);
  REQUIRE(std::fread(&t, 8, 1, fp) == 1);
  CHECK(dim == 1);
  CHECK(n == 64);
  CHECK(dx == doctest::Approx(g.dx));
  CHECK(t == doctest::Approx(2.0));
  std::vector<double> vals(64);
  REQUIRE(std::fread(vals.data(), 8, 64, fp) == 64);
  std::fclose(fp);
  CHECK(vals[32] == doctest::Approx(g.p[32]));
  for (double v : vals) CHECK(v >= 0.0);  // exported values are clamped
}
