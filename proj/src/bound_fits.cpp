#include "levykit/bound_fits.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "levykit/common.hpp"
#include "levykit/parallel.hpp"
#include "levykit/quadrature.hpp"
#include "levykit/simulate.hpp"

namespace levykit {

namespace {

double shift_radius(const LevyModel& m, double t) {
  return (t <= 1.0) ? std::pow(t, 1.0 / m.alpha()) : std::pow(t, 1.0 / m.beta());
}

}  // namespace

TruncatedDensityFit fit_truncated_density(const LevyModel& m,
                                          const std::vector<double>& t_grid,
                                          double x_over_h, double spectral_tol) {
  if (t_grid.empty()) throw std::invalid_argument("fit_truncated_density: empty grid");
  double c = m.c_lower();
  if (std::isnan(c)) {
    verify_lower_bound(m);
    c = m.c_lower();
  }
  if (!(c > 1e-12)) throw ValidationError("fit_truncated_density: lower bound fails");

  std::vector<double> ss, vv;  // pooled (|x|/h, p_trunc * h^d)
  double vmax = 0.0;
  for (double t : t_grid) {
    const double h = m.h(t);
    const double nu_bar = tail_mass_psi(m, h).nu_bar;
    // |F| <= exp(-t Re Phi + 2 t nu_bar): inflate the spectral budget.
    const double target = (std::log(1.0 / spectral_tol) + 2.0 * t * nu_bar) / (t * c);
    double xi = std::pow(target, 1.0 / m.alpha());
    if (xi < 1.0) xi = std::pow(target, 1.0 / m.beta());
    xi = std::max(xi, 8.0 * M_PI / h);
    const double half_l = 1.05 * x_over_h * h;
    const double dx = M_PI / xi;
    std::size_t n = 64;
    while (static_cast<double>(n) * dx < 2.0 * half_l && n < (std::size_t{1} << 24))
      n <<= 1;

    const RadialWindow win{0.0, h, h};  // fully compensated truncated measure
    ExponentEvaluator ev(m, xi * std::sqrt(static_cast<double>(m.dim())) * 1.01, 1e-10,
                         win);
    const DensityGrid g = invert_with(ev, m.dim(), t, GridSpec{m.dim(), n, xi});
    const double hd = std::pow(h, m.dim());
    for (std::size_t f = 0; f < g.size(); ++f) {
      const double r = norm(g.point(f));
      if (r > x_over_h * h) continue;
      ss.push_back(r / h);
      vv.push_back(g.p[f] * hd);
      vmax = std::max(vmax, vv.back());
    }
  }

  TruncatedDensityFit fit;
  fit.points = ss.size();
  fit.params.c1 = 1.02 * vmax;
  fit.params.c3 = 1.0;
  const double floor = 1e-13 * vmax;
  double c2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ss.size(); ++i) {
    const double s = ss[i];
    if (s < 0.75) continue;
    const double v = std::max(vv[i], floor);
    c2 = std::min(c2, std::log(fit.params.c1 / v) / (s * std::log1p(fit.params.c3 * s)));
  }
  fit.params.c2 = c2;
  fit.pass = std::isfinite(c2) && c2 > 0.0;
  double sup = 0.0;
  for (std::size_t i = 0; i < ss.size(); ++i) {
    const double bound = fit.params.c1 * g_profile(ss[i], fit.params.c2, fit.params.c3);
    if (bound > 0.0) sup = std::max(sup, vv[i] / bound);
  }
  fit.sup_ratio = sup;
  // decay certificate g(s) <= c s^{-2 gamma} for the fitted constants
  double cpow = 0.0;
  for (int i = 1; i <= 400; ++i) {
    const double s = std::pow(10.0, -1.0 + 5.0 * i / 400.0);
    cpow = std::max(cpow, g_profile(s, fit.params.c2, fit.params.c3) *
                              std::pow(s, 2.0 * m.gamma()));
  }
  fit.c_power_2gamma = cpow;
  return fit;
}

DensityBoundFit fit_constants(const LevyModel& m, const std::vector<double>& t_grid,
                              int x_stride, double bound_floor, double spectral_tol) {
  if (t_grid.empty()) throw std::invalid_argument("fit_constants: empty t grid");
  if (x_stride < 1) throw std::invalid_argument("fit_constants: stride >= 1");
  DensityBoundFit out;

  // Large-t exponential-term constants come from the truncated-density fit.
  std::vector<double> large_ts;
  for (double t : t_grid)
    if (t > 1.0) large_ts.push_back(t);
  BoundParams params;
  if (!large_ts.empty()) {
    const TruncatedDensityFit tf =
        fit_truncated_density(m, {large_ts.front()}, 30.0, spectral_tol);
    if (!tf.pass) throw NumericError("fit_constants: truncated-density fit failed");
    params.c2 = tf.params.c2;
    params.c3 = tf.params.c3;
  }

  double c_small = 0.0, c_large = 0.0;
  for (double t : t_grid) {
    const double r_thr = shift_radius(m, t);
    const Vec shift = scaled(centering_shift(m, r_thr), t);
    GridSpec spec;
    bool clamped = false;
    try {
      spec = design_grid(m, t, spectral_tol, norm(shift));
    } catch (const NumericError&) {
      // memory budget: clamp the window and record the reduced coverage
      clamped = true;
      spec = GridSpec{m.dim(), max_lattice_axis(m.dim()),
                      design_xi_extent(m, t, spectral_tol)};
    }
    out.clamped = out.clamped || clamped;
    const DensityGrid g = invert(m, t, spec);

    double coverage = 0.0;
    const bool small_t = (t <= 1.0);
    const long stride = x_stride;
    for (std::size_t f = 0; f < g.size(); ++f) {
      // stride subsampling on every axis
      std::size_t rest = f;
      bool keep = true;
      for (int k = 0; k < m.dim(); ++k) {
        if (static_cast<long>(rest % g.n) % stride != 0) {
          keep = false;
          break;
        }
        rest /= g.n;
      }
      if (!keep) continue;
      const Vec y = g.point(f);
      const double r = norm(sub(y, shift));
      const double shape = density_upper_bound(m, t, r, params);
      if (shape < bound_floor) continue;
      coverage = std::max(coverage, r);
      const double ratio = g.p[f] / shape;
      if (small_t) {
        c_small = std::max(c_small, ratio);
      } else {
        c_large = std::max(c_large, ratio);
      }
      if ((f & 0x3ff) == 0)
        out.rows.push_back({t, r, g.p[f], shape, ratio});
    }
    if (small_t)
      out.coverage_small = std::max(out.coverage_small, coverage);
    else
      out.coverage_large = std::max(out.coverage_large, coverage);
  }
  params.c = c_small;
  params.c1 = c_large;
  out.params = params;
  out.sup_ratio_small = c_small;
  out.sup_ratio_large = c_large;
  out.pass = std::isfinite(c_small) && std::isfinite(c_large) &&
             (c_small > 0.0 || c_large > 0.0);
  return out;
}

ConvPowerReport convolution_power_check(const LevyModel& m, double r, int n_max,
                                        std::size_t cells, int n_annuli) {
  if (m.dim() != 1)
    throw std::invalid_argument("convolution_power_check: d = 1 lattice oracle only");
  if (n_max < 1 || n_max > 8)
    throw std::invalid_argument("convolution_power_check: n_max in [1, 8]");
  ConvPowerReport rep;
  const TailMass tm = tail_mass_psi(m, r);
  rep.psi = tm.psi;
  rep.nu_bar = tm.nu_bar;

  // Upper support quantile: tail mass beyond it below 1e-6 of the total.
  double s_hi = std::max(2.0 * r, 2.0);
  while (m.mu().total_mass() *
             radial_integral(m, s_hi, std::numeric_limits<double>::infinity(), 0.0,
                             false, 1e-14) >
         1e-6 * tm.nu_bar)
    s_hi *= 1.5;
  const double L = 4.0 * static_cast<double>(n_max) * s_hi;
  const double width = 2.0 * L / static_cast<double>(cells);

  // weights of mu on the two half-lines
  double w_pos = 0.0, w_neg = 0.0;
  for (std::size_t a = 0; a < m.mu().directions().size(); ++a) {
    if (m.mu().directions()[a][0] > 0.0)
      w_pos += m.mu().weights()[a];
    else
      w_neg += m.mu().weights()[a];
  }
  auto rho = [&](double s) { return std::pow(s, -1.0 - m.alpha()) * m.qphi(s); };
  auto cell_mass = [&](double a, double b) {  // radial mass on [a, b)
    a = std::max(a, r);
    if (b <= a) return 0.0;
    const double mid = 0.5 * (a + b);
    return (b - a) / 6.0 * (rho(a) + 4.0 * rho(mid) + rho(b));
  };

  std::vector<double> mass(cells, 0.0);
  for (std::size_t i = 0; i < cells; ++i) {
    const double lo = -L + width * static_cast<double>(i);
    const double hi = lo + width;
    if (hi > r) mass[i] += w_pos * cell_mass(std::max(lo, r), hi);
    if (lo < -r) mass[i] += w_neg * cell_mass(std::max(-hi, r), -lo);
  }

  // linear self-convolutions by FFT with enough padding for n_max folds
  std::size_t fft_n = 1;
  while (fft_n < cells * static_cast<std::size_t>(n_max + 1)) fft_n <<= 1;
  std::vector<std::complex<double>> base(fft_n, 0.0), spec(fft_n);
  for (std::size_t i = 0; i < cells; ++i) base[i] = mass[i];
  fftw_plan fwd = fftw_plan_dft_1d(static_cast<int>(fft_n),
                                   reinterpret_cast<fftw_complex*>(base.data()),
                                   reinterpret_cast<fftw_complex*>(spec.data()),
                                   FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(fwd);
  fftw_destroy_plan(fwd);

  // annuli log-spaced between a few cells and half the padded span
  std::vector<double> edges;
  const double a_lo = std::max(0.25 * r, 12.0 * width);
  const double a_hi = 1.8 * L;
  for (int k = 0; k <= n_annuli; ++k)
    edges.push_back(a_lo * std::pow(a_hi / a_lo, static_cast<double>(k) / n_annuli));

  std::vector<std::complex<double>> pw(fft_n), outc(fft_n);
  for (std::size_t i = 0; i < fft_n; ++i) pw[i] = 1.0;
  double c_fit = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    for (std::size_t i = 0; i < fft_n; ++i) pw[i] *= spec[i];
    std::vector<std::complex<double>> tmp(pw);
    fftw_plan bwd = fftw_plan_dft_1d(static_cast<int>(fft_n),
                                     reinterpret_cast<fftw_complex*>(tmp.data()),
                                     reinterpret_cast<fftw_complex*>(outc.data()),
                                     FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(bwd);
    fftw_destroy_plan(bwd);
    // n-fold conv lives on offsets (i1+..+in) - (n-1)*origin; origin index of 0 is cells/2
    const double inv = 1.0 / static_cast<double>(fft_n);
    const long origin = static_cast<long>(cells) / 2;
    double total = 0.0;
    std::vector<double> ann(static_cast<std::size_t>(n_annuli), 0.0);
    for (std::size_t i = 0; i < fft_n; ++i) {
      const double v = outc[i].real() * inv;
      if (v <= 0.0) continue;
      total += v;
      // center of the convolved cell
      const long off = static_cast<long>(i) - static_cast<long>(n) * origin;
      const double x = (static_cast<double>(off) + 0.5 * n) * width;
      const double ax = std::abs(x);
      auto it = std::upper_bound(edges.begin(), edges.end(), ax);
      if (it == edges.begin() || it == edges.end()) continue;
      ann[static_cast<std::size_t>(it - edges.begin() - 1)] += v;
    }
    const double expected = std::pow(tm.nu_bar, n);
    rep.out_of_lattice =
        std::max(rep.out_of_lattice, std::abs(expected - total) / expected);
    for (int k = 0; k < n_annuli; ++k) {
      ConvPowerRow row;
      row.n = n;
      row.a = edges[static_cast<std::size_t>(k)];
      row.b = edges[static_cast<std::size_t>(k) + 1];
      row.oracle = ann[static_cast<std::size_t>(k)];
      const SetDescriptor A{SetDescriptor::Kind::annulus, row.a, 2.0 * row.b, 0.0, 0.0};
      row.shape = convolution_power_bound(m, r, n, A, 1.0, tm.psi);
      rep.rows.push_back(row);
      if (row.oracle > 0.0 && row.shape > 0.0)
        c_fit = std::max(c_fit, std::pow(row.oracle / row.shape, 1.0 / n));
    }
  }
  rep.c_fit = c_fit;
  rep.pass = std::isfinite(c_fit) && c_fit > 0.0 && rep.out_of_lattice < 1e-3;
  return rep;
}

BallBoundReport large_jump_ball_check(const LevyModel& m, double r, double t,
                                      std::size_t n_samples, std::uint64_t seed) {
  if (m.dim() != 1)
    throw std::invalid_argument("large_jump_ball_check: d = 1 only");
  const SampleBatch batch = sample_large_jumps(m, r, t, n_samples, seed);
  const TailMass tm = tail_mass_psi(m, r);
  BallBoundReport rep;
  std::vector<double> xs;
  for (int k = 0; k < 8; ++k) xs.push_back(2.2 * r * std::pow(8.0, k / 7.0));
  const double n = static_cast<double>(n_samples);
  double c_fit = 0.0;
  for (double x : xs) {
    for (double rho_frac : {0.2, 0.45}) {
      BallBoundRow row;
      row.x = x;
      row.rho = rho_frac * x;
      std::size_t hits = 0;
      for (std::size_t i = 0; i < n_samples; ++i)
        if (std::abs(batch.x[i] - x) < row.rho) ++hits;
      row.freq = static_cast<double>(hits) / n;
      row.stderr_freq = std::sqrt(row.freq * (1.0 - row.freq) / n);
      // shape: t e^{-t nu_bar} |x|^{-g-a} q phi(|x|/4) rho^g (c = 1 inside exp)
      row.shape = t * std::exp(t * (tm.psi - tm.nu_bar)) * std::pow(x, -m.gamma() - m.alpha()) *
                  m.profile().q(x) * m.profile().phi(0.25 * x) *
                  std::pow(row.rho, m.gamma());
      rep.rows.push_back(row);
      if (row.shape > 0.0 && row.freq > 0.0)
        c_fit = std::max(c_fit, row.freq / row.shape);
    }
  }
  rep.c_fit = c_fit;
  rep.pass = std::isfinite(c_fit);
  return rep;
}

BoundedTailReport bounded_support_tail_check(const std::vector<Vec>& atoms,
                                             const std::vector<double>& weights,
                                             std::size_t n_samples, std::uint64_t seed,
                                             int n_points) {
  if (atoms.empty() || atoms.size() != weights.size())
    throw std::invalid_argument("bounded_support_tail_check: bad atom list");
  const int d = static_cast<int>(atoms.front().size());
  BoundedTailReport rep;
  rep.n = n_samples;
  double total = 0.0, radius = 0.0;
  Vec drift = zero_vec(d);  // -int_{|y|<=1} y nu0(dy)
  double xi0 = 0.0, M = 0.0;
  {
    std::vector<double> xi0j(static_cast<std::size_t>(d), 0.0),
        Mj(static_cast<std::size_t>(d), 0.0);
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      total += weights[a];
      const double na = norm(atoms[a]);
      radius = std::max(radius, na);
      for (int j = 0; j < d; ++j) {
        const double yj = atoms[a][static_cast<std::size_t>(j)];
        Mj[static_cast<std::size_t>(j)] += weights[a] * yj * yj;
        if (na > 1.0)
          xi0j[static_cast<std::size_t>(j)] += weights[a] * yj;
        else
          drift[static_cast<std::size_t>(j)] -= weights[a] * yj;
      }
    }
    for (int j = 0; j < d; ++j) {
      xi0 = std::max(xi0, std::abs(xi0j[static_cast<std::size_t>(j)]));
      M = std::max(M, Mj[static_cast<std::size_t>(j)]);
    }
  }
  rep.support_radius = radius;
  rep.M = M;
  rep.xi0 = xi0;
  rep.threshold = 2.0 * std::sqrt(static_cast<double>(d)) * (xi0 + M / M_E);

  // cumulative direction table
  std::vector<double> cdf;
  double acc = 0.0;
  for (double w : weights) cdf.push_back(acc += w);
  for (double& cth : cdf) cth /= acc;

  std::vector<double> radii2(n_samples, 0.0);
  const std::size_t chunk = 4096;
  const std::size_t chunks = (n_samples + chunk - 1) / chunk;
  parallel_chunks(chunks, [&](std::size_t c) {
    std::mt19937_64 eng(splitmix64(seed + 1 + c));
    auto uni = [&eng]() { return std::ldexp(static_cast<double>(eng() >> 11), -53); };
    auto poisson = [&](double mean) {
      std::uint32_t k = 0;
      while (mean > 200.0) {
        double lim = std::exp(-200.0), pr = 1.0;
        for (;;) {
          pr *= uni();
          if (pr <= lim) break;
          ++k;
        }
        mean -= 200.0;
      }
      const double lim = std::exp(-mean);
      double pr = 1.0;
      for (;;) {
        pr *= uni();
        if (pr <= lim) return k;
        ++k;
      }
    };
    Vec x(static_cast<std::size_t>(d));
    const std::size_t b0 = c * chunk, b1 = std::min(n_samples, b0 + chunk);
    for (std::size_t i = b0; i < b1; ++i) {
      std::fill(x.begin(), x.end(), 0.0);
      const std::uint32_t k = poisson(total);
      for (std::uint32_t j = 0; j < k; ++j) {
        const double u = uni();
        const std::size_t a = static_cast<std::size_t>(
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        const Vec& y = atoms[std::min(a, atoms.size() - 1)];
        for (int q = 0; q < d; ++q) x[static_cast<std::size_t>(q)] += y[static_cast<std::size_t>(q)];
      }
      for (int q = 0; q < d; ++q) x[static_cast<std::size_t>(q)] += drift[static_cast<std::size_t>(q)];
      radii2[i] = norm2(x);
    }
  });
  std::vector<double> radii(radii2);
  for (double& v : radii) v = std::sqrt(v);
  std::sort(radii.begin(), radii.end());

  // admissible a values spanning the measurable tail
  const double a_min = rep.threshold * 1.0001;
  const double a_max = std::max(a_min * 1.5, radii[n_samples - std::min<std::size_t>(n_samples, 40)] * 1.1);
  rep.pass = true;
  for (int k = 0; k < n_points; ++k) {
    BoundedTailRow row;
    row.a = a_min * std::pow(a_max / a_min, static_cast<double>(k) / (n_points - 1));
    const auto it = std::upper_bound(radii.begin(), radii.end(), row.a);
    row.mc_tail = static_cast<double>(radii.end() - it) / static_cast<double>(n_samples);
    row.bound = bounded_support_tail_bound(row.a, radius, M, xi0, d);
    if (row.mc_tail > row.bound) rep.pass = false;
    rep.rows.push_back(row);
  }
  return rep;
}

BoundedDensityReport bounded_support_density_check(const LevyModel& m,
                                                   double support_radius, double t,
                                                   double x_lo, double x_hi,
                                                   double spectral_tol) {
  if (m.dim() != 1)
    throw std::invalid_argument("bounded_support_density_check: d = 1 only");
  double c = m.c_lower();
  if (std::isnan(c)) {
    verify_lower_bound(m);
    c = m.c_lower();
  }
  const double r = support_radius;
  const double nu_bar = tail_mass_psi(m, r).nu_bar;
  const double target = (std::log(1.0 / spectral_tol) + 2.0 * t * nu_bar) / (t * c);
  double xi = std::pow(target, 1.0 / m.alpha());
  if (xi < 1.0) xi = std::pow(target, 1.0 / m.beta());
  const double dx = M_PI / xi;
  std::size_t n = 64;
  while (static_cast<double>(n) * dx < 2.4 * x_hi && n < (std::size_t{1} << 24)) n <<= 1;

  const RadialWindow win{0.0, r, 1.0};  // unit-ball compensator, bounded support
  ExponentEvaluator ev(m, xi * 1.01, 1e-11, win);
  const DensityGrid g = invert_with(ev, 1, t, GridSpec{1, n, xi});

  BoundedDensityReport rep;
  rep.x_lo = x_lo;
  rep.x_hi = x_hi;
  rep.M = m.mu().total_mass() * radial_integral(m, 0.0, r, 2.0, false);
  double m0 = 0.0, m1 = 0.0;
  for (std::size_t f = 1; f + 1 < g.size(); ++f) {
    m0 = std::max(m0, std::abs(g.p[f]));
    m1 = std::max(m1, std::abs(g.p[f + 1] - g.p[f - 1]) / (2.0 * g.dx));
  }
  rep.m0 = m0;
  rep.m1 = m1;
  BoundParams p;
  p.c2 = 0.25;  // exponent shape from the half-radius tail argument
  p.c3 = 0.25;
  double c1 = 0.0;
  for (std::size_t f = 0; f < g.size(); ++f) {
    const double x = std::abs(g.point(f)[0]);
    if (x < x_lo || x > x_hi) continue;
    p.c1 = 1.0;
    const double shape = bounded_support_density_bound(x, r, rep.M, 0.0, m0, m1, 1, p);
    if (shape > 0.0) c1 = std::max(c1, g.p[f] / shape);
  }
  rep.c1_fit = c1;
  rep.pass = std::isfinite(c1) && c1 > 0.0;
  return rep;
}

}  // namespace levykit
