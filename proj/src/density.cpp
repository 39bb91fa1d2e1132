#include "levykit/density.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <sstream>

#include "levykit/bound_shapes.hpp"
#include "levykit/common.hpp"
#include "levykit/parallel.hpp"
#include "levykit/quadrature.hpp"

namespace levykit {

namespace {

std::size_t next_pow2(std::size_t v) {
  std::size_t n = 64;
  while (n < v) n <<= 1;
  return n;
}

constexpr std::size_t kMaxTotalNodes = std::size_t{1} << 24;

struct FftwBuffer {
  fftw_complex* data = nullptr;
  explicit FftwBuffer(std::size_t n) {
    data = fftw_alloc_complex(n);
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
};

}  // namespace

double design_xi_extent(const LevyModel& m, double t, double tol) {
  if (!(t > 0.0)) throw std::invalid_argument("design_grid: t > 0 required");
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("design_grid: tol in (0,1)");
  double c = m.c_lower();
  if (std::isnan(c)) {
    verify_lower_bound(m);
    c = m.c_lower();
  }
  if (!(c > 1e-12))
    throw ValidationError(
        "design_grid: exponent lower bound Re Phi >= c (|xi|^alpha ∧ |xi|^beta) is not "
        "certified positive; the density may not exist");

  const double h = m.h(t);
  const double target = std::log(1.0 / tol) / (t * c);
  double xi = std::pow(target, 1.0 / m.alpha());
  if (xi < 1.0) xi = std::pow(target, 1.0 / m.beta());
  return std::max(xi, 8.0 * M_PI / h);
}

std::size_t max_lattice_axis(int dim) {
  if (dim <= 1) return std::size_t{1} << 24;
  if (dim == 2) return std::size_t{1} << 12;
  return std::size_t{1} << 8;
}

GridSpec design_grid(const LevyModel& m, double t, double tol, double min_extent) {
  const double xi = design_xi_extent(m, t, tol);
  const double h = m.h(t);

  // Spatial coverage: out to where the unit-constant bound drops below tol.
  double half_l = 4.0 * h;
  while (density_upper_bound(m, t, half_l) > tol && half_l < 1e12) half_l *= 1.3;
  half_l += min_extent;
  const double dx = M_PI / xi;
  std::size_t n = next_pow2(static_cast<std::size_t>(std::ceil(2.0 * half_l / dx)));

  if (n > max_lattice_axis(m.dim())) {
    std::ostringstream os;
    os << "design_grid: lattice of " << n << "^" << m.dim()
       << " nodes exceeds the memory budget (2^24 total)";
    throw NumericError(os.str());
  }
  return GridSpec{m.dim(), n, xi};
}

Vec DensityGrid::point(std::size_t flat) const {
  Vec x(static_cast<std::size_t>(dim));
  const long half = static_cast<long>(n) / 2;
  for (int k = dim - 1; k >= 0; --k) {
    const long i = static_cast<long>(flat % n);
    flat /= n;
    x[static_cast<std::size_t>(k)] = static_cast<double>(i - half) * dx;
  }
  return x;
}

std::size_t DensityGrid::flat_index(const std::vector<long>& k) const {
  std::size_t f = 0;
  for (int a = 0; a < dim; ++a) f = f * n + static_cast<std::size_t>(k[static_cast<std::size_t>(a)]);
  return f;
}

double DensityGrid::cell_volume() const {
  double v = 1.0;
  for (int k = 0; k < dim; ++k) v *= dx;
  return v;
}

double DensityGrid::interpolate(const Vec& x) const {
  const long half = static_cast<long>(n) / 2;
  std::vector<long> base(static_cast<std::size_t>(dim));
  Vec frac(static_cast<std::size_t>(dim));
  for (int k = 0; k < dim; ++k) {
    const double u = x[static_cast<std::size_t>(k)] / dx + static_cast<double>(half);
    const double fl = std::floor(u);
    const long i = static_cast<long>(fl);
    if (i < 0 || i + 1 >= static_cast<long>(n)) return 0.0;
    base[static_cast<std::size_t>(k)] = i;
    frac[static_cast<std::size_t>(k)] = u - fl;
  }
  double out = 0.0;
  const int corners = 1 << dim;
  for (int cmask = 0; cmask < corners; ++cmask) {
    double w = 1.0;
    std::vector<long> idx(base);
    for (int k = 0; k < dim; ++k) {
      if (cmask & (1 << k)) {
        idx[static_cast<std::size_t>(k)] += 1;
        w *= frac[static_cast<std::size_t>(k)];
      } else {
        w *= 1.0 - frac[static_cast<std::size_t>(k)];
      }
    }
    out += w * p[flat_index(idx)];
  }
  return out;
}

namespace {

// Shared FFT/normalization back end: callers provide exp(-t Phi) per node.
DensityGrid invert_impl(const std::function<std::complex<double>(const Vec&)>& f,
                        int dim, double t, const GridSpec& spec);

}  // namespace

DensityGrid invert_grid(const CharExponentGrid& g, double t) {
  const GridSpec spec{g.dim, g.n, g.xi_extent};
  const double dxi = g.dxi();
  const long half = static_cast<long>(g.n) / 2;
  auto f = [&](const Vec& xi) {
    std::size_t flat = 0;
    for (int k = 0; k < g.dim; ++k) {
      const long i =
          std::lround(xi[static_cast<std::size_t>(k)] / dxi) + half;
      flat = flat * g.n + static_cast<std::size_t>(i);
    }
    return std::exp(-t * g.values[flat]);
  };
  return invert_impl(f, g.dim, t, spec);
}

DensityGrid invert_with(const ExponentEvaluator& ev, int dim, double t,
                        const GridSpec& spec) {
  auto f = [&](const Vec& xi) { return std::exp(-t * ev(xi)); };
  return invert_impl(f, dim, t, spec);
}

namespace {

DensityGrid invert_impl(const std::function<std::complex<double>(const Vec&)>& f,
                        int dim, double t, const GridSpec& spec) {
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("invert: lattice inversion supports d <= 3");
  if (!(t > 0.0)) throw std::invalid_argument("invert: t > 0 required");
  const std::size_t n = spec.n;
  if (n < 4 || (n & (n - 1)) != 0)
    throw std::invalid_argument("invert: n must be a power of two >= 4");
  std::size_t total = 1;
  for (int k = 0; k < dim; ++k) total *= n;
  if (total > kMaxTotalNodes) throw NumericError("invert: lattice exceeds memory budget");

  FftwBuffer buf(total);
  int dims[3] = {static_cast<int>(n), static_cast<int>(n), static_cast<int>(n)};
  fftw_plan plan =
      fftw_plan_dft(dim, dims, buf.data, buf.data, FFTW_FORWARD, FFTW_ESTIMATE);

  const double dxi = spec.dxi();
  const long half = static_cast<long>(n) / 2;
  const std::size_t rows = total / n;
  parallel_chunks(rows, [&](std::size_t row) {
    Vec xi(static_cast<std::size_t>(dim));
    std::size_t rest = row;
    long parity_head = 0;
    for (int k = dim - 2; k >= 0; --k) {
      const long i = static_cast<long>(rest % n);
      rest /= n;
      xi[static_cast<std::size_t>(k)] = static_cast<double>(i - half) * dxi;
      parity_head += i;
    }
    const std::size_t base = row * n;
    for (std::size_t j = 0; j < n; ++j) {
      xi[static_cast<std::size_t>(dim - 1)] = (static_cast<double>(j) - half) * dxi;
      bool zero = true;
      for (double c : xi) zero = zero && (c == 0.0);
      std::complex<double> v = zero ? std::complex<double>{1.0, 0.0} : f(xi);
      if ((parity_head + static_cast<long>(j)) & 1) v = -v;
      buf.data[base + j][0] = v.real();
      buf.data[base + j][1] = v.imag();
    }
  });

  fftw_execute(plan);
  fftw_destroy_plan(plan);

  DensityGrid g;
  g.dim = dim;
  g.n = n;
  g.dx = spec.dx();
  g.t = t;
  g.xi_extent = spec.xi_extent;
  g.p.resize(total);
  const double scale = std::pow(dxi / (2.0 * M_PI), dim);
  double mass = 0.0, amass = 0.0, mn = 0.0, mx = 0.0, mim = 0.0;
  for (std::size_t f = 0; f < total; ++f) {
    double re = buf.data[f][0] * scale;
    double im = buf.data[f][1] * scale;
    // undo the centering parity on the output side
    std::size_t rest = f;
    long par = 0;
    for (int k = 0; k < dim; ++k) {
      par += static_cast<long>(rest % n);
      rest /= n;
    }
    if (par & 1) {
      re = -re;
      im = -im;
    }
    g.p[f] = re;
    mass += re;
    amass += std::abs(re);
    mn = std::min(mn, re);
    mx = std::max(mx, re);
    mim = std::max(mim, std::abs(im));
  }
  const double cell = g.cell_volume();
  g.total_mass = mass * cell;
  g.abs_mass = amass * cell;
  g.min_value = mn;
  g.max_value = mx;
  g.max_imag = mim;

  if (std::abs(g.abs_mass - 1.0) > 1e-3) {
    std::ostringstream os;
    os << "invert: lattice under-resolved (|p| mass " << g.abs_mass
       << " deviates from 1 by more than 1e-3)";
    throw NumericError(os.str());
  }
  if (g.min_value < -1e-6 * std::max(g.max_value, 0.0)) {
    std::ostringstream os;
    os << "invert: negative undershoot " << g.min_value << " exceeds the Gibbs budget ("
       << -1e-6 * g.max_value << ")";
    throw NumericError(os.str());
  }
  return g;
}

}  // namespace

DensityGrid invert(const LevyModel& m, double t, const GridSpec& spec, double tol) {
  const double w_max = spec.xi_extent * std::sqrt(static_cast<double>(m.dim())) * 1.01;
  ExponentEvaluator ev(m, w_max, tol);
  return invert_with(ev, m.dim(), t, spec);
}

OnDiagonalReport on_diagonal_check(const LevyModel& m, const std::vector<double>& t_grid,
                                   double tol, double pass_spread) {
  if (t_grid.empty()) throw std::invalid_argument("on_diagonal_check: empty t grid");
  OnDiagonalReport rep;
  const bool stable = m.is_stable();
  GridSpec base{};
  ExponentEvaluator* shared_ev = nullptr;
  std::unique_ptr<ExponentEvaluator> ev_holder;
  if (stable) {
    base = design_grid(m, 1.0, tol);
  }
  double lo = 1e308, hi = 0.0;
  for (double t : t_grid) {
    GridSpec spec = stable ? scale_spec(base, m.h(t)) : design_grid(m, t, tol);
    DensityGrid g;
    if (shared_ev && shared_ev->closed_form()) {
      g = invert_with(*shared_ev, m.dim(), t, spec);
    } else if (stable) {
      ev_holder = std::make_unique<ExponentEvaluator>(
          m, spec.xi_extent * std::sqrt(static_cast<double>(m.dim())) * 1.01, tol);
      shared_ev = ev_holder.get();
      g = invert_with(*shared_ev, m.dim(), t, spec);
    } else {
      g = invert(m, t, spec, tol);
    }
    const double sup = g.max_value;
    const double scaled = sup * std::pow(m.h(t), m.dim());
    rep.rows.push_back({t, sup, scaled});
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
  }
  rep.spread = hi / lo;
  rep.pass = std::isfinite(rep.spread) && rep.spread < pass_spread;
  return rep;
}

std::vector<double> direct_inversion_check(const LevyModel& m, double t,
                                           const std::vector<Vec>& points, double tol) {
  if (points.size() > 32)
    throw std::invalid_argument("direct_inversion_check: at most 32 points");
  if (m.dim() > 2)
    throw std::invalid_argument("direct_inversion_check: d <= 2 only");
  double c = m.c_lower();
  if (std::isnan(c)) {
    verify_lower_bound(m);
    c = m.c_lower();
  }
  if (!(c > 1e-12)) throw ValidationError("direct_inversion_check: lower bound fails");
  double xi_cut = std::pow(std::log(1.0 / (tol * 1e-3)) / (t * c), 1.0 / m.alpha());
  xi_cut = std::max(xi_cut, 1.0);
  ExponentEvaluator ev(m, xi_cut * std::sqrt(static_cast<double>(m.dim())) * 1.01, tol);

  std::vector<double> vals;
  if (m.dim() == 1) {
    for (const auto& x : points) {
      auto f = [&](double w) {
        const std::complex<double> phi = ev(Vec{w});
        return std::exp(-t * phi.real()) * std::cos(x[0] * w - (-t * phi.imag()));
      };
      // e^{-i x w} e^{-t Phi} + c.c. over w > 0
      vals.push_back(quad::integrate(f, 0.0, xi_cut, tol, 60000).value / M_PI);
    }
    return vals;
  }
  for (const auto& x : points) {
    auto outer = [&](double w1) {
      auto inner_re = [&](double w2) {
        const std::complex<double> phi = ev(Vec{w1, w2});
        const double ph = x[0] * w1 + x[1] * w2 + t * phi.imag();
        return std::exp(-t * phi.real()) * std::cos(ph);
      };
      return quad::integrate(inner_re, -xi_cut, xi_cut, tol * 10.0, 60000).value;
    };
    vals.push_back(quad::integrate(outer, -xi_cut, xi_cut, tol * 100.0, 60000).value /
                   (4.0 * M_PI * M_PI));
  }
  return vals;
}

void write_density_csv(const DensityGrid& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  for (int k = 0; k < g.dim; ++k) out << "x" << (k + 1) << ",";
  out << "p\n";
  out.precision(12);
  for (std::size_t f = 0; f < g.size(); ++f) {
    const Vec x = g.point(f);
    for (double c : x) out << c << ",";
    // exported values are clamped at 0; diagnostics keep the raw sign
    out << std::max(0.0, g.p[f]) << "\n";
  }
}

void write_density_binary(const DensityGrid& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  const char magic[8] = {'L', 'K', 'D', 'G', '0', '0', '0', '1'};
  out.write(magic, 8);
  const std::uint32_t dim = static_cast<std::uint32_t>(g.dim);
  const std::uint64_t n = g.n;
  out.write(reinterpret_cast<const char*>(&dim), 4);
  out.write(reinterpret_cast<const char*>(&n), 8);
  out.write(reinterpret_cast<const char*>(&g.dx), 8);
  out.write(reinterpret_cast<const char*>(&g.t), 8);
  for (std::size_t f = 0; f < g.size(); ++f) {
    const double v = std::max(0.0, g.p[f]);
    out.write(reinterpret_cast<const char*>(&v), 8);
  }
}

}  // namespace levykit
