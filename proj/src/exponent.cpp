#include "levykit/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "levykit/common.hpp"
#include "levykit/parallel.hpp"
#include "levykit/quadrature.hpp"

namespace levykit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Radial {
  double alpha;
  const RadialProfile* prof;
  double operator()(double s) const {
    return std::pow(s, -1.0 - alpha) * prof->q(s) * prof->phi(s);
  }
};

// \int_b^inf s^{-1-a} q phi ds <= q(b) phi(b) b^{-a} / a.
double tail_majorant(const Radial& rho, double b) {
  return rho.prof->q(b) * rho.prof->phi(b) * std::pow(b, -rho.alpha) / rho.alpha;
}

// Monotone piece \int ρ over [a, b] (b possibly infinite).
double mono_mass(const Radial& rho, double a, double b, double tol) {
  if (a >= b) return 0.0;
  if (std::isfinite(b)) return quad::integrate_log(rho, a, b, tol).value;
  auto f = [&rho](double s) { return rho(s); };
  return quad::integrate_tail(f, a, [&rho](double x) { return tail_majorant(rho, x); },
                              tol)
      .value;
}

}  // namespace

double radial_cos_integral(double alpha, const RadialProfile& prof, double lo,
                           double hi, double w_signed, double abs_tol) {
  if (w_signed == 0.0) return 0.0;
  const double w = std::abs(w_signed);
  const Radial rho{alpha, &prof};
  if (!(lo >= 0.0) || !(hi > lo)) throw std::invalid_argument("radial window: bad range");
  const double q0phi0 = prof.q0() * prof.phi0();
  const double tol = abs_tol / 4.0;

  double re = 0.0;
  // Compensated inner region up to the oscillation scale.
  const double m_re = std::clamp(1.0 / w, lo, hi);
  if (m_re > lo) {
    double eps = lo;
    if (lo == 0.0) {
      // below eps: |(cos-1)| rho <= w^2 s^2/2 * s^{-1-a} q0 phi0
      eps = std::pow(tol * (2.0 - alpha) / (w * w * q0phi0), 1.0 / (2.0 - alpha));
      eps = std::min(eps, 0.5 * m_re);
    }
    re += quad::integrate_log(
              [&](double s) { return -one_minus_cos(w * s) * rho(s); }, eps, m_re, tol)
              .value;
  }
  if (m_re < hi) {
    re -= mono_mass(rho, m_re, hi, tol);
    re += quad::oscillatory([&rho](double s) { return rho(s); }, w, /*sine=*/false,
                            m_re, hi, tol)
              .value;
  }
  return re;
}

std::complex<double> radial_cf_integral(double alpha, const RadialProfile& prof,
                                        const RadialWindow& win, double w_signed,
                                        double abs_tol) {
  if (w_signed == 0.0) return {0.0, 0.0};
  const double w = std::abs(w_signed);
  const Radial rho{alpha, &prof};
  const double lo = win.lo, hi = win.hi;
  if (!(lo >= 0.0) || !(hi > lo)) throw std::invalid_argument("radial window: bad range");
  const double q0phi0 = prof.q0() * prof.phi0();
  const double tol = abs_tol / 8.0;

  const double re = radial_cos_integral(alpha, prof, lo, hi, w, abs_tol * 0.5);

  // Imaginary part.
  double im = 0.0;
  const double cstar = std::min(win.comp, hi);
  const double m_im = std::clamp(1.0 / w, lo, hi);
  const double inner_hi = std::min(m_im, cstar);
  if (inner_hi > lo) {
    double eps = lo;
    if (lo == 0.0) {
      // below eps: |sin(ws)-ws| rho <= w^3 s^3/6 * s^{-1-a} q0 phi0
      eps = std::pow(6.0 * tol * (3.0 - alpha) / (w * w * w * q0phi0),
                     1.0 / (3.0 - alpha));
      eps = std::min(eps, 0.5 * inner_hi);
    }
    im += quad::integrate_log([&](double s) { return sin_minus_x(w * s) * rho(s); },
                              eps, inner_hi, tol)
              .value;
  }
  if (cstar < m_im) {
    // Uncompensated smooth region (ws < 1, no zero crossings).
    double a0 = std::max(cstar, lo);
    if (a0 < m_im) {
      double eps = a0;
      if (a0 == 0.0) {
        if (alpha >= 1.0)
          throw NumericError("radial_cf_integral: uncompensated window needs alpha < 1");
        eps = std::pow(tol * (1.0 - alpha) / (w * q0phi0), 1.0 / (1.0 - alpha));
        eps = std::min(eps, 0.5 * m_im);
      }
      im += quad::integrate_log([&](double s) { return std::sin(w * s) * rho(s); }, eps,
                                m_im, tol)
                .value;
    }
  }
  const double mprime = std::max(m_im, lo);
  if (mprime < hi) {
    im += quad::oscillatory([&rho](double s) { return rho(s); }, w, /*sine=*/true,
                            mprime, hi, tol)
              .value;
  }
  if (cstar > mprime) {
    im -= w * quad::integrate_log([&](double s) { return s * rho(s); }, mprime, cstar,
                                  tol)
              .value;
  }

  if (w_signed < 0.0) im = -im;
  return {re, im};
}

std::complex<double> evaluate_exponent(const LevyModel& m, const Vec& xi,
                                       double abs_tol) {
  const auto& dirs = m.mu().directions();
  const auto& wts = m.mu().weights();
  std::complex<double> sum{0.0, 0.0};
  const double per_tol = abs_tol / std::max<std::size_t>(1, dirs.size());
  for (std::size_t a = 0; a < dirs.size(); ++a) {
    const double w = dot(xi, dirs[a]);
    if (w == 0.0) continue;
    sum += wts[a] * radial_cf_integral(m.alpha(), m.profile(), RadialWindow{}, w,
                                       per_tol / std::max(1.0, wts[a]));
  }
  const double db = dot(xi, m.drift());
  return -sum + std::complex<double>(0.0, -db);
}

double stable_prefactor(double alpha) {
  return M_PI / (2.0 * std::sin(0.5 * M_PI * alpha) * std::tgamma(1.0 + alpha));
}

std::complex<double> stable_exponent_closed_form(const SpectralMeasure& mu, double alpha,
                                                 const Vec& xi) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("stable exponent: alpha in (0,2) required");
  const double a_alpha = stable_prefactor(alpha);
  const auto& dirs = mu.directions();
  const auto& wts = mu.weights();
  double re = 0.0, im = 0.0;
  if (alpha == 1.0) {
    if (norm(mu.mean_direction()) > 1e-9 * std::max(1.0, mu.total_mass()))
      throw std::invalid_argument(
          "stable exponent at alpha = 1 requires a centered spectral measure "
          "(int theta mu(dtheta) = 0)");
    for (std::size_t a = 0; a < dirs.size(); ++a) {
      const double w = dot(xi, dirs[a]);
      if (w == 0.0) continue;
      const double aw = std::abs(w);
      re += wts[a] * aw;
      im += wts[a] * aw * (2.0 / M_PI) * ((w > 0.0) ? 1.0 : -1.0) * std::log(aw);
    }
    return a_alpha * std::complex<double>(re, im);
  }
  const double skew = std::tan(0.5 * M_PI * alpha);
  for (std::size_t a = 0; a < dirs.size(); ++a) {
    const double w = dot(xi, dirs[a]);
    if (w == 0.0) continue;
    const double aw = std::pow(std::abs(w), alpha);
    re += wts[a] * aw;
    im -= wts[a] * aw * skew * ((w > 0.0) ? 1.0 : -1.0);
  }
  return a_alpha * std::complex<double>(re, im);
}

// ---------------------------------------------------------------------------
// ExponentTable

ExponentTable::ExponentTable(double alpha, const RadialProfile& prof,
                             const RadialWindow& win, double w_max, double abs_tol,
                             int per_decade)
    : alpha_(alpha), prof_(prof), win_(win), tol_(abs_tol) {
  if (!(w_max > 0.0)) throw std::invalid_argument("ExponentTable: w_max > 0 required");
  w_max_ = w_max * 1.0001;
  w_min_ = w_max_ * 1e-9;
  if (std::isfinite(win_.hi)) {
    // A hard radial cutoff makes J oscillate in w with period 2 pi / hi;
    // keep at least ~10 nodes per period at the top of the table.
    const double need = 3.7 * win_.hi * w_max_;
    per_decade = std::max(per_decade, static_cast<int>(std::min(4000.0, std::ceil(need))));
  }
  const double v1 = std::log(w_max_);
  v0_ = std::log(w_min_);
  const std::size_t n = static_cast<std::size_t>(
      std::ceil((v1 - v0_) / std::log(10.0) * per_decade)) + 2;
  dv_ = (v1 - v0_) / static_cast<double>(n - 1);
  re_.resize(n);
  im_.resize(n);
  parallel_chunks((n + 63) / 64, [&](std::size_t c) {
    const std::size_t b = c * 64, e = std::min(n, b + 64);
    for (std::size_t i = b; i < e; ++i) {
      const double w = std::exp(v0_ + dv_ * static_cast<double>(i));
      const auto J = radial_cf_integral(alpha_, prof_, win_, w, tol_);
      re_[i] = J.real();
      im_[i] = J.imag();
    }
  });

  // Small-w expansion coefficients; fall back to direct quadrature when the
  // radial moments do not exist.
  try {
    const Radial rho{alpha_, &prof_};
    const double lo = std::max(win_.lo, 0.0);
    const double hi = win_.hi;
    auto moment = [&](double p, double a, double b) -> double {
      if (a >= b) return 0.0;
      auto f = [&](double s) { return std::pow(s, p) * rho(s); };
      if (std::isfinite(b)) {
        double start = a;
        if (a == 0.0) {
          if (p <= alpha_) throw NumericError("moment diverges at 0");
          start = std::min(0.5 * b, std::pow(1e-16 * (p - alpha_), 1.0 / (p - alpha_)));
        }
        return quad::integrate_log(f, start, b, 1e-14).value;
      }
      // geometric probe with decreasing-increment acceptance
      double total = 0.0, b0 = std::max(a, 1e-8), b1 = std::max(2.0 * b0, 1.0),
             prev = kInf;
      if (a == 0.0) {
        if (p <= alpha_) throw NumericError("moment diverges at 0");
        b0 = std::pow(1e-16 * (p - alpha_), 1.0 / (p - alpha_));
        b1 = 1.0;
      }
      for (int k = 0; k < 70; ++k) {
        const double inc = quad::integrate_log(f, b0, b1, 1e-14).value;
        total += inc;
        if (inc < 1e-13 && inc <= 0.6 * prev) return total;
        if (k > 40 && inc > prev) throw NumericError("moment tail diverges");
        prev = std::max(inc, 1e-300);
        b0 = b1;
        b1 *= 2.0;
      }
      throw NumericError("moment tail did not settle");
    };
    m2_ = moment(2.0, lo, hi);
    const double cstar = std::min(win_.comp, hi);
    m1_tail_ = (cstar < hi) ? moment(1.0, cstar, hi) : 0.0;
    m3_ = 0.0;
    try {
      m3_ = moment(3.0, lo, std::min(hi, std::isfinite(hi) ? hi : 1.0 / w_min_));
    } catch (const NumericError&) {
      m3_ = 0.0;  // cubic correction optional
    }
    moments_ok_ = true;
    // The expansion must agree with quadrature at the bottom of the table.
    const std::complex<double> probe = small_w(w_min_ * 1.02);
    const std::complex<double> exact =
        radial_cf_integral(alpha_, prof_, win_, w_min_ * 1.02, tol_);
    const double scale = std::abs(exact) + 1e-30;
    if (std::abs(probe - exact) > 1e-5 * scale + 1e-13) moments_ok_ = false;
  } catch (const NumericError&) {
    moments_ok_ = false;
  }
}

std::complex<double> ExponentTable::small_w(double w) const {
  const double re = -0.5 * w * w * m2_;
  const double im = w * m1_tail_ - w * w * w / 6.0 * m3_;
  return {re, im};
}

std::complex<double> ExponentTable::eval(double w_signed) const {
  if (w_signed == 0.0) return {0.0, 0.0};
  const double w = std::abs(w_signed);
  if (w > w_max_)
    throw std::invalid_argument("ExponentTable: |w| beyond table range");
  std::complex<double> J;
  if (w < w_min_) {
    J = moments_ok_ ? small_w(w) : radial_cf_integral(alpha_, prof_, win_, w, tol_);
  } else {
    const double v = (std::log(w) - v0_) / dv_;
    std::size_t i = static_cast<std::size_t>(v);
    i = std::min(i, re_.size() - 2);
    const double t = v - static_cast<double>(i);
    auto cr = [&](const std::vector<double>& y) {
      const double y1 = y[i], y2 = y[i + 1];
      const double y0 = (i > 0) ? y[i - 1] : 2.0 * y1 - y2;
      const double y3 = (i + 2 < y.size()) ? y[i + 2] : 2.0 * y2 - y1;
      return 0.5 * (2.0 * y1 + (y2 - y0) * t +
                    (2.0 * y0 - 5.0 * y1 + 4.0 * y2 - y3) * t * t +
                    (-y0 + 3.0 * y1 - 3.0 * y2 + y3) * t * t * t);
    };
    J = {cr(re_), cr(im_)};
  }
  if (w_signed < 0.0) J = std::conj(J);
  return J;
}

// ---------------------------------------------------------------------------
// ExponentEvaluator

namespace {

Vec strict_stable_drift(const LevyModel& m) {
  // Drift making the q = phi = 1 exponent strictly scale-homogeneous.
  const Vec mean = m.mu().mean_direction();
  if (m.alpha() == 1.0 || norm(mean) == 0.0) return zero_vec(m.dim());
  if (m.alpha() < 1.0) return scaled(mean, 1.0 / (1.0 - m.alpha()));
  return scaled(mean, -1.0 / (m.alpha() - 1.0));
}

}  // namespace

ExponentEvaluator::ExponentEvaluator(const LevyModel& m, double w_max, double abs_tol,
                                     RadialWindow win)
    : model_(m), win_(win) {
  closed_form_ = m.is_stable() && win_.full();
  if (closed_form_) {
    drift_adjust_ = sub(m.drift(), strict_stable_drift(m));
    if (m.alpha() == 1.0 &&
        norm(m.mu().mean_direction()) > 1e-9 * std::max(1.0, m.mu().total_mass()))
      throw std::invalid_argument(
          "alpha = 1 stable exponent requires a centered spectral measure");
  } else {
    drift_adjust_ = m.drift();
    table_ = std::make_shared<const ExponentTable>(m.alpha(), m.profile(), win_, w_max,
                                                   abs_tol);
  }
}

std::complex<double> ExponentEvaluator::operator()(const Vec& xi) const {
  if (closed_form_) {
    std::complex<double> p = stable_exponent_closed_form(model_.mu(), model_.alpha(), xi);
    return p + std::complex<double>(0.0, -dot(xi, drift_adjust_));
  }
  const auto& dirs = model_.mu().directions();
  const auto& wts = model_.mu().weights();
  std::complex<double> sum{0.0, 0.0};
  for (std::size_t a = 0; a < dirs.size(); ++a) {
    const double w = dot(xi, dirs[a]);
    if (w != 0.0) sum += wts[a] * table_->eval(w);
  }
  return -sum + std::complex<double>(0.0, -dot(xi, drift_adjust_));
}

// ---------------------------------------------------------------------------

std::vector<Vec> default_lower_bound_grid(int dim) {
  std::vector<Vec> dirs;
  if (dim == 1) {
    dirs.push_back(Vec{1.0});
    dirs.push_back(Vec{-1.0});
  } else if (dim == 2) {
    for (int k = 0; k < 32; ++k) {
      const double phi = 2.0 * M_PI * (k + 0.37) / 32.0;
      dirs.push_back(Vec{std::cos(phi), std::sin(phi)});
    }
  } else {
    for (int iz = 0; iz < 6; ++iz) {
      const double z = -1.0 + 2.0 * (iz + 0.5) / 6.0;
      const double rc = std::sqrt(std::max(0.0, 1.0 - z * z));
      for (int ip = 0; ip < 12; ++ip) {
        const double phi = 2.0 * M_PI * (ip + 0.31) / 12.0;
        dirs.push_back(Vec{rc * std::cos(phi), rc * std::sin(phi), z});
      }
    }
  }
  // coordinate axes: degenerate measures typically vanish exactly there
  if (dim > 1) {
    for (int a = 0; a < dim; ++a) {
      dirs.push_back(axis_vec(dim, a, 1.0));
      dirs.push_back(axis_vec(dim, a, -1.0));
    }
  }
  std::vector<Vec> grid;
  for (int ir = 0; ir <= 50; ++ir) {
    const double r = std::pow(10.0, -2.0 + 5.0 * ir / 50.0);
    for (const auto& d : dirs) grid.push_back(scaled(d, r));
  }
  return grid;
}

LowerBoundFit verify_lower_bound(const LevyModel& m, const std::vector<Vec>& xi_grid,
                                 double abs_tol) {
  if (xi_grid.empty()) throw std::invalid_argument("verify_lower_bound: empty grid");
  double w_max = 0.0;
  for (const auto& xi : xi_grid) w_max = std::max(w_max, norm(xi));
  ExponentEvaluator ev(m, w_max, abs_tol);
  LowerBoundFit fit;
  fit.c_lower = kInf;
  for (const auto& xi : xi_grid) {
    const double r = norm(xi);
    if (r == 0.0) throw std::invalid_argument("verify_lower_bound: grid must exclude 0");
    const double denom = std::min(std::pow(r, m.alpha()), std::pow(r, m.beta()));
    const double ratio = ev(xi).real() / denom;
    if (ratio < fit.c_lower) {
      fit.c_lower = ratio;
      fit.argmin = xi;
    }
  }
  fit.pass = fit.c_lower > 1e-12;
  m.set_c_lower(fit.c_lower);
  return fit;
}

LowerBoundFit verify_lower_bound(const LevyModel& m) {
  return verify_lower_bound(m, default_lower_bound_grid(m.dim()));
}

TruncatedModulus truncated_exponent_modulus(const LevyModel& m, double r, double t,
                                            const Vec& xi, double abs_tol) {
  if (!(r > 0.0) || !(t > 0.0))
    throw std::invalid_argument("truncated_exponent_modulus: r, t > 0 required");
  TruncatedModulus out;
  const auto& dirs = m.mu().directions();
  const auto& wts = m.mu().weights();
  double re = 0.0;  // \int_{|y|<r} (1 - cos<xi,y>) nu(dy)
  for (std::size_t a = 0; a < dirs.size(); ++a) {
    const double w = dot(xi, dirs[a]);
    if (w != 0.0)
      re -= wts[a] * radial_cos_integral(m.alpha(), m.profile(), 0.0, r, w, abs_tol);
  }
  out.modulus = std::exp(-t * re);
  const double re_phi = evaluate_exponent(m, xi, abs_tol).real();
  const double nu_bar = tail_mass_psi(m, r).nu_bar;
  out.majorant = std::exp(-t * re_phi) * std::exp(2.0 * t * nu_bar);
  return out;
}

namespace {

// Hermitian symmetrization: average paired nodes xi and -xi.
void hermitian_symmetrize(CharExponentGrid& g) {
  const int dim = g.dim;
  const std::size_t n = g.n;
  const std::size_t total = g.values.size();
  auto mirror = [&](std::size_t flat) -> std::size_t {
    std::size_t out = 0;
    for (int k = dim - 1; k >= 0; --k) {
      const std::size_t i = flat % n;
      flat /= n;
      const std::size_t mi = (n - i) % n;
      std::size_t stride = 1;
      for (int kk = dim - 1; kk > k; --kk) stride *= n;
      out += mi * stride;
    }
    return out;
  };
  for (std::size_t f = 0; f < total; ++f) {
    const std::size_t mf = mirror(f);
    if (mf < f) continue;
    if (mf == f) {  // self-paired (Nyquist planes): force the real part
      g.values[f] = {g.values[f].real(), 0.0};
      continue;
    }
    const std::complex<double> avg = 0.5 * (g.values[f] + std::conj(g.values[mf]));
    g.values[f] = avg;
    g.values[mf] = std::conj(avg);
  }
}

}  // namespace

CharExponentGrid make_exponent_grid(const ExponentEvaluator& ev, int dim, std::size_t n,
                                    double xi_extent, const std::string& model_hash,
                                    double tol) {
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("make_exponent_grid: dim in {1,2,3}");
  CharExponentGrid g;
  g.dim = dim;
  g.n = n;
  g.xi_extent = xi_extent;
  g.model_hash = model_hash;
  g.tol = tol;
  std::size_t total = 1;
  for (int k = 0; k < dim; ++k) total *= n;
  g.values.resize(total);
  const double dxi = g.dxi();
  const long half = static_cast<long>(n) / 2;

  const std::size_t rows = total / n;
  parallel_chunks(rows, [&](std::size_t row) {
    Vec xi(static_cast<std::size_t>(dim));
    std::size_t rest = row;
    // decode all but the fastest axis from the row index
    long idx[3] = {0, 0, 0};
    for (int k = dim - 2; k >= 0; --k) {
      idx[k] = static_cast<long>(rest % n);
      rest /= n;
    }
    for (int k = 0; k < dim - 1; ++k)
      xi[static_cast<std::size_t>(k)] = (static_cast<double>(idx[k]) - half) * dxi;
    const std::size_t base = row * n;
    for (std::size_t j = 0; j < n; ++j) {
      xi[static_cast<std::size_t>(dim - 1)] = (static_cast<double>(j) - half) * dxi;
      bool zero = true;
      for (double c : xi) zero = zero && (c == 0.0);
      g.values[base + j] = zero ? std::complex<double>{0.0, 0.0} : ev(xi);
    }
  });

  hermitian_symmetrize(g);
  return g;
}

void save_exponent_grid(const CharExponentGrid& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  const char magic[8] = {'L', 'K', 'E', 'X', '0', '0', '0', '1'};
  out.write(magic, 8);
  const std::uint32_t dim = static_cast<std::uint32_t>(g.dim);
  const std::uint64_t n = g.n;
  std::uint32_t hlen = static_cast<std::uint32_t>(g.model_hash.size());
  out.write(reinterpret_cast<const char*>(&dim), 4);
  out.write(reinterpret_cast<const char*>(&n), 8);
  out.write(reinterpret_cast<const char*>(&g.xi_extent), 8);
  out.write(reinterpret_cast<const char*>(&g.tol), 8);
  out.write(reinterpret_cast<const char*>(&hlen), 4);
  out.write(g.model_hash.data(), hlen);
  out.write(reinterpret_cast<const char*>(g.values.data()),
            static_cast<std::streamsize>(g.values.size() * sizeof(std::complex<double>)));
}

std::optional<CharExponentGrid> load_exponent_grid(const std::string& path,
                                                   const std::string& model_hash,
                                                   int dim, std::size_t n,
                                                   double xi_extent) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  in.read(magic, 8);
  if (!in || std::string(magic, 8) != "LKEX0001") return std::nullopt;
  std::uint32_t fdim = 0, hlen = 0;
  std::uint64_t fn = 0;
  double fxi = 0.0, ftol = 0.0;
  in.read(reinterpret_cast<char*>(&fdim), 4);
  in.read(reinterpret_cast<char*>(&fn), 8);
  in.read(reinterpret_cast<char*>(&fxi), 8);
  in.read(reinterpret_cast<char*>(&ftol), 8);
  in.read(reinterpret_cast<char*>(&hlen), 4);
  if (!in || hlen > 256) return std::nullopt;
  std::string fh(hlen, '\0');
  in.read(fh.data(), hlen);
  if (fdim != static_cast<std::uint32_t>(dim) || fn != n || fh != model_hash ||
      std::abs(fxi - xi_extent) > 1e-12 * std::max(1.0, xi_extent))
    return std::nullopt;
  CharExponentGrid g;
  g.dim = dim;
  g.n = n;
  g.xi_extent = fxi;
  g.tol = ftol;
  g.model_hash = fh;
  std::size_t total = 1;
  for (int k = 0; k < dim; ++k) total *= n;
  g.values.resize(total);
  in.read(reinterpret_cast<char*>(g.values.data()),
          static_cast<std::streamsize>(total * sizeof(std::complex<double>)));
  if (!in) return std::nullopt;
  return g;
}

}  // namespace levykit
