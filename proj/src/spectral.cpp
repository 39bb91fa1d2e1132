#include "levykit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "levykit/common.hpp"
#include "levykit/quadrature.hpp"

namespace levykit {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(static_cast<std::size_t>(n));
  w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = xi;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      const double dx = p1 / dp;
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = xi;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
    x[static_cast<std::size_t>(i)] = xi;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
}

// Rotation sending e_d (last axis) to the unit vector t, applied to v.
// Householder reflection through the bisector; orthogonal and cheap.
Vec rotate_pole_to(const Vec& t, const Vec& v) {
  const int d = static_cast<int>(t.size());
  Vec u(t);
  u[static_cast<std::size_t>(d - 1)] += 1.0;  // e_d + t
  const double nn = norm2(u);
  if (nn < 1e-24) {  // t = -e_d: reflect last axis
    Vec r(v);
    r[static_cast<std::size_t>(d - 1)] = -r[static_cast<std::size_t>(d - 1)];
    return r;
  }
  // H v = v - 2 u (u.v)/|u|^2; H e_d = -t, so use -H.
  const double c = 2.0 * dot(u, v) / nn;
  Vec r(v);
  for (int i = 0; i < d; ++i) r[static_cast<std::size_t>(i)] = c * u[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(i)];
  return r;
}

double cap_angle(double rho) {
  // Euclidean chord rho <-> geodesic angle.
  const double c = std::clamp(1.0 - 0.5 * rho * rho, -1.0, 1.0);
  return std::acos(c);
}

}  // namespace

SpectralMeasure SpectralMeasure::atomic(int dim, std::vector<Vec> directions,
                                        std::vector<double> weights) {
  if (dim < 1) throw std::invalid_argument("SpectralMeasure: dim >= 1 required");
  if (directions.size() != weights.size() || directions.empty())
    throw std::invalid_argument("SpectralMeasure: directions/weights size mismatch or empty");
  SpectralMeasure m;
  m.dim_ = dim;
  m.atomic_ = true;
  m.tag_ = "atomic";
  for (std::size_t i = 0; i < directions.size(); ++i) {
    if (static_cast<int>(directions[i].size()) != dim)
      throw std::invalid_argument("SpectralMeasure: direction dimension mismatch");
    if (std::abs(norm(directions[i]) - 1.0) > 1e-12)
      throw std::invalid_argument("SpectralMeasure: directions must be unit vectors (1e-12)");
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
      throw std::invalid_argument("SpectralMeasure: weights must be strictly positive");
    m.total_mass_ += weights[i];
  }
  m.dirs_ = std::move(directions);
  m.weights_ = std::move(weights);
  return m;
}

SpectralMeasure SpectralMeasure::density(int dim, std::function<double(const Vec&)> g,
                                         int resolution, std::string tag) {
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("SpectralMeasure::density: dim in {1,2,3} supported");
  if (resolution < 4) throw std::invalid_argument("SpectralMeasure::density: resolution >= 4");
  SpectralMeasure m;
  m.dim_ = dim;
  m.atomic_ = false;
  m.tag_ = std::move(tag);
  m.resolution_ = resolution;
  m.g_ = g;

  if (dim == 1) {
    // S^0 = {+1, -1} with counting surface measure.
    for (double s : {1.0, -1.0}) {
      Vec v{s};
      const double w = g(v);
      if (w < 0.0) throw std::invalid_argument("SpectralMeasure: density must be >= 0");
      if (w > 0.0) {
        m.dirs_.push_back(v);
        m.weights_.push_back(w);
        m.total_mass_ += w;
      }
    }
  } else if (dim == 2) {
    const double dphi = 2.0 * M_PI / resolution;
    for (int i = 0; i < resolution; ++i) {
      const double phi = (i + 0.5) * dphi;
      Vec v{std::cos(phi), std::sin(phi)};
      const double gv = g(v);
      if (gv < 0.0) throw std::invalid_argument("SpectralMeasure: density must be >= 0");
      if (gv > 0.0) {
        m.dirs_.push_back(v);
        m.weights_.push_back(gv * dphi);
        m.total_mass_ += gv * dphi;
      }
    }
  } else {
    const int nz = resolution;
    const int nphi = 2 * resolution;
    std::vector<double> zx, zw;
    gauss_legendre(nz, zx, zw);
    const double dphi = 2.0 * M_PI / nphi;
    for (int iz = 0; iz < nz; ++iz) {
      const double z = zx[static_cast<std::size_t>(iz)];
      const double rc = std::sqrt(std::max(0.0, 1.0 - z * z));
      for (int ip = 0; ip < nphi; ++ip) {
        const double phi = (ip + 0.5) * dphi;
        Vec v{rc * std::cos(phi), rc * std::sin(phi), z};
        const double gv = g(v);
        if (gv < 0.0) throw std::invalid_argument("SpectralMeasure: density must be >= 0");
        const double w = gv * zw[static_cast<std::size_t>(iz)] * dphi;
        if (w > 0.0) {
          m.dirs_.push_back(v);
          m.weights_.push_back(w);
          m.total_mass_ += w;
        }
      }
    }
  }
  if (m.dirs_.empty())
    throw std::invalid_argument("SpectralMeasure: density is identically zero");
  return m;
}

SpectralMeasure SpectralMeasure::uniform(int dim, double total_mass, int resolution) {
  if (!(total_mass > 0.0))
    throw std::invalid_argument("SpectralMeasure::uniform: total_mass > 0 required");
  const double area = (dim == 1) ? 2.0 : (dim == 2) ? 2.0 * M_PI : 4.0 * M_PI;
  const double g0 = total_mass / area;
  auto m = density(dim, [g0](const Vec&) { return g0; }, dim == 1 ? 4 : resolution,
                   "uniform");
  // Normalize away the residual quadrature error in the total mass.
  const double fix = total_mass / m.total_mass_;
  for (double& w : m.weights_) w *= fix;
  m.total_mass_ = total_mass;
  return m;
}

bool SpectralMeasure::nondegenerate() const {
  // Rank of the weighted Gram matrix sum w theta theta^T.
  const int d = dim_;
  std::vector<double> gram(static_cast<std::size_t>(d * d), 0.0);
  for (std::size_t a = 0; a < dirs_.size(); ++a)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        gram[static_cast<std::size_t>(i * d + j)] +=
            weights_[a] * dirs_[a][static_cast<std::size_t>(i)] * dirs_[a][static_cast<std::size_t>(j)];
  // Gaussian elimination with partial pivoting; rank vs. scaled tolerance.
  double scale = 0.0;
  for (double v : gram) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return false;
  int rank = 0;
  std::vector<double> a(gram);
  for (int col = 0; col < d && rank < d; ++col) {
    int piv = -1;
    double best = scale * 1e-10;
    for (int r = rank; r < d; ++r) {
      const double v = std::abs(a[static_cast<std::size_t>(r * d + col)]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (piv < 0) continue;
    for (int j = 0; j < d; ++j)
      std::swap(a[static_cast<std::size_t>(rank * d + j)], a[static_cast<std::size_t>(piv * d + j)]);
    const double p = a[static_cast<std::size_t>(rank * d + col)];
    for (int r = rank + 1; r < d; ++r) {
      const double f = a[static_cast<std::size_t>(r * d + col)] / p;
      for (int j = 0; j < d; ++j)
        a[static_cast<std::size_t>(r * d + j)] -= f * a[static_cast<std::size_t>(rank * d + j)];
    }
    ++rank;
  }
  return rank == d;
}

bool SpectralMeasure::symmetric(double tol) const {
  for (std::size_t i = 0; i < dirs_.size(); ++i) {
    const Vec flip = scaled(dirs_[i], -1.0);
    double matched = 0.0;
    for (std::size_t j = 0; j < dirs_.size(); ++j) {
      if (norm(sub(dirs_[j], flip)) < 1e-9) {
        matched += weights_[j];
      }
    }
    if (std::abs(matched - weights_[i]) > tol * std::max(1.0, total_mass_)) return false;
  }
  return true;
}

Vec SpectralMeasure::mean_direction() const {
  Vec m = zero_vec(dim_);
  for (std::size_t i = 0; i < dirs_.size(); ++i)
    for (int k = 0; k < dim_; ++k) m[static_cast<std::size_t>(k)] += weights_[i] * dirs_[i][static_cast<std::size_t>(k)];
  return m;
}

double SpectralMeasure::cap_mass(const Vec& theta, double rho) const {
  if (!(rho > 0.0)) return 0.0;
  if (atomic_ || dim_ == 1) {
    double m = 0.0;
    for (std::size_t i = 0; i < dirs_.size(); ++i)
      if (norm(sub(dirs_[i], theta)) < rho) m += weights_[i];
    return m;
  }
  const double psi = cap_angle(std::min(rho, 2.0));
  if (dim_ == 2) {
    const double phi0 = std::atan2(theta[1], theta[0]);
    auto f = [&](double phi) {
      Vec v{std::cos(phi), std::sin(phi)};
      return g_(v);
    };
    return quad::integrate(f, phi0 - psi, phi0 + psi, 1e-10 * std::max(1.0, total_mass_)).value;
  }
  // d = 3: integrate over the polar cap around theta in rotated coordinates.
  const double zlo = std::cos(psi);
  auto fz = [&](double z) {
    const double rc = std::sqrt(std::max(0.0, 1.0 - z * z));
    auto fphi = [&](double phi) {
      Vec local{rc * std::cos(phi), rc * std::sin(phi), z};
      return g_(rotate_pole_to(theta, local));
    };
    return quad::integrate(fphi, 0.0, 2.0 * M_PI, 1e-11 * std::max(1.0, total_mass_)).value;
  };
  return quad::integrate(fz, zlo, 1.0, 1e-10 * std::max(1.0, total_mass_)).value;
}

std::string SpectralMeasure::describe() const {
  std::ostringstream os;
  os << (atomic_ ? "atomic" : tag_) << " measure on S^" << (dim_ - 1) << ", mass "
     << total_mass_ << ", " << dirs_.size() << " support nodes";
  return os.str();
}

std::vector<double> default_rho_grid() {
  std::vector<double> g;
  for (int i = 0; i < 24; ++i)
    g.push_back(std::exp(std::log(0.02) + (std::log(2.0) - std::log(0.02)) * i / 23.0));
  return g;
}

GammaFit gamma_exponent(const SpectralMeasure& mu, const std::vector<double>& rho_grid) {
  if (rho_grid.empty()) throw std::invalid_argument("gamma_exponent: empty rho grid");
  if (mu.directions().empty()) throw std::invalid_argument("gamma_exponent: empty support");

  // Envelope over support samples (strided cap for large node sets).
  const auto& dirs = mu.directions();
  const std::size_t stride = std::max<std::size_t>(1, dirs.size() / 256);
  std::vector<double> lrho, lmass;
  for (double rho : rho_grid) {
    double m = 0.0;
    for (std::size_t i = 0; i < dirs.size(); i += stride)
      m = std::max(m, mu.cap_mass(dirs[i], rho));
    if (m > 0.0) {
      lrho.push_back(std::log(rho));
      lmass.push_back(std::log(m));
    }
  }
  if (lrho.size() < 2) throw std::invalid_argument("gamma_exponent: degenerate cap data");

  // Least-squares slope, then the envelope constant for that slope.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(lrho.size());
  for (std::size_t i = 0; i < lrho.size(); ++i) {
    sx += lrho[i];
    sy += lmass[i];
    sxx += lrho[i] * lrho[i];
    sxy += lrho[i] * lmass[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  slope = std::clamp(slope, 0.0, static_cast<double>(mu.dim()) - 1.0);

  GammaFit fit;
  fit.gamma = 1.0 + slope;
  double lc = -1e300;
  for (std::size_t i = 0; i < lrho.size(); ++i)
    lc = std::max(lc, lmass[i] - slope * lrho[i]);
  fit.constant = std::exp(lc);
  double worst = 0.0;
  for (std::size_t i = 0; i < lrho.size(); ++i)
    worst = std::max(worst, std::abs(lmass[i] - (lc + slope * lrho[i])));
  fit.worst_residual = worst;
  return fit;
}

}  // namespace levykit
