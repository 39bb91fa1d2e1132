#include "levykit/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>

#include "levykit/common.hpp"
#include "levykit/parallel.hpp"

namespace levykit {

namespace {

constexpr std::size_t kChunk = 4096;  // samples per RNG stream

// Per-chunk stream: mt19937_64 seeded by splitmix64(seed + 1 + chunk).
// Distributions are hand-rolled so batches are reproducible everywhere.
class Rng {
 public:
  Rng(std::uint64_t seed, std::size_t chunk)
      : eng_(splitmix64(seed + 1 + static_cast<std::uint64_t>(chunk))) {}

  double uniform() {  // [0, 1)
    return std::ldexp(static_cast<double>(eng_() >> 11), -53);
  }

  double gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  // Exact Poisson; multiplication method with additive splitting so the
  // mean may be large without underflow.
  std::uint32_t poisson(double mean) {
    std::uint32_t k = 0;
    while (mean > 200.0) {
      k += poisson_small(200.0);
      mean -= 200.0;
    }
    return k + poisson_small(mean);
  }

 private:
  std::uint32_t poisson_small(double mean) {
    const double limit = std::exp(-mean);
    double prod = 1.0;
    std::uint32_t k = 0;
    for (;;) {
      prod *= uniform();
      if (prod <= limit) return k;
      ++k;
    }
  }
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

struct DirectionSampler {
  std::vector<double> cdf;
  const std::vector<Vec>* dirs;
  explicit DirectionSampler(const SpectralMeasure& mu) : dirs(&mu.directions()) {
    double acc = 0.0;
    for (double w : mu.weights()) {
      acc += w;
      cdf.push_back(acc);
    }
    for (double& c : cdf) c /= acc;
    cdf.back() = 1.0;
  }
  const Vec& draw(Rng& rng) const {
    const double u = rng.uniform();
    const std::size_t i = static_cast<std::size_t>(
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    return (*dirs)[std::min(i, cdf.size() - 1)];
  }
};

// Radius on [lo, hi) from the law ~ s^{-1-alpha} q(s) phi(s) ds:
// inverse-CDF proposal under the pure power law, thinned by q phi / q(lo) phi(lo).
class RadiusSampler {
 public:
  RadiusSampler(const LevyModel& m, double lo, double hi)
      : m_(&m), lo_(lo), hi_(hi), alpha_(m.alpha()), env_(m.qphi(lo)) {
    lo_pow_ = std::pow(lo_, -alpha_);
    hi_pow_ = std::isfinite(hi_) ? std::pow(hi_, -alpha_) : 0.0;
  }
  double draw(Rng& rng) {
    for (;;) {
      const double u = rng.uniform();
      const double s = std::pow(lo_pow_ - u * (lo_pow_ - hi_pow_), -1.0 / alpha_);
      ++proposals_;
      if (rng.uniform() * env_ <= m_->qphi(s)) {
        ++accepts_;
        return s;
      }
      if (proposals_ >= 2000 && accepts_ * 1000 < proposals_) {
        std::ostringstream os;
        os << "radial rejection sampler stalled: acceptance "
           << static_cast<double>(accepts_) / static_cast<double>(proposals_)
           << " below 1e-3; the radial profile is too far from its power-law envelope "
              "at r = "
           << lo_;
        throw NumericError(os.str());
      }
    }
  }
  std::uint64_t proposals() const { return proposals_; }
  std::uint64_t accepts() const { return accepts_; }

 private:
  const LevyModel* m_;
  double lo_, hi_, alpha_, env_, lo_pow_, hi_pow_;
  std::uint64_t proposals_ = 0, accepts_ = 0;
};

// Lower-triangular Cholesky factor of a (small) SPD matrix; zero rows are
// tolerated for degenerate directions.
std::vector<double> cholesky(const std::vector<double>& a, int d) {
  std::vector<double> l(static_cast<std::size_t>(d * d), 0.0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a[static_cast<std::size_t>(i * d + j)];
      for (int k = 0; k < j; ++k)
        s -= l[static_cast<std::size_t>(i * d + k)] * l[static_cast<std::size_t>(j * d + k)];
      if (i == j) {
        l[static_cast<std::size_t>(i * d + i)] = std::sqrt(std::max(0.0, s));
      } else {
        const double piv = l[static_cast<std::size_t>(j * d + j)];
        l[static_cast<std::size_t>(i * d + j)] = (piv > 0.0) ? s / piv : 0.0;
      }
    }
  }
  return l;
}

}  // namespace

SampleBatch sample_large_jumps(const LevyModel& m, double r, double t, std::size_t n,
                               std::uint64_t seed) {
  if (!(r > 0.0) || !(t > 0.0))
    throw std::invalid_argument("sample_large_jumps: r, t > 0 required");
  if (n < 1) throw std::invalid_argument("sample_large_jumps: n >= 1 required");
  const TailMass tm = tail_mass_psi(m, r);
  if (!(tm.nu_bar > 0.0) || !std::isfinite(tm.nu_bar))
    throw std::invalid_argument("sample_large_jumps: |nu_bar_r| must be finite and > 0");

  SampleBatch b;
  b.t = t;
  b.dim = m.dim();
  b.n = n;
  b.x.assign(n * static_cast<std::size_t>(m.dim()), 0.0);
  b.jump_counts.assign(n, 0);
  b.nu_bar_mass = tm.nu_bar;
  b.config.r = r;
  b.config.seed = seed;
  b.config.n = n;
  b.config.include_small = false;

  const DirectionSampler dir(m.mu());
  const double mean = t * tm.nu_bar;
  const int d = m.dim();
  std::atomic<std::uint64_t> props{0}, accs{0};

  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  parallel_chunks(chunks, [&](std::size_t c) {
    Rng rng(seed, c);
    RadiusSampler rad(m, r, std::numeric_limits<double>::infinity());
    const std::size_t b0 = c * kChunk, b1 = std::min(n, b0 + kChunk);
    for (std::size_t i = b0; i < b1; ++i) {
      const std::uint32_t k = rng.poisson(mean);
      b.jump_counts[i] = k;
      double* xi = &b.x[i * static_cast<std::size_t>(d)];
      for (std::uint32_t j = 0; j < k; ++j) {
        const double s = rad.draw(rng);
        const Vec& th = dir.draw(rng);
        for (int a = 0; a < d; ++a) xi[a] += s * th[static_cast<std::size_t>(a)];
      }
    }
    props += rad.proposals();
    accs += rad.accepts();
  });

  double mc = 0.0;
  for (auto k : b.jump_counts) mc += k;
  b.mean_jump_count = mc / static_cast<double>(n);
  b.acceptance_rate =
      props > 0 ? static_cast<double>(accs) / static_cast<double>(props) : 1.0;
  return b;
}

SampleBatch sample_shell(const LevyModel& m, double rho, double r, double t,
                         std::size_t n, std::uint64_t seed) {
  if (!(rho > 0.0 && rho < r)) throw std::invalid_argument("sample_shell: 0 < rho < r");
  SampleBatch b;
  b.t = t;
  b.dim = m.dim();
  b.n = n;
  b.x.assign(n * static_cast<std::size_t>(m.dim()), 0.0);
  b.jump_counts.assign(n, 0);
  b.config.r = r;
  b.config.rho = rho;
  b.config.seed = seed;
  b.config.n = n;

  const int d = m.dim();
  const double shell_mass =
      m.mu().total_mass() * radial_integral(m, rho, r, 0.0, false);
  const Vec comp = scaled(m.mu().mean_direction(),
                          -t * radial_integral(m, rho, r, 1.0, false));
  const DirectionSampler dir(m.mu());
  const double mean = t * shell_mass;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  parallel_chunks(chunks, [&](std::size_t c) {
    Rng rng(seed, c);
    RadiusSampler rad(m, rho, r);
    const std::size_t b0 = c * kChunk, b1 = std::min(n, b0 + kChunk);
    for (std::size_t i = b0; i < b1; ++i) {
      double* xi = &b.x[i * static_cast<std::size_t>(d)];
      const std::uint32_t k = rng.poisson(mean);
      b.jump_counts[i] = k;
      for (std::uint32_t j = 0; j < k; ++j) {
        const double s = rad.draw(rng);
        const Vec& th = dir.draw(rng);
        for (int a = 0; a < d; ++a) xi[a] += s * th[static_cast<std::size_t>(a)];
      }
      for (int a = 0; a < d; ++a) xi[a] += comp[static_cast<std::size_t>(a)];
    }
  });
  b.nu_bar_mass = shell_mass;
  return b;
}

SampleBatch sample_increment(const LevyModel& m, double t, const SimConfig& config) {
  if (!(t > 0.0)) throw std::invalid_argument("sample_increment: t > 0 required");
  if (config.n < 1) throw std::invalid_argument("sample_increment: n >= 1 required");
  SimConfig cfg = config;
  if (cfg.r <= 0.0) cfg.r = m.h(t);
  if (cfg.scheme == SimConfig::Scheme::discard) {
    if (!(cfg.rho > 0.0 && cfg.rho < cfg.r))
      throw std::invalid_argument(
          "sample_increment: the discard scheme requires an explicit inner cutoff "
          "0 < rho < r");
  }

  SampleBatch b = sample_large_jumps(m, cfg.r, t, cfg.n, cfg.seed);
  b.config = cfg;
  const int d = m.dim();
  const Vec shift = scaled(centering_shift(m, cfg.r), t);

  if (cfg.include_small && cfg.scheme == SimConfig::Scheme::gaussian) {
    std::vector<double> cov = second_moment_matrix(m, 0.0, cfg.r);
    for (double& v : cov) v *= t;
    const std::vector<double> L = cholesky(cov, d);
    const std::size_t chunks = (cfg.n + kChunk - 1) / kChunk;
    parallel_chunks(chunks, [&](std::size_t c) {
      Rng rng(splitmix64(cfg.seed ^ 0x5B5Au), c);
      Vec z(static_cast<std::size_t>(d));
      const std::size_t b0 = c * kChunk, b1 = std::min(cfg.n, b0 + kChunk);
      for (std::size_t i = b0; i < b1; ++i) {
        for (int a = 0; a < d; ++a) z[static_cast<std::size_t>(a)] = rng.gauss();
        double* xi = &b.x[i * static_cast<std::size_t>(d)];
        for (int a = 0; a < d; ++a) {
          double s = 0.0;
          for (int k = 0; k <= a; ++k)
            s += L[static_cast<std::size_t>(a * d + k)] * z[static_cast<std::size_t>(k)];
          xi[a] += s;
        }
      }
    });
  } else if (cfg.include_small && cfg.scheme == SimConfig::Scheme::discard) {
    const TruncationMoments shell = truncation_moments(m, cfg.rho, cfg.r);
    b.chebyshev_second_moment =
        t * m.mu().total_mass() * radial_integral(m, 0.0, cfg.rho, 2.0, false);
    // Compensator of the shell (full mean, not the unit-ball cap).
    Vec comp = scaled(m.mu().mean_direction(),
                      -t * radial_integral(m, cfg.rho, cfg.r, 1.0, false));
    const DirectionSampler dir(m.mu());
    const double mean_small = t * shell.mass;
    const std::size_t chunks = (cfg.n + kChunk - 1) / kChunk;
    parallel_chunks(chunks, [&](std::size_t c) {
      Rng rng(splitmix64(cfg.seed ^ 0xD15Cu), c);
      RadiusSampler rad(m, cfg.rho, cfg.r);
      const std::size_t b0 = c * kChunk, b1 = std::min(cfg.n, b0 + kChunk);
      for (std::size_t i = b0; i < b1; ++i) {
        double* xi = &b.x[i * static_cast<std::size_t>(d)];
        const std::uint32_t k = rng.poisson(mean_small);
        for (std::uint32_t j = 0; j < k; ++j) {
          const double s = rad.draw(rng);
          const Vec& th = dir.draw(rng);
          for (int a = 0; a < d; ++a) xi[a] += s * th[static_cast<std::size_t>(a)];
        }
        for (int a = 0; a < d; ++a) xi[a] += comp[static_cast<std::size_t>(a)];
      }
    });
  }

  // deterministic shift t b_r
  for (std::size_t i = 0; i < cfg.n; ++i) {
    double* xi = &b.x[i * static_cast<std::size_t>(d)];
    for (int a = 0; a < d; ++a) xi[a] += shift[static_cast<std::size_t>(a)];
  }
  return b;
}

double Histogram::mass() const {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    s += density[i] * (edges[i + 1] - edges[i]);
  return s;
}

Histogram empirical_density(const std::vector<double>& values, int bins, double lo,
                            double hi) {
  if (bins < 10) throw std::invalid_argument("empirical_density: bins >= 10 required");
  if (!(hi > lo)) throw std::invalid_argument("empirical_density: empty range");
  Histogram h;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  const double w = (hi - lo) / bins;
  for (int i = 0; i <= bins; ++i) h.edges[static_cast<std::size_t>(i)] = lo + w * i;
  std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
  for (double v : values) {
    long i = static_cast<long>(std::floor((v - lo) / w));
    i = std::clamp<long>(i, 0, bins - 1);  // clamp keeps total mass exactly 1
    counts[static_cast<std::size_t>(i)] += 1.0;
  }
  h.density.resize(static_cast<std::size_t>(bins));
  const double n = static_cast<double>(values.size());
  for (int i = 0; i < bins; ++i)
    h.density[static_cast<std::size_t>(i)] = counts[static_cast<std::size_t>(i)] / (n * w);
  return h;
}

Histogram empirical_density(const SampleBatch& batch, int bins) {
  if (batch.dim != 1)
    throw std::invalid_argument("empirical_density: 1-d batches only");
  double lo = 1e308, hi = -1e308;
  for (double v : batch.x) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double pad = 1e-9 * std::max(1.0, hi - lo);
  return empirical_density(batch.x, bins, lo - pad, hi + pad);
}

}  // namespace levykit
