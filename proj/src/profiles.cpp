#include "levykit/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <sstream>

#include "levykit/common.hpp"
#include "levykit/relativistic.hpp"

namespace levykit {

namespace {

double require_param(const std::map<std::string, double>& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end())
    throw std::invalid_argument("profile family: missing parameter '" + key + "'");
  return it->second;
}

// Dense log-s table of log phi for the normalized relativistic kernel;
// built once per (d, alpha) since the kernel quadrature is too slow for
// inner-loop use.
class KdAlphaTable {
 public:
  KdAlphaTable(int d, double alpha) {
    const double log_k0 = std::log(relativistic_kernel_limit0(d, alpha));
    s_lo_ = 1e-6;
    s_hi_ = 760.0;
    n_ = 2400;
    dv_ = (std::log(s_hi_) - std::log(s_lo_)) / (n_ - 1);
    logphi_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const double s = std::exp(std::log(s_lo_) + dv_ * static_cast<double>(i));
      logphi_[i] = relativistic_kernel_log(d, alpha, s) - log_k0;
    }
  }

  double operator()(double s) const {
    if (s <= s_lo_) return std::exp(logphi_.front());
    if (s >= s_hi_) return 0.0;
    const double v = (std::log(s) - std::log(s_lo_)) / dv_;
    std::size_t i = static_cast<std::size_t>(v);
    i = std::min(i, n_ - 2);
    const double t = v - static_cast<double>(i);
    // Catmull-Rom with clamped ends.
    const double y1 = logphi_[i], y2 = logphi_[i + 1];
    const double y0 = (i > 0) ? logphi_[i - 1] : 2.0 * y1 - y2;
    const double y3 = (i + 2 < n_) ? logphi_[i + 2] : 2.0 * y2 - y1;
    const double a = 2.0 * y1;
    const double b = y2 - y0;
    const double c = 2.0 * y0 - 5.0 * y1 + 4.0 * y2 - y3;
    const double e = -y0 + 3.0 * y1 - 3.0 * y2 + y3;
    const double lp = 0.5 * (a + b * t + c * t * t + e * t * t * t);
    return std::exp(lp);
  }

 private:
  double s_lo_, s_hi_, dv_;
  std::size_t n_;
  std::vector<double> logphi_;
};

std::shared_ptr<const KdAlphaTable> kdalpha_table(int d, double alpha) {
  static std::mutex mu;
  static std::map<std::pair<int, long long>, std::shared_ptr<const KdAlphaTable>> cache;
  const auto key = std::make_pair(d, static_cast<long long>(alpha * 1e12));
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto tab = std::make_shared<const KdAlphaTable>(d, alpha);
  cache[key] = tab;
  return tab;
}

}  // namespace

ProfileComponent make_profile_component(const std::string& family,
                                        const std::map<std::string, double>& params) {
  ProfileComponent c;
  c.family = family;
  c.params = params;
  const double inf = std::numeric_limits<double>::infinity();

  if (family == "one") {
    c.fn = [](double) { return 1.0; };
    c.doubling = 1.0;
    c.submult = 1.0;
    c.eta = 0.0;
    c.ratio_monotone = true;
  } else if (family == "powerlaw") {
    const double a = require_param(params, "a");
    if (a < 0.0) throw std::invalid_argument("powerlaw: a >= 0 required");
    c.fn = [a](double s) { return std::pow(1.0 + s, -a); };
    c.doubling = std::pow(2.0, a);
    c.submult = 1.0;
    c.eta = a;
    c.ratio_monotone = true;
  } else if (family == "logpower") {
    const double a = require_param(params, "a");
    const double m = require_param(params, "m");
    if (a < 0.0 || m < 1.0) throw std::invalid_argument("logpower: a >= 0, m >= 1 required");
    c.fn = [a, m](double s) {
      return std::pow(std::log(M_E + s), a) * std::pow(1.0 + s, -m * a);
    };
    c.doubling = std::pow(2.0, m * a);
    c.submult = inf;
    c.eta = m * a;
  } else if (family == "exp") {
    const double lam = require_param(params, "lambda");
    if (!(lam > 0.0)) throw std::invalid_argument("exp: lambda > 0 required");
    c.fn = [lam](double s) { return std::exp(-lam * s); };
    c.doubling = inf;  // not usable as q
    c.submult = 1.0;
    c.eta = inf;
    c.ratio_monotone = true;
  } else if (family == "stretched_exp") {
    const double m = require_param(params, "m");
    const double a = require_param(params, "a");
    if (!(m > 0.0) || !(a > 0.0 && a <= 1.0))
      throw std::invalid_argument("stretched_exp: m > 0, a in (0,1] required");
    c.fn = [m, a](double s) { return std::exp(-m * std::pow(s, a)); };
    c.doubling = inf;
    c.submult = 1.0;  // subadditivity of s^a
    c.eta = inf;
    c.ratio_monotone = true;
  } else if (family == "invlog") {
    const double m = require_param(params, "m");
    if (!(m > 0.0)) throw std::invalid_argument("invlog: m > 0 required");
    c.fn = [m](double s) { return std::pow(std::log(s + M_E), -m); };
    c.doubling = std::pow(1.0 + std::log(2.0), m);
    c.submult = std::pow(2.0, m);
    c.eta = m * std::log2(1.0 + std::log(2.0));
  } else if (family == "kdalpha") {
    const int d = static_cast<int>(require_param(params, "d"));
    const double alpha = require_param(params, "alpha");
    auto tab = kdalpha_table(d, alpha);
    c.fn = [tab](double s) { return (*tab)(s); };
    c.doubling = inf;
    c.submult = inf;  // certified on the hypothesis grid, no closed form
    c.eta = inf;
    c.ratio_monotone = true;
  } else {
    throw std::invalid_argument("unknown profile family '" + family + "'");
  }
  c.value0 = c.fn(0.0);
  return c;
}

std::vector<double> default_hypothesis_grid() {
  std::vector<double> g(512);
  const double lo = std::log(1e-6), hi = std::log(1e3);
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / (g.size() - 1));
  return g;
}

ValidationReport validate_profiles(const RadialProfile& profile,
                                   const std::vector<double>& s_grid) {
  if (s_grid.empty()) throw std::invalid_argument("validate_profiles: empty grid");
  for (std::size_t i = 1; i < s_grid.size(); ++i)
    if (!(s_grid[i] > s_grid[i - 1]) || !(s_grid[i - 1] > 0.0))
      throw std::invalid_argument("validate_profiles: grid must be positive increasing");

  ValidationReport rep;
  std::vector<double> qv(s_grid.size()), pv(s_grid.size());
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    qv[i] = profile.q(s_grid[i]);
    pv[i] = profile.phi(s_grid[i]);
    if (!std::isfinite(qv[i]) || !std::isfinite(pv[i]) || qv[i] <= 0.0 || pv[i] < 0.0) {
      std::ostringstream os;
      os << "invalid profile value at s = " << s_grid[i] << ": q = " << qv[i]
         << ", phi = " << pv[i];
      throw ValidationError(os.str());
    }
  }

  {  // positive, bounded, nonincreasing along the grid
    bool mono = true;
    double worst = 1.0;
    for (std::size_t i = 1; i < s_grid.size(); ++i) {
      const double rq = qv[i] / qv[i - 1];
      const double rp = (pv[i - 1] > 0.0) ? pv[i] / pv[i - 1] : 0.0;
      worst = std::max({worst, rq, rp});
      if (rq > 1.0 + 1e-12 || rp > 1.0 + 1e-12) mono = false;
    }
    rep.checks.push_back({"monotone", mono, worst, "max step ratio of q, phi on grid"});
  }

  {  // doubling of q
    double k1 = 0.0;
    for (double s : s_grid) {
      const double r = profile.q(s) / profile.q(2.0 * s);
      k1 = std::max(k1, r);
    }
    const bool pass = std::isfinite(k1) &&
                      (!std::isfinite(profile.kappa1()) || k1 <= profile.kappa1() * (1.0 + 1e-9));
    rep.checks.push_back({"q_doubling", pass, k1, "max q(s)/q(2s) on grid"});
  }

  {  // submultiplicativity of phi (grid includes 0)
    std::vector<double> ab(s_grid);
    ab.insert(ab.begin(), 0.0);
    double k2 = 0.0;
    for (double a : ab)
      for (double b : ab) {
        if (b < a) continue;
        const double denom = profile.phi(a + b);
        if (denom <= 0.0) continue;
        k2 = std::max(k2, profile.phi(a) * profile.phi(b) / denom);
      }
    const bool pass = std::isfinite(k2);
    rep.checks.push_back({"phi_submultiplicative", pass, k2,
                          "max phi(a)phi(b)/phi(a+b) over grid pairs"});
  }

  {  // power-ratio decay of q: q(r)/q(R) <= c (r/R)^{-eta}
    double eta = profile.eta();
    if (!std::isfinite(eta)) eta = std::log2(std::max(1.0, profile.kappa1()));
    double cbest = 0.0;
    for (std::size_t i = 0; i < s_grid.size(); ++i)
      for (std::size_t j = i; j < s_grid.size(); ++j) {
        const double ratio = qv[i] / qv[j] * std::pow(s_grid[i] / s_grid[j], eta);
        cbest = std::max(cbest, ratio);
      }
    rep.checks.push_back({"q_power_ratio", std::isfinite(cbest), cbest,
                          "max q(r)/q(R) (r/R)^eta over grid pairs"});
  }

  return rep;
}

}  // namespace levykit
