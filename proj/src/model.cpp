#include "levykit/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "levykit/common.hpp"
#include "levykit/quadrature.hpp"

namespace levykit {

LevyModel::LevyModel(int dim, double alpha, double beta, double gamma, Vec drift,
                     SpectralMeasure mu, RadialProfile profile)
    : dim_(dim),
      alpha_(alpha),
      beta_(beta),
      gamma_(gamma),
      drift_(std::move(drift)),
      mu_(std::move(mu)),
      profile_(std::move(profile)) {
  if (dim_ < 1) throw std::invalid_argument("LevyModel: dim >= 1 required");
  if (!(alpha_ > 0.0 && alpha_ < 2.0))
    throw std::invalid_argument("LevyModel: alpha in (0,2) required");
  if (!(beta_ >= alpha_ && beta_ <= 2.0))
    throw std::invalid_argument("LevyModel: beta in [alpha,2] required");
  if (!(gamma_ >= 1.0 && gamma_ <= static_cast<double>(dim_)))
    throw std::invalid_argument("LevyModel: gamma in [1,d] required");
  if (static_cast<int>(drift_.size()) != dim_)
    throw std::invalid_argument("LevyModel: drift dimension mismatch");
  if (mu_.dim() != dim_) throw std::invalid_argument("LevyModel: mu dimension mismatch");
}

double LevyModel::h(double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("h(t): t > 0 required");
  return std::min(std::pow(t, 1.0 / alpha_), std::pow(t, 1.0 / beta_));
}

namespace {

// Geometric-extension tail integral for integrands without a closed-form
// majorant: accepts once increments both fall below tol and keep halving.
double probe_tail(const std::function<double(double)>& f, double lo, double abs_tol,
                  const char* what) {
  double total = 0.0;
  double b0 = lo, b1 = std::max(2.0 * lo, 1.0);
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 80; ++k) {
    const double inc = quad::integrate_log(f, b0, b1, abs_tol * 0.25).value;
    total += inc;
    if (inc < 0.5 * abs_tol && inc <= 0.6 * prev) return total;
    if (k > 45 && inc > prev) {
      std::ostringstream os;
      os << what << ": tail integral does not converge (increment " << inc << " at "
         << b1 << ")";
      throw NumericError(os.str());
    }
    prev = std::max(inc, 1e-300);
    b0 = b1;
    b1 *= 2.0;
  }
  throw NumericError(std::string(what) + ": tail integral did not settle");
}

}  // namespace

double radial_integral(const LevyModel& m, double lo, double hi, double power,
                       bool phi_half_ratio, double abs_tol) {
  const double a = m.alpha();
  const auto& prof = m.profile();
  auto f = [&](double s) {
    double v = std::pow(s, power - 1.0 - a) * prof.q(s) * prof.phi(s);
    if (phi_half_ratio) v /= prof.phi(0.5 * s);
    return v;
  };
  if (!(lo >= 0.0) || !(hi > lo)) throw std::invalid_argument("radial_integral: bad range");

  double value = 0.0, start = lo;
  if (lo == 0.0) {
    if (power <= a) return std::numeric_limits<double>::infinity();
    // Leading-order bound below eps: integrand <= q0 phi0 s^{power-1-a}
    // (the phi(s)/phi(s/2) weight is <= 1).
    const double c0 = prof.q0() * prof.phi0();
    double eps = std::pow(abs_tol * (power - a) / (4.0 * c0), 1.0 / (power - a));
    eps = std::min(eps, (std::isfinite(hi) ? hi : 1.0) * 0.5);
    start = eps;
  }
  if (std::isfinite(hi)) {
    value += quad::integrate_log(f, start, hi, abs_tol * 0.5).value;
    return value;
  }
  if (power < a) {
    // Sharp majorant: \int_b^inf s^{power-1-a} q phi ds <= q(b) phi*(b) b^{power-a}/(a-power).
    const bool rmono = prof.phi.ratio_monotone;
    auto tail_bound = [&](double b) {
      double w = prof.q(b) * (phi_half_ratio
                                  ? (rmono ? prof.phi(b) / prof.phi(0.5 * b) : 1.0)
                                  : prof.phi(b));
      return w * std::pow(b, power - a) / (a - power);
    };
    value += quad::integrate_tail(f, start, tail_bound, abs_tol * 0.5).value;
    return value;
  }
  value += probe_tail(f, start, abs_tol * 0.5, "radial_integral");
  return value;
}

TailMass tail_mass_psi(const LevyModel& m, double r, double abs_tol) {
  if (!(r > 0.0)) throw std::invalid_argument("tail_mass_psi: r > 0 required");
  TailMass tm;
  const double mass = m.mu().total_mass();
  tm.psi = mass * m.profile().phi0() *
           radial_integral(m, r, std::numeric_limits<double>::infinity(), 0.0, true,
                           abs_tol / std::max(1.0, mass));
  tm.nu_bar = mass * radial_integral(m, r, std::numeric_limits<double>::infinity(), 0.0,
                                     false, abs_tol / std::max(1.0, mass));
  return tm;
}

Vec centering_shift(const LevyModel& m, double r, double abs_tol) {
  if (!(r > 0.0)) throw std::invalid_argument("centering_shift: r > 0 required");
  const Vec b = m.drift();
  if (r == 1.0) return b;
  const Vec mean = m.mu().mean_direction();
  if (norm(mean) == 0.0) return b;
  const double lo = std::min(r, 1.0), hi = std::max(r, 1.0);
  const double I = radial_integral(m, lo, hi, 1.0, false, abs_tol);
  const double sign = (r <= 1.0) ? -1.0 : 1.0;
  return add(b, scaled(mean, sign * I));
}

BetaCondition beta_condition_check(const LevyModel& m, const std::vector<double>& r_grid) {
  if (r_grid.empty()) throw std::invalid_argument("beta_condition_check: empty grid");
  BetaCondition bc;
  bc.r_grid = r_grid;
  double cb = 0.0;
  for (double r : r_grid) {
    if (!(r >= 1.0))
      throw std::invalid_argument("beta_condition_check: grid must lie in [1, inf)");
    const double I = radial_integral(m, 0.0, r, 2.0, true, 1e-12);
    bc.integral.push_back(I);
    cb = std::max(cb, I / std::pow(r, 2.0 - m.beta()));
  }
  bc.c_beta = cb;
  bc.pass = std::isfinite(cb);
  m.set_c_beta(cb);
  return bc;
}

TruncationMoments truncation_moments(const LevyModel& m, double rho, double r,
                                     double abs_tol) {
  if (!(rho >= 0.0) || !(r > rho))
    throw std::invalid_argument("truncation_moments: need 0 <= rho < r");
  TruncationMoments tm;
  tm.rho = rho;
  tm.r = r;
  const double mass = m.mu().total_mass();
  tm.mass = mass * radial_integral(m, rho, r, 0.0, false, abs_tol);
  tm.second_moment = mass * radial_integral(m, rho, r, 2.0, false, abs_tol);
  tm.first_moment_vector = zero_vec(m.dim());
  const Vec mean = m.mu().mean_direction();
  const double hi1 = std::min(r, 1.0);
  if (norm(mean) > 0.0 && hi1 > rho) {
    const double I = radial_integral(m, rho, hi1, 1.0, false, abs_tol);
    tm.first_moment_vector = scaled(mean, I);  // +-inf propagates if divergent
  }
  return tm;
}

std::vector<double> second_moment_matrix(const LevyModel& m, double rho, double r,
                                         double abs_tol) {
  const double I = radial_integral(m, rho, r, 2.0, false, abs_tol);
  const int d = m.dim();
  std::vector<double> out(static_cast<std::size_t>(d * d), 0.0);
  const auto& dirs = m.mu().directions();
  const auto& w = m.mu().weights();
  for (std::size_t a = 0; a < dirs.size(); ++a)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        out[static_cast<std::size_t>(i * d + j)] +=
            w[a] * dirs[a][static_cast<std::size_t>(i)] * dirs[a][static_cast<std::size_t>(j)] * I;
  return out;
}

ValidationReport validate_model(const LevyModel& m) {
  ValidationReport rep = validate_profiles(m.profile(), default_hypothesis_grid());

  rep.checks.push_back({"mu_nondegenerate", m.mu().nondegenerate(),
                        static_cast<double>(m.mu().directions().size()),
                        "support spans R^d"});

  {  // growth condition at the declared beta
    std::vector<double> rg;
    for (int i = 0; i < 16; ++i) rg.push_back(std::pow(10.0, 2.0 * i / 15.0));
    bool pass = false;
    double c = std::numeric_limits<double>::infinity();
    std::string detail = "max I(r)/r^{2-beta} on [1, 100]";
    try {
      const BetaCondition bc = beta_condition_check(m, rg);
      pass = bc.pass;
      c = bc.c_beta;
    } catch (const NumericError& e) {
      detail = e.what();
    }
    rep.checks.push_back({"beta_growth", pass, c, detail});
  }

  {  // cap dimension consistent with the declared gamma
    const GammaFit fit = gamma_exponent(m.mu(), default_rho_grid());
    // Declared gamma must dominate the fitted cap growth (small fit slack).
    const bool pass = fit.gamma <= m.gamma() + 0.05;
    m.set_c_gamma(fit.constant);
    std::ostringstream os;
    os << "fitted gamma " << fit.gamma << ", residual " << fit.worst_residual;
    rep.checks.push_back({"gamma_cap_dimension", pass, fit.constant, os.str()});
  }

  return rep;
}

}  // namespace levykit
