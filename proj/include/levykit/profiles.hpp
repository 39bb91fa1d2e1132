#pragma once

#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace levykit {

/// One radial damping factor together with the constants its family
/// guarantees. Families:
///   one            f(s) = 1
///   powerlaw       f(s) = (1+s)^{-a},                params: a >= 0
///   logpower       f(s) = log(e+s)^a (1+s)^{-m a},   params: a >= 0, m >= 1
///   exp            f(s) = exp(-lambda s),            params: lambda > 0
///   stretched_exp  f(s) = exp(-m s^a),               params: m > 0, 0 < a <= 1
///   invlog         f(s) = log(s+e)^{-m},             params: m > 0
///   kdalpha        normalized relativistic kernel,   params: d >= 1, alpha in (0,2)
struct ProfileComponent {
  std::string family;
  std::map<std::string, double> params;
  std::function<double(double)> fn;
  double doubling = std::numeric_limits<double>::infinity();  // f(s) <= k f(2s)
  double submult = std::numeric_limits<double>::infinity();   // f(a)f(b) <= k f(a+b)
  double eta = 0.0;      // f(r)/f(R) <= c (r/R)^{-eta} for r <= R
  double value0 = 1.0;   // f(0+)
  bool ratio_monotone = false;  // f(s)/f(s/2) nonincreasing (sharper tail majorants)

  double operator()(double s) const { return fn(s); }
};

/// Radial jump profile: the density factor q(s) * phi(s) multiplying
/// s^{-1-alpha} in the polar representation of the Levy measure.
struct RadialProfile {
  ProfileComponent q;
  ProfileComponent phi;

  double kappa1() const { return q.doubling; }
  double kappa2() const { return phi.submult; }
  double eta() const { return q.eta; }
  double q0() const { return q.value0; }
  double phi0() const { return phi.value0; }
  bool is_trivial() const { return q.family == "one" && phi.family == "one"; }
};

/// Builds a component from a family tag. Unknown family or bad parameters
/// throw std::invalid_argument.
ProfileComponent make_profile_component(const std::string& family,
                                        const std::map<std::string, double>& params);

inline RadialProfile make_profile(const std::string& q_family,
                                  const std::map<std::string, double>& q_params,
                                  const std::string& phi_family,
                                  const std::map<std::string, double>& phi_params) {
  return RadialProfile{make_profile_component(q_family, q_params),
                       make_profile_component(phi_family, phi_params)};
}

struct HypothesisCheck {
  std::string name;
  bool pass = false;
  double constant = 0.0;  // tightest constant observed on the grid
  std::string detail;
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const HypothesisCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

/// 512 log-spaced points in [1e-6, 1e3]; spans the small-s regime and the
/// profile-decay regime.
std::vector<double> default_hypothesis_grid();

/// Grid certificate for the profile hypotheses: positivity/finiteness,
/// monotonicity, doubling of q, submultiplicativity of phi, and the
/// power-ratio decay of q. Non-finite profile values throw ValidationError.
ValidationReport validate_profiles(const RadialProfile& profile,
                                   const std::vector<double>& s_grid);

}  // namespace levykit
