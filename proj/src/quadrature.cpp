#include "levykit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "levykit/common.hpp"

namespace levykit::quad {

namespace {

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1].
constexpr int kGK = 8;  // nonnegative nodes
constexpr double kNodes[kGK] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWeightK[kGK] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
// Gauss-7 weights attach to nodes 1, 3, 5, 7 of the list above.
constexpr double kWeightG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  double value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[2 * kGK - 1];
  double resk = 0.0, resg = 0.0;
  for (int i = 0; i < kGK; ++i) {
    const double dx = h * kNodes[i];
    if (i == kGK - 1) {
      fv[kGK - 1] = f(c);
    } else {
      fv[i] = f(c - dx);
      fv[2 * kGK - 2 - i] = f(c + dx);
    }
    const double pair = (i == kGK - 1) ? fv[kGK - 1] : fv[i] + fv[2 * kGK - 2 - i];
    resk += kWeightK[i] * pair;
    if (i % 2 == 1) resg += kWeightG[i / 2] * pair;
  }
  // QUADPACK qk15 error estimate: sharpen |K - G| against the panel's
  // variation resasc, so small differences cannot fake high accuracy.
  const double mean = 0.5 * resk;
  double resasc = 0.0;
  for (int i = 0; i < kGK; ++i) {
    const double dev = (i == kGK - 1)
                           ? std::abs(fv[kGK - 1] - mean)
                           : std::abs(fv[i] - mean) + std::abs(fv[2 * kGK - 2 - i] - mean);
    resasc += kWeightK[i] * dev;
  }
  resasc *= std::abs(h);
  Panel p;
  p.a = a;
  p.b = b;
  p.value = resk * h;
  double err = std::abs(resk - resg) * std::abs(h);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  p.error = err;
  return p;
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, std::size_t max_panels) {
  Result r;
  if (a == b) return r;
  std::priority_queue<Panel> heap;
  Panel p0 = gk15(f, a, b);
  r.evals = 15;
  double total = p0.value, toterr = p0.error;
  heap.push(p0);
  while (toterr > abs_tol && heap.size() < max_panels) {
    Panel worst = heap.top();
    if (worst.b - worst.a <=
        std::abs(worst.a) * std::numeric_limits<double>::epsilon() * 4) {
      break;  // panel width at roundoff; cannot improve
    }
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel l = gk15(f, worst.a, mid);
    Panel rr = gk15(f, mid, worst.b);
    r.evals += 30;
    total += l.value + rr.value - worst.value;
    toterr += l.error + rr.error - worst.error;
    heap.push(l);
    heap.push(rr);
  }
  if (!(toterr <= std::abs(abs_tol)) && heap.size() >= max_panels) {
    std::ostringstream os;
    os << "quadrature did not converge: residual " << toterr << " > tol "
       << abs_tol << " on [" << a << ", " << b << "]";
    throw NumericError(os.str());
  }
  r.value = total;
  r.error = toterr;
  return r;
}

Result integrate_log(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, std::size_t max_panels) {
  if (!(a > 0.0) || !(b >= a)) throw std::invalid_argument("integrate_log: need 0 < a <= b");
  auto g = [&f](double u) {
    const double s = std::exp(u);
    return f(s) * s;
  };
  return integrate(g, std::log(a), std::log(b), abs_tol, max_panels);
}

Result integrate_tail(const std::function<double(double)>& f, double a,
                      const std::function<double(double)>& tail_bound,
                      double abs_tol) {
  if (!(a > 0.0)) throw std::invalid_argument("integrate_tail: need a > 0");
  double b = std::max(2.0 * a, 1.0);
  double bound = tail_bound(b);
  int guard = 0;
  while (bound > 0.5 * abs_tol) {
    b *= 4.0;
    bound = tail_bound(b);
    if (++guard > 600) {
      std::ostringstream os;
      os << "integrate_tail: tail majorant stuck at " << bound << " (tol " << abs_tol << ")";
      throw NumericError(os.str());
    }
  }
  Result r = integrate_log(f, a, b, 0.5 * abs_tol);
  r.error += bound;
  return r;
}

double alternating_series(const std::vector<double>& terms_abs) {
  const int n = static_cast<int>(terms_abs.size());
  if (n == 0) return 0.0;
  double d = std::pow(3.0 + std::sqrt(8.0), n);
  d = 0.5 * (d + 1.0 / d);
  double b = -1.0, c = -d, s = 0.0;
  for (int k = 0; k < n; ++k) {
    c = b - c;
    s += c * terms_abs[static_cast<std::size_t>(k)];
    b *= (k + n) * (k - n) / ((k + 0.5) * (k + 1.0));
  }
  return s / d;
}

Result oscillatory(const std::function<double(double)>& f, double w, bool sine,
                   double a, double b, double abs_tol) {
  if (!(w > 0.0)) throw std::invalid_argument("oscillatory: need w > 0");
  auto g = [&](double s) { return f(s) * (sine ? std::sin(w * s) : std::cos(w * s)); };

  const double half = M_PI / w;
  const bool infinite = !std::isfinite(b);
  if (!infinite && (b - a) < 3.0 * half) {
    return integrate(g, a, b, abs_tol);
  }

  // First zero of the trig factor at or after a.
  double z;
  if (sine) {
    z = half * std::ceil(a / half);
  } else {
    z = half * (std::ceil(a / half - 0.5) + 0.5);
  }
  if (z <= a) z += half;

  Result r;
  const double panel_tol = abs_tol / 64.0;
  if (z > a) {
    Result lead = integrate(g, a, std::min(z, b), panel_tol);
    r.value += lead.value;
    r.error += lead.error;
    r.evals += lead.evals;
    if (!infinite && z >= b) return r;
  }

  if (!infinite) {
    // Finite range: walk the zeros directly.
    double lo = z;
    while (lo < b) {
      const double hi = std::min(lo + half, b);
      Result p = integrate(g, lo, hi, panel_tol);
      r.value += p.value;
      r.error += p.error;
      r.evals += p.evals;
      lo = hi;
    }
    return r;
  }

  // Infinite tail: strictly alternating half-period panels.
  constexpr int kTerms = 40;
  std::vector<double> mags;
  mags.reserve(kTerms);
  double lo = z;
  double first_sign = 0.0;
  for (int k = 0; k < kTerms; ++k) {
    Result p = integrate(g, lo, lo + half, panel_tol);
    r.evals += p.evals;
    r.error += p.error / 8.0;
    if (k == 0) first_sign = (p.value >= 0.0) ? 1.0 : -1.0;
    mags.push_back(std::abs(p.value));
    lo += half;
    if (mags.back() < abs_tol / 100.0 && k >= 3) break;
  }
  if (mags.back() < abs_tol / 100.0) {
    double s = 0.0, sign = 1.0;
    for (double m : mags) {
      s += sign * m;
      sign = -sign;
    }
    r.value += first_sign * s;
    r.error += mags.back();
    return r;
  }
  const double full = alternating_series(mags);
  std::vector<double> shorter(mags.begin(), mags.end() - 6);
  const double check = alternating_series(shorter);
  r.value += first_sign * full;
  r.error += std::abs(full - check);
  return r;
}

}  // namespace levykit::quad
