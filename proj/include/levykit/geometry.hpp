#pragma once

#include <cassert>
#include <cmath>
#include <vector>

namespace levykit {

/// Point in R^d, d small (the lattice code supports d <= 3, the model
/// code is dimension-agnostic).
using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

inline Vec scaled(const Vec& a, double c) {
  Vec r(a);
  for (double& x : r) x *= c;
  return r;
}

inline Vec add(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  Vec r(a);
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  Vec r(a);
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return r;
}

inline Vec zero_vec(int d) { return Vec(static_cast<std::size_t>(d), 0.0); }

inline Vec axis_vec(int d, int axis, double v = 1.0) {
  Vec r = zero_vec(d);
  r[static_cast<std::size_t>(axis)] = v;
  return r;
}

}  // namespace levykit
