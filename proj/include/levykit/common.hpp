#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace levykit {

inline constexpr const char* kVersion = "0.1.0";

/// A numerical procedure failed to reach its target accuracy
/// (quadrature non-convergence, under-resolved lattice, ...).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// A structural hypothesis on the model does not hold (or cannot be
/// certified on the requested grid).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

inline double sq(double x) { return x * x; }

/// 1 - cos(x) without cancellation near x = 0.
inline double one_minus_cos(double x) {
  const double s = std::sin(0.5 * x);
  return 2.0 * s * s;
}

/// sin(x) - x without cancellation near x = 0.
inline double sin_minus_x(double x) {
  if (std::abs(x) < 0.1) {
    const double x2 = x * x;
    return -x * x2 / 6.0 *
           (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)));
  }
  return std::sin(x) - x;
}

/// SplitMix64 mixing step; used to derive per-chunk RNG streams from a
/// master seed (stream k uses splitmix64(seed + k)).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// FNV-1a over a byte string; stable across platforms.
inline std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Global cap on worker threads used by grid fills and Monte Carlo.
/// Results never depend on the value (work is split into fixed chunks).
int max_threads();
void set_max_threads(int n);

}  // namespace levykit
