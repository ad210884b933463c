#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "lpfix/lp_geometry.hpp"

namespace lpfix {

/// The dyadic grid G^d_b = {k / 2^b : k = 0..2^b}^d.
struct GridSpec {
  std::size_t dim = 1;
  int bits = 1;

  std::int64_t side() const { return (std::int64_t{1} << bits) + 1; }
  /// (2^b + 1)^d as a double, so callers can test caps without overflow.
  double point_count() const { return std::pow(static_cast<double>(side()), static_cast<double>(dim)); }
};

/// A grid point kept as integer numerators over the common scale 2^bits.
struct GridPoint {
  std::vector<std::int64_t> k;
  int bits = 1;

  Point to_point() const {
    Point x(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) x[i] = std::ldexp(static_cast<double>(k[i]), -bits);
    return x;
  }
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

/// True iff every coordinate of x is exactly k / 2^bits with 0 <= k <= 2^bits.
inline bool on_grid(std::span<const double> x, int bits) {
  for (double c : x) {
    if (!(c >= 0.0 && c <= 1.0)) return false;
    const double s = std::ldexp(c, bits);
    if (s != std::floor(s)) return false;
  }
  return true;
}

}  // namespace lpfix
