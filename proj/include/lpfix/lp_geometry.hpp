#pragma once

// Exact lp-norm, bisector-halfspace and limit-halfspace primitives.
//
// Two halfspace notions are used throughout the library:
//
//   bisector  H_{x,y} = { z : |x - z|_p <= |y - z|_p }
//   limit     H_{x,v} = { z : |x - z|_p <= |x - eps*v - z|_p  for all eps > 0 }
//
// Limit membership is decided in closed form through the support function of
// the subdifferential of |.|_p at w = z - x: z is inside iff
// max_{u in d|w|_p} <u, v> >= 0. Boundary points are always inside.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lpfix {

using Vector = std::vector<double>;
using Point = std::vector<double>;

/// Metric selector. The dedicated kinds One/Two/Infinity are dispatched
/// structurally, never through a floating comparison of the exponent.
class PNorm {
 public:
  enum class Kind { One, Two, Infinity, General };

  static PNorm one() { return PNorm(Kind::One, 1.0); }
  static PNorm two() { return PNorm(Kind::Two, 2.0); }
  static PNorm infinity();
  /// General exponent p in (1, inf). Throws ContractViolation otherwise.
  static PNorm general(double p);
  /// Parses "1", "2", "inf" (also "infinity") or a decimal string. Decimal
  /// strings equal to exactly 1 or 2 map to the dedicated kinds.
  static PNorm parse(std::string_view text);

  Kind kind() const { return kind_; }
  /// The exponent; +inf for Kind::Infinity.
  double exponent() const { return p_; }
  bool finite() const { return kind_ != Kind::Infinity; }
  std::string to_string() const;

  friend bool operator==(const PNorm&, const PNorm&) = default;

 private:
  PNorm(Kind k, double p) : kind_(k), p_(p) {}
  Kind kind_;
  double p_;
};

/// Flat, row-major storage for a finite set of points of equal dimension.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t dim) : dim_(dim) {}
  PointSet(std::size_t dim, std::vector<double> flat);
  /// Builds a set from individual points; duplicate points are dropped
  /// (first occurrence wins) when `dedupe` is set.
  static PointSet from_points(const std::vector<Point>& pts, bool dedupe = true);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
  bool empty() const { return data_.empty(); }

  std::span<const double> operator[](std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<double> mutable_point(std::size_t i) { return {data_.data() + i * dim_, dim_}; }
  void push_back(std::span<const double> pt);
  void reserve(std::size_t n) { data_.reserve(n * dim_); }
  void clear() { data_.clear(); }
  const std::vector<double>& flat() const { return data_; }

  /// Copy with exact duplicates removed, preserving first-occurrence order.
  PointSet deduplicated() const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

// ---------------------------------------------------------------------------
// Norms

/// (sum |w_i|^p)^(1/p) for finite p, max |w_i| for p = inf. Rejects NaN/inf
/// entries with ContractViolation.
double norm(std::span<const double> w, const PNorm& p);

/// norm(a - b, p) without materialising the difference.
double distance(std::span<const double> a, std::span<const double> b, const PNorm& p);

double dot(std::span<const double> a, std::span<const double> b);

// ---------------------------------------------------------------------------
// Bisector halfspaces

struct BisectorHalfspace {
  /// Throws ContractViolation when x == y or the dimensions differ.
  BisectorHalfspace(Point x, Point y, PNorm p);

  Point x;
  Point y;
  PNorm p;
};

/// True iff |x - z|_p <= |y - z|_p (ties are inside).
bool bisector_contains(const BisectorHalfspace& h, std::span<const double> z);

/// Unchecked variant used in hot loops; no dimension checks.
bool bisector_contains(std::span<const double> x, std::span<const double> y,
                       std::span<const double> z, const PNorm& p);

/// Same predicate decided on p-th power sums under a common scale, skipping
/// the roots. Cheaper for general p; may disagree with bisector_contains only
/// within rounding of an exact tie.
bool bisector_contains_by_powers(std::span<const double> x, std::span<const double> y,
                                 std::span<const double> z, const PNorm& p);

// ---------------------------------------------------------------------------
// Subdifferential support function

/// Support function of the subdifferential of |.|_p at a fixed non-zero w,
/// evaluated lazily for many directions v:
///
///   p in (1,inf): the gradient u_i = |w_i / |w|_p|^(p-1) sign(w_i), <u, v>
///   p = 1:        sum_{w_i != 0} sign(w_i) v_i + sum_{w_i == 0} |v_i|
///   p = inf:      max over i with |w_i| = |w|_inf of sign(w_i) v_i
///
/// Zero tests and the argmax set use exact floating equality.
class SupportFunction {
 public:
  SupportFunction() = default;
  /// Throws ContractViolation for w == 0.
  SupportFunction(std::span<const double> w, const PNorm& p);

  /// Re-targets the function at a new w, reusing the internal buffers.
  void assign(std::span<const double> w, const PNorm& p);

  double operator()(std::span<const double> v) const;

  /// When the support is linear in v (smooth p, p = 1 without zero
  /// coordinates, p = inf with a unique argmax) writes its gradient to g.
  bool linear_form(Vector& g) const;

  /// A subgradient u in d|w|_p attaining the maximum of <u, v>.
  Vector maximizer(std::span<const double> v) const;

 private:
  PNorm::Kind kind_ = PNorm::Kind::Two;
  // Gradient for smooth p, sign vector for p = 1 and p = inf.
  Vector u_;
  // p = 1: coordinates with w_i == 0. p = inf: the argmax set.
  std::vector<std::uint32_t> special_;
};

double subgradient_support(std::span<const double> w, std::span<const double> v,
                           const PNorm& p);

Vector subgradient_maximizer(std::span<const double> w, std::span<const double> v,
                             const PNorm& p);

// ---------------------------------------------------------------------------
// Limit halfspaces

struct LimitHalfspace {
  /// v must satisfy | |v|_2 - 1 | <= 1e-12.
  LimitHalfspace(Point x, Vector v, PNorm p);
  /// Normalises an arbitrary non-zero direction.
  static LimitHalfspace from_direction(Point x, std::span<const double> dir, PNorm p);

  Point x;
  Vector v;
  PNorm p;
};

bool limit_contains(const LimitHalfspace& h, std::span<const double> z);

/// Unchecked form; v need not be normalised (membership is invariant under
/// positive rescaling of v).
bool limit_contains(std::span<const double> x, std::span<const double> v,
                    std::span<const double> z, const PNorm& p);

/// 2^0, 2^-1, ..., 2^-40.
std::vector<double> default_eps_grid();

/// Reference membership test straight from the definition: z is reported
/// inside iff it lies in every bisector H_{x, x - eps*v} for eps on the grid.
/// Distances are evaluated in binary128 so that the eps*support term stays
/// resolvable down to eps = 2^-40.
bool limit_contains_bruteforce(const LimitHalfspace& h, std::span<const double> z,
                               std::span<const double> eps_grid);
bool limit_contains_bruteforce(const LimitHalfspace& h, std::span<const double> z);

/// Euclidean angle in [0, pi] between two non-zero vectors.
double angle(std::span<const double> a, std::span<const double> b);

}  // namespace lpfix
