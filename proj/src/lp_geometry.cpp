#include "lpfix/lp_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <limits>
#include <numbers>
#include <set>
#include <type_traits>

#include <boost/multiprecision/float128.hpp>

#include "lpfix/errors.hpp"

namespace lpfix {

namespace {

void require_finite(std::span<const double> w) {
  for (double x : w) {
    if (!std::isfinite(x)) throw ContractViolation("non-finite vector entry");
  }
}

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) throw DimensionMismatch(a, b);
}

// x^e for x >= 0. Integer and half-integer exponents up to 16 avoid pow().
struct PowerFn {
  explicit PowerFn(double e) : e_(e) {
    const double twice = 2.0 * e;
    if (twice == std::floor(twice) && e > 0.0 && e <= 16.0) {
      whole_ = static_cast<int>(std::floor(e));
      half_ = twice != 2.0 * whole_;
      fast_ = true;
    }
  }
  double operator()(double x) const {
    if (!fast_) return std::pow(x, e_);
    double r = 1.0, b = x;
    for (int n = whole_; n > 0; n >>= 1) {
      if (n & 1) r *= b;
      b *= b;
    }
    return half_ ? r * std::sqrt(x) : r;
  }

 private:
  double e_;
  int whole_ = 0;
  bool half_ = false;
  bool fast_ = false;
};

// Norm of the vector produced by `entry(i)`, i < n. Finite p > 1 is scaled by
// the largest magnitude so large exponents neither overflow nor underflow.
template <typename T, typename Entry>
T norm_impl(std::size_t n, Entry entry, PNorm::Kind kind, double p) {
  using std::abs;
  using std::pow;
  using std::sqrt;
  if (kind == PNorm::Kind::One) {
    T s = 0;
    for (std::size_t i = 0; i < n; ++i) s += abs(entry(i));
    return s;
  }
  T m = 0;
  for (std::size_t i = 0; i < n; ++i) m = std::max<T>(m, abs(entry(i)));
  if (kind == PNorm::Kind::Infinity || m == 0) return m;
  T s = 0;
  if (kind == PNorm::Kind::Two) {
    for (std::size_t i = 0; i < n; ++i) {
      T r = entry(i) / m;
      s += r * r;
    }
    return m * sqrt(s);
  }
  if constexpr (std::is_same_v<T, double>) {
    const PowerFn pw(p);
    for (std::size_t i = 0; i < n; ++i) s += pw(abs(entry(i)) / m);
  } else {
    const T pp = p;
    for (std::size_t i = 0; i < n; ++i) s += pow(abs(entry(i)) / m, pp);
  }
  return m * pow(s, T(1) / T(p));
}

}  // namespace

// ---------------------------------------------------------------------------
// PNorm

PNorm PNorm::infinity() { return PNorm(Kind::Infinity, std::numeric_limits<double>::infinity()); }

PNorm PNorm::general(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw ContractViolation("general p must lie in (1, inf), got " + std::to_string(p));
  }
  return PNorm(Kind::General, p);
}

PNorm PNorm::parse(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "Inf" || text == "INF") return infinity();
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ContractViolation("cannot parse p from '" + std::string(text) + "'");
  }
  if (value == 1.0) return one();
  if (value == 2.0) return two();
  return general(value);
}

std::string PNorm::to_string() const {
  switch (kind_) {
    case Kind::One: return "1";
    case Kind::Two: return "2";
    case Kind::Infinity: return "inf";
    case Kind::General: break;
  }
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), p_);
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// PointSet

PointSet::PointSet(std::size_t dim, std::vector<double> flat) : dim_(dim), data_(std::move(flat)) {
  if (dim_ == 0 || data_.size() % dim_ != 0) {
    throw ContractViolation("flat point buffer is not a multiple of the dimension");
  }
}

PointSet PointSet::from_points(const std::vector<Point>& pts, bool dedupe) {
  if (pts.empty()) return {};
  PointSet out(pts.front().size());
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(p);
  return dedupe ? out.deduplicated() : out;
}

void PointSet::push_back(std::span<const double> pt) {
  if (dim_ == 0) dim_ = pt.size();
  require_same_dim(dim_, pt.size());
  data_.insert(data_.end(), pt.begin(), pt.end());
}

PointSet PointSet::deduplicated() const {
  PointSet out(dim_);
  std::set<std::vector<double>> seen;
  for (std::size_t i = 0; i < size(); ++i) {
    auto pt = (*this)[i];
    if (seen.emplace(pt.begin(), pt.end()).second) out.push_back(pt);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Norms

double norm(std::span<const double> w, const PNorm& p) {
  require_finite(w);
  return norm_impl<double>(w.size(), [&](std::size_t i) { return w[i]; }, p.kind(), p.exponent());
}

double distance(std::span<const double> a, std::span<const double> b, const PNorm& p) {
  return norm_impl<double>(a.size(), [&](std::size_t i) { return a[i] - b[i]; }, p.kind(),
                           p.exponent());
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// ---------------------------------------------------------------------------
// Bisector halfspaces

BisectorHalfspace::BisectorHalfspace(Point x_, Point y_, PNorm p_)
    : x(std::move(x_)), y(std::move(y_)), p(p_) {
  require_same_dim(x.size(), y.size());
  if (x == y) throw ContractViolation("bisector halfspace needs distinct points");
}

bool bisector_contains(const BisectorHalfspace& h, std::span<const double> z) {
  require_same_dim(h.x.size(), z.size());
  return bisector_contains(h.x, h.y, z, h.p);
}

bool bisector_contains(std::span<const double> x, std::span<const double> y,
                       std::span<const double> z, const PNorm& p) {
  return distance(x, z, p) <= distance(y, z, p);
}

bool bisector_contains_by_powers(std::span<const double> x, std::span<const double> y,
                                 std::span<const double> z, const PNorm& p) {
  if (p.kind() != PNorm::Kind::General) return bisector_contains(x, y, z, p);
  const std::size_t d = z.size();
  double m = 0;
  for (std::size_t i = 0; i < d; ++i)
    m = std::max({m, std::abs(x[i] - z[i]), std::abs(y[i] - z[i])});
  if (m == 0) return true;
  const PowerFn pw(p.exponent());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < d; ++i) {
    sx += pw(std::abs(x[i] - z[i]) / m);
    sy += pw(std::abs(y[i] - z[i]) / m);
  }
  return sx <= sy;
}

// ---------------------------------------------------------------------------
// Support function

SupportFunction::SupportFunction(std::span<const double> w, const PNorm& p) { assign(w, p); }

void SupportFunction::assign(std::span<const double> w, const PNorm& p) {
  kind_ = p.kind();
  u_.assign(w.size(), 0.0);
  special_.clear();
  const std::size_t d = w.size();
  const double n = norm(w, p);
  if (n == 0) throw ContractViolation("subgradient support requested at w = 0");
  switch (kind_) {
    case PNorm::Kind::One:
      for (std::size_t i = 0; i < d; ++i) {
        if (w[i] == 0) {
          special_.push_back(static_cast<std::uint32_t>(i));
        } else {
          u_[i] = w[i] > 0 ? 1.0 : -1.0;
        }
      }
      break;
    case PNorm::Kind::Infinity:
      for (std::size_t i = 0; i < d; ++i) {
        if (std::abs(w[i]) == n) {
          special_.push_back(static_cast<std::uint32_t>(i));
          u_[i] = w[i] > 0 ? 1.0 : -1.0;
        }
      }
      break;
    case PNorm::Kind::Two:
      for (std::size_t i = 0; i < d; ++i) u_[i] = w[i] / n;
      break;
    case PNorm::Kind::General: {
      const PowerFn pw(p.exponent() - 1.0);
      for (std::size_t i = 0; i < d; ++i) {
        if (w[i] == 0) continue;
        const double mag = pw(std::abs(w[i]) / n);
        u_[i] = w[i] > 0 ? mag : -mag;
      }
      break;
    }
  }
}

bool SupportFunction::linear_form(Vector& g) const {
  switch (kind_) {
    case PNorm::Kind::One:
      if (!special_.empty()) return false;
      g = u_;
      return true;
    case PNorm::Kind::Infinity:
      if (special_.size() != 1) return false;
      g.assign(u_.size(), 0.0);
      g[special_.front()] = u_[special_.front()];
      return true;
    default:
      g = u_;
      return true;
  }
}

double SupportFunction::operator()(std::span<const double> v) const {
  switch (kind_) {
    case PNorm::Kind::One: {
      double s = dot(u_, v);
      for (auto i : special_) s += std::abs(v[i]);
      return s;
    }
    case PNorm::Kind::Infinity: {
      double best = -std::numeric_limits<double>::infinity();
      for (auto i : special_) best = std::max(best, u_[i] * v[i]);
      return best;
    }
    default:
      return dot(u_, v);
  }
}

Vector SupportFunction::maximizer(std::span<const double> v) const {
  switch (kind_) {
    case PNorm::Kind::One: {
      Vector u = u_;
      for (auto i : special_) u[i] = v[i] >= 0 ? 1.0 : -1.0;
      return u;
    }
    case PNorm::Kind::Infinity: {
      std::uint32_t best = special_.front();
      for (auto i : special_) {
        if (u_[i] * v[i] > u_[best] * v[best]) best = i;
      }
      Vector u(u_.size(), 0.0);
      u[best] = u_[best];
      return u;
    }
    default:
      return u_;
  }
}

double subgradient_support(std::span<const double> w, std::span<const double> v,
                           const PNorm& p) {
  require_same_dim(w.size(), v.size());
  return SupportFunction(w, p)(v);
}

Vector subgradient_maximizer(std::span<const double> w, std::span<const double> v,
                             const PNorm& p) {
  require_same_dim(w.size(), v.size());
  return SupportFunction(w, p).maximizer(v);
}

// ---------------------------------------------------------------------------
// Limit halfspaces

LimitHalfspace::LimitHalfspace(Point x_, Vector v_, PNorm p_)
    : x(std::move(x_)), v(std::move(v_)), p(p_) {
  require_same_dim(x.size(), v.size());
  require_finite(x);
  if (std::abs(norm(v, PNorm::two()) - 1.0) > 1e-12) {
    throw ContractViolation("limit halfspace direction must be a unit vector");
  }
}

LimitHalfspace LimitHalfspace::from_direction(Point x, std::span<const double> dir, PNorm p) {
  const double n = norm(dir, PNorm::two());
  if (n == 0) throw ContractViolation("zero direction");
  Vector v(dir.begin(), dir.end());
  for (auto& c : v) c /= n;
  return LimitHalfspace(std::move(x), std::move(v), p);
}

bool limit_contains(std::span<const double> x, std::span<const double> v,
                    std::span<const double> z, const PNorm& p) {
  Vector w(z.size());
  bool zero = true;
  for (std::size_t i = 0; i < z.size(); ++i) {
    w[i] = z[i] - x[i];
    zero = zero && w[i] == 0;
  }
  if (zero) return true;
  return SupportFunction(w, p)(v) >= 0;
}

bool limit_contains(const LimitHalfspace& h, std::span<const double> z) {
  require_same_dim(h.x.size(), z.size());
  return limit_contains(h.x, h.v, z, h.p);
}

std::vector<double> default_eps_grid() {
  std::vector<double> g;
  for (int k = 0; k <= 40; ++k) g.push_back(std::ldexp(1.0, -k));
  return g;
}

bool limit_contains_bruteforce(const LimitHalfspace& h, std::span<const double> z,
                               std::span<const double> eps_grid) {
  using quad = boost::multiprecision::float128;
  require_same_dim(h.x.size(), z.size());
  const std::size_t d = z.size();
  const auto kind = h.p.kind();
  const double pe = h.p.exponent();
  const quad near = norm_impl<quad>(
      d, [&](std::size_t i) { return quad(h.x[i]) - quad(z[i]); }, kind, pe);
  for (double eps : eps_grid) {
    const quad e = eps;
    const quad far = norm_impl<quad>(
        d, [&](std::size_t i) { return (quad(h.x[i]) - e * quad(h.v[i])) - quad(z[i]); }, kind,
        pe);
    if (!(near <= far)) return false;
  }
  return true;
}

bool limit_contains_bruteforce(const LimitHalfspace& h, std::span<const double> z) {
  static const std::vector<double> grid = default_eps_grid();
  return limit_contains_bruteforce(h, z, grid);
}

double angle(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a.size(), b.size());
  const double na = norm(a, PNorm::two());
  const double nb = norm(b, PNorm::two());
  if (na == 0 || nb == 0) throw ContractViolation("angle with a zero vector");
  const double c = std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
  return std::acos(c);
}

}  // namespace lpfix
