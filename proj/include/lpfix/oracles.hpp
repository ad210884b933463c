#pragma once

// Black-box maps on [0,1]^d, verifiable contraction instances built from
// clamped affine pieces, grid restrictions, and query counting.

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "lpfix/grid.hpp"
#include "lpfix/lp_geometry.hpp"

namespace lpfix {

/// A map f : [0,1]^d -> R^d answered point by point.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual std::size_t dimension() const = 0;
  virtual Point evaluate(std::span<const double> x) const = 0;
};

struct ConstantMap {
  Point value;
};

/// x -> clamp_{[0,1]^d}(A x + t).
struct AffineClampedMap {
  Eigen::MatrixXd A;
  Eigen::VectorXd t;
};

using MapStage = std::variant<ConstantMap, AffineClampedMap>;

/// Composition of map stages (applied first to last) with a declared
/// contraction factor that upper-bounds the verified one.
class ContractionInstance : public Oracle {
 public:
  ContractionInstance(std::size_t dim, std::vector<MapStage> stages, double lambda, PNorm p,
                      std::optional<Point> known_fixpoint);

  std::size_t dimension() const override { return dim_; }
  Point evaluate(std::span<const double> x) const override;

  double lambda() const { return lambda_; }
  const PNorm& norm_kind() const { return p_; }
  const std::optional<Point>& known_fixpoint() const { return fixpoint_; }
  const std::vector<MapStage>& stages() const { return stages_; }

  /// Returns a copy declaring a (larger or equal) contraction factor.
  ContractionInstance with_declared_lambda(double lambda) const;

 private:
  std::size_t dim_;
  std::vector<MapStage> stages_;
  double lambda_;
  PNorm p_;
  std::optional<Point> fixpoint_;
};

/// Upper bound on the induced lp operator norm of a square matrix: exact
/// column-sum norm for p = 1, row-sum norm for p = inf, max |a_ii| for a
/// diagonal A, and |A|_1^{1/p} |A|_inf^{1-1/p} otherwise.
double operator_contraction_bound(const Eigen::MatrixXd& A, const PNorm& p);

/// clamp(Ax + t); throws ContractViolation when the bound is >= 1. The fixpoint
/// comes from (I - A) x = t when that lands in the cube, else from Banach
/// iteration to residual 1e-14.
ContractionInstance make_affine_clamped(const Eigen::MatrixXd& A, const Eigen::VectorXd& t,
                                        const PNorm& p);

/// Constant map (lambda = 0).
ContractionInstance make_constant(const Point& value, const PNorm& p);

/// f_k ∘ ... ∘ f_1 with lambda = product of the factors.
ContractionInstance make_composite(const std::vector<ContractionInstance>& parts);

/// Random clamped affine map whose operator bound equals `lambda` exactly
/// (up to rounding) and whose fixpoint is an interior point in [0.1, 0.9]^d.
ContractionInstance random_affine_instance(std::size_t dim, const PNorm& p, double lambda,
                                           std::uint64_t seed);

/// A map defined on G^d_b only: off-grid queries raise OffGridQuery.
class GridOracle : public Oracle {
 public:
  GridOracle(std::shared_ptr<const Oracle> inner, int bits);

  std::size_t dimension() const override { return inner_->dimension(); }
  Point evaluate(std::span<const double> x) const override;
  int bits() const { return bits_; }

 private:
  std::shared_ptr<const Oracle> inner_;
  int bits_;
};

GridOracle restrict_to_grid(const ContractionInstance& inst, int bits);

/// Antipodal-corner map x_i -> (x_i > 1/2 ? 0 : 1) on G^d_b. Every residual is
/// at least d/2 in l1, and the corners 0 and 1 violate contraction for every
/// lambda < 1.
GridOracle make_non_contraction(std::size_t dim, int bits);

/// Query-counting wrapper. Repeated queries are answered from the log without
/// being counted again.
class CountingOracle {
 public:
  explicit CountingOracle(const Oracle& inner) : inner_(&inner) {}

  Point query(std::span<const double> x);
  std::size_t count() const { return log_.size(); }
  std::size_t dimension() const { return inner_->dimension(); }
  const std::vector<std::pair<Point, Point>>& log() const { return log_; }
  bool seen(std::span<const double> x) const;

 private:
  const Oracle* inner_;
  std::vector<std::pair<Point, Point>> log_;
  std::map<Point, std::size_t> index_;
};

}  // namespace lpfix
