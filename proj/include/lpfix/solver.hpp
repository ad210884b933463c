#pragma once

// Centerpoint-cutting solver for approximate fixpoints of lp-contractions on
// [0,1]^d, the Banach-iteration fallback, and the query-bound arithmetic.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lpfix/centerpoint.hpp"
#include "lpfix/errors.hpp"
#include "lpfix/lp_geometry.hpp"
#include "lpfix/oracles.hpp"

namespace lpfix {

/// Point-cloud proxy for the remaining search region M. The cloud is uniform
/// in [0,1]^d (or an explicit point list in grid mode); `alive` marks the
/// points not yet excluded by a cut.
class SearchSpace {
 public:
  SearchSpace(std::size_t dim, std::size_t n, std::uint64_t seed);
  /// Explicit point list (grid mode); never refreshed.
  static SearchSpace from_points(PointSet points);

  std::size_t dim() const { return points_.dim(); }
  std::size_t size() const { return points_.size(); }
  std::uint64_t seed() const { return seed_; }
  const PointSet& points() const { return points_; }
  const std::vector<std::uint8_t>& alive() const { return alive_; }
  std::size_t alive_count() const { return alive_count_; }
  bool is_alive(std::size_t i) const { return alive_[i] != 0; }

  /// Estimated measure of M relative to the cube. Equals alive_count / size
  /// until the first refresh; afterwards it keeps shrinking by the observed
  /// discard fractions.
  double measure() const { return measure_; }

  PointSet alive_points() const;
  std::vector<std::size_t> alive_indices() const;

  /// Kills every alive z in H^p_{c,fc}. Returns the killed fraction of the
  /// previously alive points (0 when nothing was alive). The cut is stored for
  /// later refreshes. Killed coordinates are appended to `killed` if given.
  double discard(std::span<const double> c, std::span<const double> fc, const PNorm& p,
                 PointSet* killed = nullptr);

  /// Refills the cloud to its original size with points uniform on the
  /// region left by the stored cuts: first by rejection from the padded
  /// bounding box of the survivors (at most `rejection_attempts` draws), then
  /// by hit-and-run moves started at survivors. Returns the number of points
  /// added. No-op for explicit clouds.
  std::size_t refresh(const PNorm& p, std::size_t rejection_attempts);

  /// True iff z lies outside every stored cut.
  bool survives_cuts(std::span<const double> z, const PNorm& p) const;

  std::size_t refresh_count() const { return refreshes_; }

 private:
  SearchSpace() = default;
  static constexpr int kHitAndRunSteps = 3;

  PointSet points_;
  std::vector<std::uint8_t> alive_;
  std::size_t alive_count_ = 0;
  std::uint64_t seed_ = 0;
  double measure_ = 1.0;
  bool explicit_ = false;
  std::size_t refreshes_ = 0;
  std::vector<std::pair<Point, Point>> cuts_;
  Point last_lo_, last_hi_;
};

/// Free-function form of SearchSpace::discard.
double discard_halfspace(SearchSpace& M, std::span<const double> c, std::span<const double> fc,
                         const PNorm& p);

struct IterationRecord {
  std::size_t iter = 0;
  Point query;
  Point response;
  double residual = 0;
  double alive_fraction = 1;
  double alive_fraction_after = 1;
  double achieved_rho = 0;
  double discard_fraction = 0;
  std::size_t cum_queries = 0;
};

/// Passed to SolveParams::observer after every cut.
struct IterationEvent {
  const IterationRecord& record;
  /// Cloud points removed by this cut.
  const PointSet& killed;
};

struct SolveParams {
  std::size_t dim = 2;
  PNorm p = PNorm::two();
  double epsilon = 1e-2;
  double lambda = 0.5;
  std::size_t cloud = std::size_t{1} << 17;
  /// 0 selects 64 d.
  std::size_t dirs = 0;
  /// 0 selects 1 / (2 (d + 1)).
  double rho_min = 0;
  /// 0 selects 4 * theoretical_query_bound at rho_min.
  std::size_t max_queries = 0;
  std::uint64_t seed = 0;
  /// The cloud is refreshed once fewer than this fraction of it is alive.
  /// 0 disables refreshing.
  double refresh_fraction = 0.125;
  /// Centerpoints are computed on a uniform subsample of this many alive
  /// points (0 uses all of them).
  std::size_t centerpoint_points = 8192;
  CenterpointOptions centerpoint;
  std::function<void(const IterationEvent&)> observer;

  std::size_t resolved_dirs() const { return dirs ? dirs : 64 * dim; }
  double resolved_rho_min() const { return rho_min > 0 ? rho_min : 1.0 / (2.0 * (dim + 1.0)); }
  std::size_t resolved_max_queries() const;
};

enum class Outcome { FoundFixpoint, QueryBudgetExhausted };

struct SolveReport {
  Outcome outcome = Outcome::QueryBudgetExhausted;
  Point x;
  double residual = 0;
  std::vector<IterationRecord> trace;
  std::size_t queries_used = 0;
  std::size_t banach_queries = 0;
  bool used_banach = false;
  /// theoretical_query_bound at min_rho (the Banach cap on the fallback path).
  std::size_t theoretical_bound = 0;
  double min_rho = 0;
  std::size_t max_queries = 0;
};

/// Every alive point died before an approximate fixpoint was found. For a
/// declared contraction this is evidence against the promise (or a too coarse
/// cloud); the partial report is attached.
class EmptySearchSpace : public NonContractionSuspected {
 public:
  explicit EmptySearchSpace(SolveReport report);
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

/// |f(x) - x|_p with exactly one oracle call. Throws MalformedOracle when
/// f(x) leaves [0,1]^d.
double residual(const Oracle& f, std::span<const double> x, const PNorm& p);

/// eps (1 - lambda) / (2 + 2 lambda).
double survival_radius(double epsilon, double lambda);

/// ceil( ln(1 / ((2^d / d!) r^d)) / ln(1 / (1 - rho)) ), r = survival_radius,
/// clamped at 0. rho must lie in (0, 1).
std::size_t theoretical_query_bound(std::size_t d, const PNorm& p, double epsilon, double lambda,
                                    double rho);

/// ceil(log(d/eps) / log(1/lambda)) + 1, or 2 for lambda = 0.
std::size_t banach_query_cap(std::size_t d, double epsilon, double lambda);

struct BanachResult {
  Point x;
  double residual = 0;
  std::size_t queries = 0;
  std::vector<double> residuals;
};

/// x <- f(x) until the residual drops to epsilon. Throws
/// NonContractionSuspected when the cap is exceeded.
BanachResult banach_iterate(const Oracle& f, std::span<const double> x0, double epsilon,
                            double lambda, const PNorm& p);

/// True when the Banach fallback is selected: max(1/eps, 1/(1-lambda)) < d.
bool prefers_banach(std::size_t d, double epsilon, double lambda);

SolveReport solve_continuous(const Oracle& f, const SolveParams& params);

}  // namespace lpfix
