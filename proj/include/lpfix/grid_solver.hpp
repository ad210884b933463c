#pragma once

// l1 solver on the dyadic grid G^d_b: rounded centerpoint queries and
// coverage certificates for maps that break the contraction promise.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpfix/centerpoint.hpp"
#include "lpfix/errors.hpp"
#include "lpfix/grid.hpp"
#include "lpfix/oracles.hpp"
#include "lpfix/solver.hpp"

namespace lpfix {

/// Explicit enumeration refuses grids with more points than this.
inline constexpr double kGridPointCap = 16777216.0;  // 2^24

/// ceil(log2((2d/eps) (1+lambda)/(1-lambda))).
int min_grid_resolution(std::size_t d, double epsilon, double lambda);

/// ceil(log2((d + d lambda) / (2 eps))), at least 1.
int existence_resolution(std::size_t d, double epsilon, double lambda);

/// All points of G^d_b in lexicographic order (last coordinate fastest).
/// Throws GridTooLarge above the cap.
PointSet enumerate_grid(const GridSpec& grid);

struct CertificateEntry {
  GridPoint x;
  Point fx;
};

/// Queried pairs whose l1 bisector halfspaces H_{x, f(x)} are claimed to cover
/// the whole grid.
struct ViolationCertificate {
  std::size_t dim = 1;
  int bits = 1;
  std::vector<CertificateEntry> entries;
};

/// True iff every grid point lies in at least one H^1_{x, f(x)}. Throws
/// GridTooLarge above the enumeration cap.
bool verify_violation_certificate(const ViolationCertificate& cert, std::size_t d, int b);

/// [{"x": [k...], "b": b, "fx": [...]}, ...]
nlohmann::json certificate_to_json(const ViolationCertificate& cert);
ViolationCertificate certificate_from_json(const nlohmann::json& j);

struct GridSolveParams {
  std::size_t dim = 2;
  int bits = 1;
  double epsilon = 1e-2;
  double lambda = 0.5;
  std::size_t dirs = 0;
  double rho_min = 0;
  /// 0 selects a cap large enough to empty the grid at rho_min.
  std::size_t max_queries = 0;
  std::uint64_t seed = 0;
  std::size_t centerpoint_points = 8192;
  /// Refuse b below min_grid_resolution.
  bool require_resolution = true;
  CenterpointOptions centerpoint;
  std::function<void(const IterationEvent&)> observer;

  std::size_t resolved_dirs() const { return dirs ? dirs : 64 * dim; }
  double resolved_rho_min() const { return rho_min > 0 ? rho_min : 1.0 / (2.0 * (dim + 1.0)); }
  std::size_t resolved_max_queries() const;
};

enum class GridOutcome { FoundFixpoint, Certificate };

struct GridSolveResult {
  GridOutcome outcome = GridOutcome::FoundFixpoint;
  GridPoint x;
  double residual = 0;
  ViolationCertificate certificate;
  std::vector<IterationRecord> trace;
  std::size_t queries_used = 0;
  double min_rho = 0;
};

/// The query cap was reached with grid points still alive and no fixpoint
/// found; the partial trace is attached.
class CertificateIncomplete : public SolveError {
 public:
  explicit CertificateIncomplete(GridSolveResult partial);
  const GridSolveResult& partial() const { return partial_; }

 private:
  GridSolveResult partial_;
};

GridSolveResult solve_grid_l1(const Oracle& f, const GridSolveParams& params);

}  // namespace lpfix
