#pragma once

// Approximate lp-centerpoints of finite point sets.
//
// Existence of a 1/(d+1)-centerpoint is guaranteed for every p, but no
// efficient construction is known. This module therefore works with sampled
// certificates: the quality rho of a candidate c is the smallest fraction of
// the set captured by a limit halfspace H_{c,v}, minimised over a finite,
// seeded sample of directions v that always contains the 2d axis directions.

#include <cstdint>
#include <span>
#include <vector>

#include "lpfix/errors.hpp"
#include "lpfix/grid.hpp"
#include "lpfix/lp_geometry.hpp"

namespace lpfix {

/// Finite proxy for the unit sphere S^{d-1}: the 2d signed axis directions
/// followed by `count - 2d` Gaussian-normalised directions drawn from `seed`.
struct DirectionSample {
  std::uint64_t seed = 0;
  PointSet dirs;

  static DirectionSample make(std::size_t dim, std::size_t count, std::uint64_t seed);
  /// Same sample with additional (normalised) directions appended.
  DirectionSample with_extra(const std::vector<Vector>& extra) const;

  std::size_t count() const { return dirs.size(); }
  std::size_t dim() const { return dirs.dim(); }
};

struct CenterpointCertificate {
  Point candidate;
  /// min over sampled v of |P ∩ H_{c,v}| / |P|.
  double quality = 0;
  Vector worst_dir;
  std::size_t worst_count = 0;
  std::uint64_t sample_seed = 0;
  std::size_t sample_count = 0;
  std::size_t set_size = 0;
};

/// Raised by find_centerpoint when no slate candidate reaches rho_min; the
/// best certificate found is attached.
class NoCandidateReached : public SolveError {
 public:
  NoCandidateReached(double rho_min, CenterpointCertificate best);
  const CenterpointCertificate& best() const { return best_; }

 private:
  CenterpointCertificate best_;
};

/// counts[j] = |{z in P : z in H^p_{c, dirs[j]}}|, using the same support
/// function path as limit_contains.
std::vector<std::size_t> limit_halfspace_counts(const PointSet& P, std::span<const double> c,
                                                const PNorm& p, const PointSet& dirs);

CenterpointCertificate centerpoint_quality(const PointSet& P, std::span<const double> c,
                                           const PNorm& p, const DirectionSample& sample);

struct CenterpointOptions {
  /// Number of random members of P added to the candidate slate.
  std::size_t random_candidates = 32;
  /// The slate is ranked on a random subset of this many points...
  std::size_t screen_size = 2048;
  /// ...and this many leaders are certified on all of P.
  std::size_t finalists = 3;
  /// Push-map iteration runs on a subset of this size.
  std::size_t push_points = 256;
  std::size_t push_max_iters = 500;
  /// Relative to the bounding-box diameter.
  double push_tol = 1e-6;
  std::uint64_t seed = 0;
};

/// Evaluates the slate {coordinate median, centroid, push-map endpoint,
/// random points of P} and returns the best certificate. The candidate always
/// lies in the axis-aligned bounding box of P. Throws NoCandidateReached if
/// the best quality is below rho_min.
CenterpointCertificate find_centerpoint(const PointSet& P, const PNorm& p,
                                        const DirectionSample& sample, double rho_min,
                                        const CenterpointOptions& options = {});

/// One Monte Carlo step of the push map
///   x + (scale / |dirs|) * sum_v v * max(1/(d+1) - frac(H_{x,-v} ∩ P), 0),
/// clamped to the bounding box of P.
Point push_map_step(std::span<const double> x, const PointSet& P, const PNorm& p,
                    const DirectionSample& sample, double step_scale = 1.0);

struct PushMapResult {
  Point endpoint;
  std::size_t iterations = 0;
  double last_step = 0;
};

/// Repeats push_map_step until the step norm drops below tol or max_iters.
PushMapResult push_map_iterate(std::span<const double> x0, const PointSet& P, const PNorm& p,
                               const DirectionSample& sample, double tol = 1e-6,
                               std::size_t max_iters = 500, double step_scale = 1.0);

/// Coordinate-wise nearest point of G^d_b (ties round up). c must lie in
/// [0,1]^d.
GridPoint round_centerpoint_to_grid_l1(std::span<const double> c, int bits);

/// {0, e_1, ..., e_d}.
PointSet tightness_instance(std::size_t dim);

/// Per-coordinate [lo, hi] of a non-empty point set.
struct BoundingBox {
  Point lo;
  Point hi;
  double diameter() const;
  bool contains(std::span<const double> x) const;
};
BoundingBox bounding_box(const PointSet& P);

}  // namespace lpfix
