#include "lpfix/centerpoint.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lpfix/random.hpp"

namespace lpfix {

namespace {

PointSet negated(const PointSet& dirs) {
  std::vector<double> flat = dirs.flat();
  for (auto& c : flat) c = -c;
  return PointSet(dirs.dim(), std::move(flat));
}

PointSet subset(const PointSet& P, std::size_t n, Rng& rng) {
  std::vector<std::size_t> all(P.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<std::size_t> picked;
  picked.reserve(n);
  std::sample(all.begin(), all.end(), std::back_inserter(picked), n, rng);
  PointSet out(P.dim());
  out.reserve(picked.size());
  for (auto i : picked) out.push_back(P[i]);
  return out;
}

Point coordinate_median(const PointSet& P) {
  const std::size_t n = P.size();
  Point m(P.dim());
  std::vector<double> col(n);
  for (std::size_t j = 0; j < P.dim(); ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = P[i][j];
    auto mid = col.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(col.begin(), mid, col.end());
    if (n % 2 == 1) {
      m[j] = *mid;
    } else {
      const double upper = *mid;
      const double lower = *std::max_element(col.begin(), mid);
      m[j] = lower + (upper - lower) / 2;
    }
  }
  return m;
}

Point centroid(const PointSet& P) {
  Point c(P.dim(), 0.0);
  for (std::size_t i = 0; i < P.size(); ++i) {
    for (std::size_t j = 0; j < P.dim(); ++j) c[j] += P[i][j];
  }
  for (auto& x : c) x /= static_cast<double>(P.size());
  return c;
}

void clamp_to(Point& x, const BoundingBox& box) {
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::clamp(x[j], box.lo[j], box.hi[j]);
}

// Push step against precomputed negated directions.
Point push_step_impl(std::span<const double> x, const PointSet& P, const PNorm& p,
                     const PointSet& dirs, const PointSet& neg_dirs, const BoundingBox& box,
                     double step_scale) {
  const std::size_t d = P.dim();
  const auto counts = limit_halfspace_counts(P, x, p, neg_dirs);
  const double target = 1.0 / static_cast<double>(d + 1);
  const double n = static_cast<double>(P.size());
  Vector step(d, 0.0);
  for (std::size_t j = 0; j < dirs.size(); ++j) {
    const double deficit = std::max(target - static_cast<double>(counts[j]) / n, 0.0);
    if (deficit == 0) continue;
    for (std::size_t i = 0; i < d; ++i) step[i] += dirs[j][i] * deficit;
  }
  const double scale = step_scale / static_cast<double>(dirs.size());
  Point out(x.begin(), x.end());
  for (std::size_t i = 0; i < d; ++i) out[i] += scale * step[i];
  clamp_to(out, box);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

DirectionSample DirectionSample::make(std::size_t dim, std::size_t count, std::uint64_t seed) {
  if (dim == 0) throw ContractViolation("direction sample needs dim >= 1");
  if (count < 2 * dim) throw ContractViolation("direction sample needs at least 2d directions");
  DirectionSample s;
  s.seed = seed;
  s.dirs = PointSet(dim);
  s.dirs.reserve(count);
  Vector v(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (double sign : {1.0, -1.0}) {
      std::fill(v.begin(), v.end(), 0.0);
      v[i] = sign;
      s.dirs.push_back(v);
    }
  }
  Rng rng(seed);
  std::normal_distribution<double> gauss;
  while (s.dirs.size() < count) {
    double n2 = 0;
    for (auto& c : v) {
      c = gauss(rng);
      n2 += c * c;
    }
    if (n2 < 1e-24) continue;
    const double n = std::sqrt(n2);
    for (auto& c : v) c /= n;
    s.dirs.push_back(v);
  }
  return s;
}

DirectionSample DirectionSample::with_extra(const std::vector<Vector>& extra) const {
  DirectionSample s = *this;
  for (const auto& e : extra) {
    const double n = norm(e, PNorm::two());
    if (n == 0) throw ContractViolation("zero extra direction");
    Vector v = e;
    for (auto& c : v) c /= n;
    s.dirs.push_back(v);
  }
  return s;
}

NoCandidateReached::NoCandidateReached(double rho_min, CenterpointCertificate best)
    : SolveError("no centerpoint candidate reached rho_min = " + std::to_string(rho_min) +
                 " (best " + std::to_string(best.quality) + ")"),
      best_(std::move(best)) {}

double BoundingBox::diameter() const {
  double s = 0;
  for (std::size_t j = 0; j < lo.size(); ++j) s += (hi[j] - lo[j]) * (hi[j] - lo[j]);
  return std::sqrt(s);
}

bool BoundingBox::contains(std::span<const double> x) const {
  for (std::size_t j = 0; j < lo.size(); ++j) {
    if (x[j] < lo[j] || x[j] > hi[j]) return false;
  }
  return true;
}

BoundingBox bounding_box(const PointSet& P) {
  if (P.empty()) throw ContractViolation("bounding box of an empty set");
  BoundingBox b{Point(P[0].begin(), P[0].end()), Point(P[0].begin(), P[0].end())};
  for (std::size_t i = 1; i < P.size(); ++i) {
    for (std::size_t j = 0; j < P.dim(); ++j) {
      b.lo[j] = std::min(b.lo[j], P[i][j]);
      b.hi[j] = std::max(b.hi[j], P[i][j]);
    }
  }
  return b;
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> limit_halfspace_counts(const PointSet& P, std::span<const double> c,
                                                const PNorm& p, const PointSet& dirs) {
  if (P.dim() != c.size()) throw DimensionMismatch(P.dim(), c.size());
  if (dirs.dim() != c.size()) throw DimensionMismatch(dirs.dim(), c.size());
  const std::size_t d = c.size();
  const std::size_t m = dirs.size();
  std::vector<std::size_t> counts(m, 0);
  SupportFunction support;
  Vector w(d), g(d);
  const double* D = dirs.flat().data();
  for (std::size_t i = 0; i < P.size(); ++i) {
    const auto z = P[i];
    bool zero = true;
    for (std::size_t k = 0; k < d; ++k) {
      w[k] = z[k] - c[k];
      zero = zero && w[k] == 0;
    }
    if (zero) {
      for (auto& n : counts) ++n;
      continue;
    }
    support.assign(w, p);
    if (support.linear_form(g)) {
      for (std::size_t j = 0; j < m; ++j) {
        const double* v = D + j * d;
        double s = 0;
        for (std::size_t k = 0; k < d; ++k) s += g[k] * v[k];
        counts[j] += (s >= 0);
      }
      continue;
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (support(dirs[j]) >= 0) ++counts[j];
    }
  }
  return counts;
}

CenterpointCertificate centerpoint_quality(const PointSet& P, std::span<const double> c,
                                           const PNorm& p, const DirectionSample& sample) {
  if (P.empty()) throw ContractViolation("centerpoint quality of an empty set");
  const auto counts = limit_halfspace_counts(P, c, p, sample.dirs);
  const auto worst = std::min_element(counts.begin(), counts.end()) - counts.begin();
  CenterpointCertificate cert;
  cert.candidate.assign(c.begin(), c.end());
  cert.worst_count = counts[static_cast<std::size_t>(worst)];
  cert.quality = static_cast<double>(cert.worst_count) / static_cast<double>(P.size());
  const auto wd = sample.dirs[static_cast<std::size_t>(worst)];
  cert.worst_dir.assign(wd.begin(), wd.end());
  cert.sample_seed = sample.seed;
  cert.sample_count = sample.count();
  cert.set_size = P.size();
  return cert;
}

CenterpointCertificate find_centerpoint(const PointSet& P, const PNorm& p,
                                        const DirectionSample& sample, double rho_min,
                                        const CenterpointOptions& options) {
  if (P.empty()) throw ContractViolation("find_centerpoint on an empty set");
  const std::size_t d = P.dim();
  if (!(rho_min > 0.0) || rho_min > 1.0 / static_cast<double>(d + 1) + 1e-15) {
    throw ContractViolation("rho_min must lie in (0, 1/(d+1)]");
  }
  Rng rng(mix_seed(options.seed, P.size()));
  const BoundingBox box = bounding_box(P);

  const bool screened = P.size() > options.screen_size;
  const PointSet screen_storage = screened ? subset(P, options.screen_size, rng) : PointSet{};
  const PointSet& screen = screened ? screen_storage : P;

  std::vector<Point> slate;
  slate.push_back(coordinate_median(P));
  slate.push_back(centroid(P));
  const double diam = box.diameter();
  if (diam > 0 && options.push_max_iters > 0) {
    const PointSet push_set = screen.size() > options.push_points
                                  ? subset(screen, options.push_points, rng)
                                  : screen;
    slate.push_back(push_map_iterate(slate[1], push_set, p, sample, options.push_tol * diam,
                                     options.push_max_iters, diam)
                        .endpoint);
  }
  std::uniform_int_distribution<std::size_t> pick(0, P.size() - 1);
  for (std::size_t k = 0; k < options.random_candidates; ++k) {
    const auto z = P[pick(rng)];
    slate.emplace_back(z.begin(), z.end());
  }

  std::vector<CenterpointCertificate> ranked;
  ranked.reserve(slate.size());
  for (const auto& c : slate) ranked.push_back(centerpoint_quality(screen, c, p, sample));

  auto better = [](const CenterpointCertificate& a, const CenterpointCertificate& b) {
    return a.quality > b.quality;
  };
  CenterpointCertificate best;
  if (!screened) {
    // Earliest slate entry wins ties.
    best = ranked.front();
    for (const auto& r : ranked) {
      if (better(r, best)) best = r;
    }
  } else {
    std::vector<std::size_t> order(ranked.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return better(ranked[a], ranked[b]); });
    const std::size_t keep = std::min(std::max<std::size_t>(options.finalists, 1), order.size());
    std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep));
    bool first = true;
    for (std::size_t r = 0; r < keep; ++r) {
      auto cert = centerpoint_quality(P, slate[order[r]], p, sample);
      if (first || better(cert, best)) {
        best = std::move(cert);
        first = false;
      }
    }
  }
  if (best.quality < rho_min) throw NoCandidateReached(rho_min, std::move(best));
  return best;
}

Point push_map_step(std::span<const double> x, const PointSet& P, const PNorm& p,
                    const DirectionSample& sample, double step_scale) {
  if (P.empty()) throw ContractViolation("push map on an empty set");
  if (x.size() != P.dim()) throw DimensionMismatch(P.dim(), x.size());
  return push_step_impl(x, P, p, sample.dirs, negated(sample.dirs), bounding_box(P), step_scale);
}

PushMapResult push_map_iterate(std::span<const double> x0, const PointSet& P, const PNorm& p,
                               const DirectionSample& sample, double tol, std::size_t max_iters,
                               double step_scale) {
  if (P.empty()) throw ContractViolation("push map on an empty set");
  if (x0.size() != P.dim()) throw DimensionMismatch(P.dim(), x0.size());
  const PointSet neg = negated(sample.dirs);
  const BoundingBox box = bounding_box(P);
  PushMapResult r{Point(x0.begin(), x0.end()), 0, 0.0};
  while (r.iterations < max_iters) {
    Point next = push_step_impl(r.endpoint, P, p, sample.dirs, neg, box, step_scale);
    double s2 = 0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      s2 += (next[i] - r.endpoint[i]) * (next[i] - r.endpoint[i]);
    }
    r.endpoint = std::move(next);
    r.last_step = std::sqrt(s2);
    ++r.iterations;
    if (r.last_step < tol) break;
  }
  return r;
}

GridPoint round_centerpoint_to_grid_l1(std::span<const double> c, int bits) {
  if (bits < 1 || bits > 52) throw ContractViolation("grid bits must lie in [1, 52]");
  GridPoint g;
  g.bits = bits;
  g.k.resize(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!(c[i] >= 0.0 && c[i] <= 1.0)) {
      throw ContractViolation("rounding requires a point of the unit cube");
    }
    const double s = std::ldexp(c[i], bits);
    const double f = std::floor(s);
    g.k[i] = static_cast<std::int64_t>(f) + (s - f >= 0.5 ? 1 : 0);
  }
  return g;
}

PointSet tightness_instance(std::size_t dim) {
  if (dim == 0) throw ContractViolation("tightness instance needs dim >= 1");
  PointSet P(dim);
  Vector v(dim, 0.0);
  P.push_back(v);
  for (std::size_t i = 0; i < dim; ++i) {
    v[i] = 1.0;
    P.push_back(v);
    v[i] = 0.0;
  }
  return P;
}

}  // namespace lpfix
