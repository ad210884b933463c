#include "lpfix/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lpfix/random.hpp"

namespace lpfix {

namespace {

void check_in_cube(std::span<const double> y, std::size_t dim) {
  if (y.size() != dim) throw MalformedOracle("oracle answered with the wrong dimension");
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] >= 0.0 && y[i] <= 1.0)) {
      std::ostringstream os;
      os.precision(17);
      os << "oracle output coordinate " << i << " = " << y[i] << " lies outside [0,1]";
      throw MalformedOracle(os.str());
    }
  }
}

void validate(const SolveParams& params) {
  if (params.dim == 0) throw ContractViolation("dimension must be positive");
  if (!(params.epsilon > 0.0)) throw ContractViolation("epsilon must be positive");
  if (!(params.epsilon <= static_cast<double>(params.dim)))
    throw ContractViolation("epsilon must not exceed d");
  if (!(params.lambda >= 0.0 && params.lambda < 1.0))
    throw ContractViolation("lambda must lie in [0,1)");
  if (params.cloud == 0) throw ContractViolation("cloud size must be positive");
  if (params.resolved_dirs() < 2 * params.dim)
    throw ContractViolation("direction count must cover the 2d axis directions");
  const double rho = params.resolved_rho_min();
  if (!(rho > 0.0 && rho <= 1.0 / (params.dim + 1.0)))
    throw ContractViolation("rho_min must lie in (0, 1/(d+1)]");
  if (params.refresh_fraction < 0.0 || params.refresh_fraction >= 1.0)
    throw ContractViolation("refresh_fraction must lie in [0,1)");
}

std::size_t nearest_alive(const SearchSpace& M, std::span<const double> c, const PNorm& p) {
  std::size_t best = M.size();
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < M.size(); ++i) {
    if (!M.is_alive(i)) continue;
    const double dist = distance(M.points()[i], c, p);
    if (dist < best_d) {
      best_d = dist;
      best = i;
    }
  }
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// SearchSpace

SearchSpace::SearchSpace(std::size_t dim, std::size_t n, std::uint64_t seed)
    : points_(dim), seed_(seed) {
  if (dim == 0) throw ContractViolation("dimension must be positive");
  Rng rng(mix_seed(seed, 0xc10d));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> flat(n * dim);
  for (auto& c : flat) c = unit(rng);
  points_ = PointSet(dim, std::move(flat));
  alive_.assign(n, 1);
  alive_count_ = n;
  last_lo_.assign(dim, 0.0);
  last_hi_.assign(dim, 1.0);
}

SearchSpace SearchSpace::from_points(PointSet points) {
  SearchSpace M;
  M.alive_.assign(points.size(), 1);
  M.alive_count_ = points.size();
  M.points_ = std::move(points);
  M.explicit_ = true;
  return M;
}

PointSet SearchSpace::alive_points() const {
  PointSet out(dim());
  out.reserve(alive_count_);
  for (std::size_t i = 0; i < size(); ++i)
    if (alive_[i]) out.push_back(points_[i]);
  return out;
}

std::vector<std::size_t> SearchSpace::alive_indices() const {
  std::vector<std::size_t> out;
  out.reserve(alive_count_);
  for (std::size_t i = 0; i < size(); ++i)
    if (alive_[i]) out.push_back(i);
  return out;
}

double SearchSpace::discard(std::span<const double> c, std::span<const double> fc, const PNorm& p,
                            PointSet* killed) {
  if (c.size() != dim()) throw DimensionMismatch(dim(), c.size());
  if (fc.size() != dim()) throw DimensionMismatch(dim(), fc.size());
  cuts_.emplace_back(Point(c.begin(), c.end()), Point(fc.begin(), fc.end()));
  const std::size_t before = alive_count_;
  if (before == 0) return 0.0;
  std::size_t removed = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!alive_[i]) continue;
    if (bisector_contains(c, fc, points_[i], p)) {
      alive_[i] = 0;
      ++removed;
      if (killed) killed->push_back(points_[i]);
    }
  }
  alive_count_ -= removed;
  const double fraction = static_cast<double>(removed) / static_cast<double>(before);
  measure_ *= (1.0 - fraction);
  return fraction;
}

bool SearchSpace::survives_cuts(std::span<const double> z, const PNorm& p) const {
  // Recent cuts reject most often.
  for (auto it = cuts_.rbegin(); it != cuts_.rend(); ++it)
    if (bisector_contains_by_powers(it->first, it->second, z, p)) return false;
  return true;
}

std::size_t SearchSpace::refresh(const PNorm& p, std::size_t rejection_attempts) {
  if (explicit_) return 0;
  const std::size_t d = dim();
  const std::size_t n = size();

  Point lo = last_lo_, hi = last_hi_;
  if (alive_count_ > 0) {
    lo.assign(d, std::numeric_limits<double>::infinity());
    hi.assign(d, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive_[i]) continue;
      const auto z = points_[i];
      for (std::size_t k = 0; k < d; ++k) {
        lo[k] = std::min(lo[k], z[k]);
        hi[k] = std::max(hi[k], z[k]);
      }
    }
    // Pad by a little of the width plus the typical spacing of the survivors.
    const double spacing =
        std::pow(measure_ / static_cast<double>(alive_count_), 1.0 / static_cast<double>(d));
    for (std::size_t k = 0; k < d; ++k) {
      const double pad = 0.05 * (hi[k] - lo[k]) + spacing;
      lo[k] = std::max(0.0, lo[k] - pad);
      hi[k] = std::min(1.0, hi[k] + pad);
    }
  }
  last_lo_ = lo;
  last_hi_ = hi;

  std::vector<double> flat;
  flat.reserve(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    if (!alive_[i]) continue;
    const auto z = points_[i];
    flat.insert(flat.end(), z.begin(), z.end());
  }
  const std::size_t kept = alive_count_;

  Rng rng(mix_seed(seed_, 0x5eed0000 + ++refreshes_));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss;
  Point z(d);

  // Independent uniform samples from the padded box, abandoned early when
  // fewer than one draw in ten is accepted.
  std::size_t count = kept;
  for (std::size_t attempt = 0; attempt < rejection_attempts && count < n; ++attempt) {
    if (attempt == 8192 && (count - kept) * 10 < attempt) break;
    for (std::size_t k = 0; k < d; ++k) z[k] = lo[k] + (hi[k] - lo[k]) * unit(rng);
    if (!survives_cuts(z, p)) continue;
    flat.insert(flat.end(), z.begin(), z.end());
    ++count;
  }

  // Thin regions defeat rejection sampling. The rest is filled by hit-and-run
  // moves (slice sampling with shrinkage) started at uniformly chosen
  // survivors; the kernel preserves the uniform law on the region, so every
  // new point is again uniform on it.
  if (count < n && count > 0) {
    double width = 0.0;
    for (std::size_t k = 0; k < d; ++k) width += (hi[k] - lo[k]) * (hi[k] - lo[k]);
    width = std::max(std::sqrt(width), 1e-300);
    Point u(d), x(d);
    const std::size_t parents = count;
    std::uniform_int_distribution<std::size_t> pick(0, parents - 1);
    while (count < n) {
      const std::size_t j = pick(rng);
      std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(j * d), d, x.begin());
      for (int step = 0; step < kHitAndRunSteps; ++step) {
        double nrm = 0.0;
        for (auto& c : u) {
          c = gauss(rng);
          nrm += c * c;
        }
        nrm = std::sqrt(nrm);
        if (!(nrm > 0.0)) continue;
        // Chord of the cube through x along u.
        double tmin = -std::numeric_limits<double>::infinity();
        double tmax = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < d; ++k) {
          u[k] /= nrm;
          if (u[k] > 0.0) {
            tmin = std::max(tmin, -x[k] / u[k]);
            tmax = std::min(tmax, (1.0 - x[k]) / u[k]);
          } else if (u[k] < 0.0) {
            tmin = std::max(tmin, (1.0 - x[k]) / u[k]);
            tmax = std::min(tmax, -x[k] / u[k]);
          }
        }
        double left = -unit(rng) * width;
        double right = left + width;
        left = std::max(left, tmin);
        right = std::min(right, tmax);
        for (int shrink = 0; shrink < 200; ++shrink) {
          const double t = left + (right - left) * unit(rng);
          bool inside_cube = true;
          for (std::size_t k = 0; k < d; ++k) {
            z[k] = x[k] + t * u[k];
            if (!(z[k] >= 0.0 && z[k] <= 1.0)) inside_cube = false;
          }
          if (inside_cube && survives_cuts(z, p)) {
            x = z;
            break;
          }
          if (t < 0.0) left = t;
          else right = t;
        }
      }
      flat.insert(flat.end(), x.begin(), x.end());
      ++count;
    }
  }

  points_ = PointSet(d, std::move(flat));
  alive_count_ = points_.size();
  alive_.assign(alive_count_, 1);
  return alive_count_ - kept;
}

double discard_halfspace(SearchSpace& M, std::span<const double> c, std::span<const double> fc,
                         const PNorm& p) {
  return M.discard(c, fc, p);
}

// ---------------------------------------------------------------------------
// Bounds

std::size_t SolveParams::resolved_max_queries() const {
  if (max_queries) return max_queries;
  return std::max<std::size_t>(
      1, 4 * theoretical_query_bound(dim, p, epsilon, lambda, resolved_rho_min()));
}

EmptySearchSpace::EmptySearchSpace(SolveReport report)
    : NonContractionSuspected("search space emptied before an approximate fixpoint was found (" +
                              std::to_string(report.queries_used) + " queries)"),
      report_(std::move(report)) {}

double residual(const Oracle& f, std::span<const double> x, const PNorm& p) {
  const Point fx = f.evaluate(x);
  check_in_cube(fx, x.size());
  return distance(fx, x, p);
}

double survival_radius(double epsilon, double lambda) {
  if (!(epsilon > 0.0)) throw ContractViolation("epsilon must be positive");
  if (!(lambda >= 0.0 && lambda < 1.0)) throw ContractViolation("lambda must lie in [0,1)");
  return epsilon * (1.0 - lambda) / (2.0 + 2.0 * lambda);
}

std::size_t theoretical_query_bound(std::size_t d, const PNorm&, double epsilon, double lambda,
                                    double rho) {
  if (d == 0) throw ContractViolation("dimension must be positive");
  if (!(rho > 0.0 && rho < 1.0)) throw ContractViolation("rho must lie in (0,1)");
  const double r = survival_radius(epsilon, lambda);
  const double dd = static_cast<double>(d);
  // log of (2^d / d!) r^d
  const double log_vol = dd * std::log(2.0) - std::lgamma(dd + 1.0) + dd * std::log(r);
  const double k = -log_vol / -std::log1p(-rho);
  if (!(k > 0.0)) return 0;
  // Guard against a ratio that is an integer up to rounding.
  const double rounded = std::round(k);
  if (std::abs(k - rounded) <= 1e-9 * std::max(1.0, rounded)) return static_cast<std::size_t>(rounded);
  return static_cast<std::size_t>(std::ceil(k));
}

std::size_t banach_query_cap(std::size_t d, double epsilon, double lambda) {
  if (!(epsilon > 0.0)) throw ContractViolation("epsilon must be positive");
  if (!(lambda >= 0.0 && lambda < 1.0)) throw ContractViolation("lambda must lie in [0,1)");
  if (lambda == 0.0) return 2;
  const double k = std::log(static_cast<double>(d) / epsilon) / std::log(1.0 / lambda);
  return static_cast<std::size_t>(std::max(0.0, std::ceil(k))) + 1;
}

bool prefers_banach(std::size_t d, double epsilon, double lambda) {
  return std::max(1.0 / epsilon, 1.0 / (1.0 - lambda)) < static_cast<double>(d);
}

BanachResult banach_iterate(const Oracle& f, std::span<const double> x0, double epsilon,
                            double lambda, const PNorm& p) {
  const std::size_t d = f.dimension();
  if (x0.size() != d) throw DimensionMismatch(d, x0.size());
  for (double c : x0)
    if (!(c >= 0.0 && c <= 1.0)) throw ContractViolation("x0 must lie in [0,1]^d");
  const std::size_t cap = banach_query_cap(d, epsilon, lambda);

  BanachResult out;
  Point x(x0.begin(), x0.end());
  while (true) {
    if (out.queries == cap) {
      std::ostringstream os;
      os << "Banach iteration exceeded its cap of " << cap << " queries";
      throw NonContractionSuspected(os.str());
    }
    Point fx = f.evaluate(x);
    ++out.queries;
    check_in_cube(fx, d);
    const double r = distance(fx, x, p);
    out.residuals.push_back(r);
    if (r <= epsilon) {
      out.x = std::move(x);
      out.residual = r;
      return out;
    }
    x = std::move(fx);
  }
}

// ---------------------------------------------------------------------------
// Cutting loop

SolveReport solve_continuous(const Oracle& f, const SolveParams& params) {
  validate(params);
  const std::size_t d = params.dim;
  if (f.dimension() != d) throw DimensionMismatch(d, f.dimension());
  const PNorm& p = params.p;

  SolveReport report;
  if (prefers_banach(d, params.epsilon, params.lambda)) {
    const Point x0(d, 0.5);
    auto res = banach_iterate(f, x0, params.epsilon, params.lambda, p);
    report.outcome = Outcome::FoundFixpoint;
    report.x = std::move(res.x);
    report.residual = res.residual;
    report.used_banach = true;
    report.banach_queries = res.queries;
    report.queries_used = res.queries;
    report.theoretical_bound = banach_query_cap(d, params.epsilon, params.lambda);
    report.max_queries = report.theoretical_bound;
    return report;
  }

  const std::size_t max_queries = params.resolved_max_queries();
  const double rho_min = params.resolved_rho_min();
  report.max_queries = max_queries;

  SearchSpace M(d, params.cloud, params.seed);
  CountingOracle oracle(f);
  Rng rng(mix_seed(params.seed, 0x5a3e));
  double min_rho = 1.0;
  double last_discard = 1.0;

  auto finish = [&](SolveReport& r) {
    r.queries_used = oracle.count();
    r.min_rho = r.trace.empty() ? rho_min : min_rho;
    const double rho = std::min(r.min_rho, std::nextafter(1.0, 0.0));
    r.theoretical_bound = theoretical_query_bound(d, p, params.epsilon, params.lambda, rho);
  };

  while (oracle.count() < max_queries) {
    if (M.alive_count() == 0) {
      finish(report);
      throw EmptySearchSpace(std::move(report));
    }
    const std::size_t iter = oracle.count() + 1;

    // Measure restricted to M, represented by (a subsample of) the survivors.
    PointSet support;
    if (params.centerpoint_points && M.alive_count() > params.centerpoint_points) {
      const auto idx = M.alive_indices();
      std::vector<std::size_t> pick;
      pick.reserve(params.centerpoint_points);
      std::sample(idx.begin(), idx.end(), std::back_inserter(pick), params.centerpoint_points, rng);
      support = PointSet(d);
      support.reserve(pick.size());
      for (auto i : pick) support.push_back(M.points()[i]);
    } else {
      support = M.alive_points();
    }

    const auto sample = DirectionSample::make(d, params.resolved_dirs(), mix_seed(params.seed, iter));
    CenterpointOptions opts = params.centerpoint;
    opts.seed = mix_seed(params.seed ^ opts.seed, 0xce00 + iter);
    CenterpointCertificate cert;
    try {
      cert = find_centerpoint(support, p, sample, rho_min, opts);
    } catch (const NoCandidateReached& e) {
      cert = e.best();
    }
    Point c = cert.candidate;
    double rho = cert.quality;
    if (oracle.seen(c) || last_discard == 0.0) {
      const std::size_t j = nearest_alive(M, c, p);
      c.assign(M.points()[j].begin(), M.points()[j].end());
      rho = centerpoint_quality(support, c, p, sample).quality;
    }

    const Point fc = oracle.query(c);
    check_in_cube(fc, d);
    const double res = distance(fc, c, p);
    min_rho = std::min(min_rho, rho);

    IterationRecord rec;
    rec.iter = iter;
    rec.query = c;
    rec.response = fc;
    rec.residual = res;
    rec.alive_fraction = M.measure();
    rec.achieved_rho = rho;
    rec.cum_queries = oracle.count();

    if (res <= params.epsilon) {
      rec.alive_fraction_after = rec.alive_fraction;
      report.trace.push_back(std::move(rec));
      report.outcome = Outcome::FoundFixpoint;
      report.x = std::move(c);
      report.residual = res;
      finish(report);
      return report;
    }

    PointSet killed(d);
    rec.discard_fraction = M.discard(c, fc, p, params.observer ? &killed : nullptr);
    rec.alive_fraction_after = rec.alive_fraction * (1.0 - rec.discard_fraction);
    last_discard = rec.discard_fraction;
    if (params.observer) params.observer(IterationEvent{rec, killed});
    report.trace.push_back(std::move(rec));

    if (params.refresh_fraction > 0.0 &&
        static_cast<double>(M.alive_count()) < params.refresh_fraction * static_cast<double>(M.size()))
      M.refresh(p, 4 * params.cloud);
  }

  report.outcome = Outcome::QueryBudgetExhausted;
  if (!report.trace.empty()) {
    report.x = report.trace.back().query;
    report.residual = report.trace.back().residual;
  }
  finish(report);
  return report;
}

}  // namespace lpfix
