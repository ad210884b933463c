#include "lpfix/grid_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lpfix/random.hpp"

namespace lpfix {

namespace {

void check_params(double epsilon, double lambda) {
  if (!(epsilon > 0.0)) throw ContractViolation("epsilon must be positive");
  if (!(lambda >= 0.0 && lambda < 1.0)) throw ContractViolation("lambda must lie in [0,1)");
}

int ceil_log2(double x) {
  const double l = std::log2(x);
  const double r = std::round(l);
  // Exact powers of two must not be bumped up by rounding noise.
  if (std::abs(l - r) <= 1e-12 * std::max(1.0, std::abs(r))) return static_cast<int>(r);
  return static_cast<int>(std::ceil(l));
}

void check_cap(const GridSpec& grid) {
  if (grid.bits < 1 || grid.bits > 52) throw ContractViolation("grid bits must lie in [1, 52]");
  if (grid.point_count() > kGridPointCap) {
    std::ostringstream os;
    os << "grid G^" << grid.dim << "_" << grid.bits << " has " << grid.point_count()
       << " points, above the enumeration cap of 2^24";
    throw GridTooLarge(os.str());
  }
}

GridPoint to_grid_point(std::span<const double> x, int bits) {
  GridPoint g;
  g.bits = bits;
  g.k.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g.k[i] = static_cast<std::int64_t>(std::ldexp(x[i], bits));
  return g;
}

}  // namespace

int min_grid_resolution(std::size_t d, double epsilon, double lambda) {
  check_params(epsilon, lambda);
  const double x = (2.0 * static_cast<double>(d) / epsilon) * (1.0 + lambda) / (1.0 - lambda);
  return ceil_log2(x);
}

int existence_resolution(std::size_t d, double epsilon, double lambda) {
  check_params(epsilon, lambda);
  const double dd = static_cast<double>(d);
  return std::max(1, ceil_log2((dd + dd * lambda) / (2.0 * epsilon)));
}

PointSet enumerate_grid(const GridSpec& grid) {
  check_cap(grid);
  const std::size_t d = grid.dim;
  const auto side = static_cast<std::size_t>(grid.side());
  const auto total = static_cast<std::size_t>(grid.point_count());
  std::vector<double> flat(total * d);
  std::vector<std::size_t> k(d, 0);
  for (std::size_t n = 0; n < total; ++n) {
    for (std::size_t i = 0; i < d; ++i)
      flat[n * d + i] = std::ldexp(static_cast<double>(k[i]), -grid.bits);
    for (std::size_t i = d; i-- > 0;) {
      if (++k[i] < side) break;
      k[i] = 0;
    }
  }
  return PointSet(d, std::move(flat));
}

bool verify_violation_certificate(const ViolationCertificate& cert, std::size_t d, int b) {
  const PointSet grid = enumerate_grid(GridSpec{d, b});
  if (cert.entries.empty()) return grid.empty();
  std::vector<Point> xs;
  xs.reserve(cert.entries.size());
  for (const auto& e : cert.entries) {
    if (e.x.k.size() != d) throw DimensionMismatch(d, e.x.k.size());
    if (e.fx.size() != d) throw DimensionMismatch(d, e.fx.size());
    xs.push_back(e.x.to_point());
  }
  const PNorm l1 = PNorm::one();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    bool covered = false;
    for (std::size_t j = 0; j < xs.size() && !covered; ++j)
      covered = bisector_contains(xs[j], cert.entries[j].fx, grid[i], l1);
    if (!covered) return false;
  }
  return true;
}

nlohmann::json certificate_to_json(const ViolationCertificate& cert) {
  auto arr = nlohmann::json::array();
  for (const auto& e : cert.entries) arr.push_back({{"x", e.x.k}, {"b", e.x.bits}, {"fx", e.fx}});
  return arr;
}

ViolationCertificate certificate_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ContractViolation("certificate must be a JSON array");
  ViolationCertificate cert;
  bool first = true;
  for (const auto& item : j) {
    CertificateEntry e;
    e.x.k = item.at("x").get<std::vector<std::int64_t>>();
    e.x.bits = item.at("b").get<int>();
    e.fx = item.at("fx").get<Point>();
    if (first) {
      cert.dim = e.x.k.size();
      cert.bits = e.x.bits;
      first = false;
    } else if (e.x.k.size() != cert.dim || e.x.bits != cert.bits) {
      throw ContractViolation("certificate entries disagree on the grid");
    }
    const std::int64_t top = std::int64_t{1} << e.x.bits;
    for (auto k : e.x.k)
      if (k < 0 || k > top) throw ContractViolation("certificate point is off the grid");
    cert.entries.push_back(std::move(e));
  }
  return cert;
}

std::size_t GridSolveParams::resolved_max_queries() const {
  if (max_queries) return max_queries;
  const double points = GridSpec{dim, bits}.point_count();
  const double k = std::log(points) / -std::log1p(-resolved_rho_min());
  return 4 * (static_cast<std::size_t>(std::ceil(k)) + 1);
}

CertificateIncomplete::CertificateIncomplete(GridSolveResult partial)
    : SolveError("query cap reached with " + std::to_string(partial.queries_used) +
                 " queries, grid points still alive and no approximate fixpoint found"),
      partial_(std::move(partial)) {}

GridSolveResult solve_grid_l1(const Oracle& f, const GridSolveParams& params) {
  const std::size_t d = params.dim;
  const int b = params.bits;
  if (d == 0) throw ContractViolation("dimension must be positive");
  if (f.dimension() != d) throw DimensionMismatch(d, f.dimension());
  check_params(params.epsilon, params.lambda);
  if (b < 1) throw ContractViolation("grid bits must be at least 1");
  if (params.require_resolution) {
    const int need = min_grid_resolution(d, params.epsilon, params.lambda);
    if (b < need) {
      std::ostringstream os;
      os << "b = " << b << " is below the required resolution " << need;
      throw ResolutionTooCoarse(os.str());
    }
  }
  const GridSpec spec{d, b};
  check_cap(spec);
  const double rho_min = params.resolved_rho_min();
  if (!(rho_min > 0.0 && rho_min <= 1.0 / (d + 1.0)))
    throw ContractViolation("rho_min must lie in (0, 1/(d+1)]");

  const PNorm l1 = PNorm::one();
  SearchSpace M = SearchSpace::from_points(enumerate_grid(spec));
  CountingOracle oracle(f);
  Rng rng(mix_seed(params.seed, 0x96d));
  const std::size_t max_queries = params.resolved_max_queries();

  GridSolveResult result;
  double min_rho = 1.0;
  double last_discard = 1.0;

  auto certificate = [&] {
    ViolationCertificate cert{d, b, {}};
    for (const auto& [x, fx] : oracle.log()) cert.entries.push_back({to_grid_point(x, b), fx});
    return cert;
  };

  while (M.alive_count() > 0 && oracle.count() < max_queries) {
    const std::size_t iter = oracle.count() + 1;
    PointSet support;
    if (params.centerpoint_points && M.alive_count() > params.centerpoint_points) {
      const auto idx = M.alive_indices();
      std::vector<std::size_t> pick;
      std::sample(idx.begin(), idx.end(), std::back_inserter(pick), params.centerpoint_points, rng);
      support = PointSet(d);
      support.reserve(pick.size());
      for (auto i : pick) support.push_back(M.points()[i]);
    } else {
      support = M.alive_points();
    }

    const auto sample = DirectionSample::make(d, params.resolved_dirs(), mix_seed(params.seed, iter));
    CenterpointOptions opts = params.centerpoint;
    opts.seed = mix_seed(params.seed ^ opts.seed, 0x9c00 + iter);
    CenterpointCertificate cert;
    try {
      cert = find_centerpoint(support, l1, sample, rho_min, opts);
    } catch (const NoCandidateReached& e) {
      cert = e.best();
    }
    GridPoint g = round_centerpoint_to_grid_l1(cert.candidate, b);
    Point c = g.to_point();
    double rho = centerpoint_quality(support, c, l1, sample).quality;
    if (oracle.seen(c) || last_discard == 0.0) {
      std::size_t best = M.size();
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < M.size(); ++i) {
        if (!M.is_alive(i)) continue;
        const double dist = distance(M.points()[i], c, l1);
        if (dist < best_d) {
          best_d = dist;
          best = i;
        }
      }
      c.assign(M.points()[best].begin(), M.points()[best].end());
      g = to_grid_point(c, b);
      rho = centerpoint_quality(support, c, l1, sample).quality;
    }

    const Point fc = oracle.query(c);
    for (double v : fc)
      if (!(v >= 0.0 && v <= 1.0)) throw MalformedOracle("grid oracle answered outside [0,1]^d");
    const double res = distance(fc, c, l1);
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
      result.trace.push_back(std::move(rec));
      result.outcome = GridOutcome::FoundFixpoint;
      result.x = std::move(g);
      result.residual = res;
      result.queries_used = oracle.count();
      result.min_rho = min_rho;
      return result;
    }

    PointSet killed(d);
    rec.discard_fraction = M.discard(c, fc, l1, params.observer ? &killed : nullptr);
    rec.alive_fraction_after = rec.alive_fraction * (1.0 - rec.discard_fraction);
    last_discard = rec.discard_fraction;
    if (params.observer) params.observer(IterationEvent{rec, killed});
    result.trace.push_back(std::move(rec));
  }

  result.queries_used = oracle.count();
  result.min_rho = result.trace.empty() ? rho_min : min_rho;
  if (M.alive_count() > 0) throw CertificateIncomplete(std::move(result));

  result.outcome = GridOutcome::Certificate;
  result.certificate = certificate();
  if (!verify_violation_certificate(result.certificate, d, b))
    throw SolveError("assembled certificate failed coverage verification");
  return result;
}

}  // namespace lpfix
