// Acceptance runner. Prints one PASS/FAIL line per criterion and exits
// non-zero if any selected criterion fails. Criteria can be selected by
// number on the command line (default: all eight).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lpfix/cli.hpp"
#include "lpfix/grid_solver.hpp"
#include "lpfix/solver.hpp"
#include "properties.hpp"

using namespace lpfix;
using lpfix::testing::TrialStats;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

void fail(Verdict& v, const std::string& why) {
  if (v.pass) v.detail = why;
  v.pass = false;
}

const std::vector<PNorm> kSweepNorms{PNorm::one(), PNorm::general(1.5), PNorm::two(),
                                     PNorm::general(3.0), PNorm::infinity()};

Verdict query_bound() {
  cli::BenchSpec spec;
  spec.d = {2, 3, 4};
  spec.p = kSweepNorms;
  spec.epsilon = {1e-2, 1e-3};
  spec.lambda = {0.5, 0.9};
  spec.instances = 5;
  spec.seed = 2024;
  const auto rows = cli::run_bench(spec);
  Verdict v;
  std::size_t worst_slack = ~std::size_t{0};
  for (const auto& r : rows) {
    std::ostringstream id;
    id << "d=" << r.d << " p=" << r.p.to_string() << " eps=" << r.epsilon << " lambda=" << r.lambda
       << " instance=" << r.instance;
    if (r.outcome != "FoundFixpoint") {
      fail(v, id.str() + ": " + r.outcome + " " + r.error);
      continue;
    }
    // The bound is recomputed here from the run's own minimum rho.
    const std::size_t bound = theoretical_query_bound(r.d, r.p, r.epsilon, r.lambda, r.min_rho);
    if (!(r.residual <= r.epsilon)) fail(v, id.str() + ": residual " + std::to_string(r.residual));
    if (r.queries_used > bound)
      fail(v, id.str() + ": " + std::to_string(r.queries_used) + " queries > bound " +
                  std::to_string(bound));
    else
      worst_slack = std::min(worst_slack, bound - r.queries_used);
  }
  if (v.pass) {
    std::ostringstream os;
    os << rows.size() << " solves, all residual <= eps and queries <= bound (min slack "
       << worst_slack << ")";
    v.detail = os.str();
  }
  return v;
}

Verdict banach_cap() {
  Verdict v;
  std::size_t runs = 0;
  auto run = [&](const ContractionInstance& f, std::span<const double> x0, std::size_t d,
                 double lambda, const std::string& id) {
    ++runs;
    try {
      const auto r = banach_iterate(f, x0, 0.1, lambda, f.norm_kind());
      if (r.queries > banach_query_cap(d, 0.1, lambda)) fail(v, id + ": over the cap");
      if (!(r.residual <= 0.1)) fail(v, id + ": residual above eps");
    } catch (const NonContractionSuspected& e) {
      fail(v, id + ": " + e.what());
    }
  };
  for (std::size_t d = 2; d <= 16; ++d)
    for (double lambda : {0.5, 0.9})
      for (const PNorm& p : kSweepNorms)
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
          const std::string id = "d=" + std::to_string(d) + " lambda=" + std::to_string(lambda) +
                                 " p=" + p.to_string() + " seed=" + std::to_string(seed);
          const auto f = random_affine_instance(d, p, lambda, mix_seed(seed, d));
          Rng rng(mix_seed(seed, 100 + d));
          std::uniform_real_distribution<double> u(0, 1);
          Point corner(d), random(d);
          for (std::size_t i = 0; i < d; ++i) {
            corner[i] = (i + seed) % 2 ? 1.0 : 0.0;
            random[i] = u(rng);
          }
          for (const Point& x0 : {Point(d, 0.5), corner, random}) run(f, x0, d, lambda, id);
          run(make_constant(random, p).with_declared_lambda(lambda), corner, d, lambda,
              id + " constant");
        }

  // Hand trace: f(x) = x / 2 from (1,1) in l1.
  const auto half = make_affine_clamped(0.5 * Eigen::MatrixXd::Identity(2, 2),
                                        Eigen::VectorXd::Zero(2), PNorm::one());
  const auto t = banach_iterate(half, Point{1, 1}, 0.1, 0.5, PNorm::one());
  if (t.queries != 5 || t.residuals != std::vector<double>{1, 0.5, 0.25, 0.125, 0.0625})
    fail(v, "hand trace took " + std::to_string(t.queries) + " queries");
  if (v.pass)
    v.detail = std::to_string(runs) + " runs within the cap; hand trace = 5 queries";
  return v;
}

Verdict ball_survival() {
  Verdict v;
  std::size_t cut_points = 0, solves = 0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const std::size_t d = 2 + k % 3;
    const PNorm& p = kSweepNorms[k % 5];
    const double eps = k % 2 ? 1e-3 : 1e-2;
    const double lambda = (k / 2) % 2 ? 0.9 : 0.5;
    const auto f = random_affine_instance(d, p, lambda, mix_seed(77, k));
    const Point xs = *f.known_fixpoint();
    const double r = survival_radius(eps, lambda);
    std::ostringstream id;
    id << "solve " << k << " (d=" << d << " p=" << p.to_string() << ")";

    SolveParams sp;
    sp.dim = d;
    sp.p = p;
    sp.epsilon = eps;
    sp.lambda = lambda;
    sp.seed = mix_seed(78, k);
    sp.observer = [&](const IterationEvent& ev) {
      if (!(ev.record.residual > eps)) return;
      if (bisector_contains(ev.record.query, ev.record.response, xs, p))
        fail(v, id.str() + ": x* discarded");
      for (std::size_t i = 0; i < ev.killed.size(); ++i) {
        ++cut_points;
        if (distance(ev.killed[i], xs, p) <= r)
          fail(v, id.str() + ": point within r discarded at iteration " +
                      std::to_string(ev.record.iter));
      }
    };
    try {
      const auto rep = solve_continuous(f, sp);
      ++solves;
      if (rep.outcome != Outcome::FoundFixpoint) fail(v, id.str() + ": budget exhausted");
    } catch (const std::exception& e) {
      fail(v, id.str() + ": " + e.what());
    }
  }
  if (v.pass)
    v.detail = std::to_string(solves) + " solves, " + std::to_string(cut_points) +
               " discarded points, none within r of x*";
  return v;
}

std::string stats_line(const std::string& name, const TrialStats& s) {
  std::ostringstream os;
  os << name << " " << s.trials << " trials";
  if (s.skipped) os << " (" << s.skipped << " ties skipped)";
  if (s.violations) os << ", " << s.violations << " violations: " << s.first_violation;
  return os.str();
}

Verdict collect(const std::vector<std::pair<std::string, TrialStats>>& parts, std::size_t wanted) {
  Verdict v;
  std::string all;
  for (const auto& [name, s] : parts) {
    if (!s.ok(wanted)) fail(v, stats_line(name, s));
    all += (all.empty() ? "" : "; ") + stats_line(name, s);
  }
  if (v.pass) v.detail = all;
  return v;
}

Verdict oracle_equivalence() {
  using K = PNorm::Kind;
  return collect({{"p=1", testing::check_oracle_equivalence(K::One, 10000, 1)},
                  {"p=2", testing::check_oracle_equivalence(K::Two, 10000, 2)},
                  {"p=inf", testing::check_oracle_equivalence(K::Infinity, 10000, 3)},
                  {"general p", testing::check_oracle_equivalence(K::General, 10000, 4)}},
                 10000);
}

Verdict geometry_suite() {
  return collect({{"inner cone", testing::check_inner_cone(2000, 11)},
                  {"outer cone", testing::check_outer_cone(2000, 12)},
                  {"orthant", testing::check_orthant_monotonicity(2000, 13)},
                  {"ray", testing::check_ray_invariance(2000, 14)},
                  {"axis", testing::check_axis_collapse(2000, 15)},
                  {"pull-to-zero", testing::check_pull_to_zero(2000, 16)}},
                 1000);
}

Verdict tightness() {
  Verdict v;
  std::ostringstream os;
  for (std::size_t d : {2, 3})
    for (double pe : {1.5, 3.0}) {
      const auto r = testing::tightness_ceiling(d, PNorm::general(pe), 1000, 31 + d);
      const double ceiling = 1.1 / (d + 1.0);
      os << "d=" << d << " p=" << pe << " best " << r.best_rho << " <= " << ceiling << "; ";
      if (r.candidates < 1000 || r.best_rho > ceiling) {
        std::ostringstream f;
        f << "d=" << d << " p=" << pe << ": rho " << r.best_rho << " > " << ceiling;
        fail(v, f.str());
      }
    }
  if (v.pass) {
    v.detail = os.str();
    v.detail.resize(v.detail.size() - 2);
  }
  return v;
}

Verdict grid_totality() {
  Verdict v;
  std::size_t solved = 0, queries = 0;
  auto solve = [&](const ContractionInstance& f, std::size_t d, double eps, double lambda,
                   std::uint64_t seed) {
    GridSolveParams gp;
    gp.dim = d;
    gp.bits = min_grid_resolution(d, eps, lambda);
    gp.epsilon = eps;
    gp.lambda = lambda;
    gp.seed = seed;
    const std::string id = "d=" + std::to_string(d) + " b=" + std::to_string(gp.bits) +
                           " seed=" + std::to_string(seed);
    try {
      const auto res = solve_grid_l1(restrict_to_grid(f, gp.bits), gp);
      if (res.outcome != GridOutcome::FoundFixpoint) fail(v, id + ": no fixpoint");
      for (const auto& rec : res.trace)
        if (!on_grid(rec.query, gp.bits)) fail(v, id + ": off-grid query");
      if (!(res.residual <= eps)) fail(v, id + ": residual above eps");
      ++solved;
      queries += res.queries_used;
    } catch (const std::exception& e) {
      fail(v, id + ": " + e.what());
    }
  };
  const PNorm l1 = PNorm::one();
  for (std::uint64_t s = 0; s < 3; ++s) {
    solve(random_affine_instance(2, l1, 0.5, 500 + s), 2, 0.01, 0.5, s);
    solve(random_affine_instance(3, l1, 0.2, 600 + s), 3, 0.1, 0.2, s);
    solve(random_affine_instance(1, l1, 0.9, 700 + s), 1, 0.01, 0.9, s);
  }
  solve(make_constant(Point{0.3, 0.7}, l1), 2, 0.01, 0.0, 9);

  GridSolveParams demo;
  demo.dim = 1;
  demo.bits = 1;
  demo.epsilon = 0.1;
  demo.lambda = 0.5;
  demo.require_resolution = false;
  std::size_t cert_size = 0;
  try {
    const auto res = solve_grid_l1(make_non_contraction(1, 1), demo);
    cert_size = res.certificate.entries.size();
    if (res.outcome != GridOutcome::Certificate) fail(v, "demo map: no certificate");
    else if (!verify_violation_certificate(res.certificate, 1, 1)) fail(v, "demo certificate rejected");
  } catch (const std::exception& e) {
    fail(v, std::string("demo map: ") + e.what());
  }

  // {(0, f(0) = 1), (1, f(1) = 0)} covers {0, 1/2, 1}; either pair alone does not.
  ViolationCertificate hand{1, 1, {{GridPoint{{0}, 1}, Point{1.0}}, {GridPoint{{2}, 1}, Point{0.0}}}};
  if (!verify_violation_certificate(hand, 1, 1)) fail(v, "3-point certificate rejected");
  for (std::size_t drop = 0; drop < 2; ++drop) {
    ViolationCertificate part = hand;
    part.entries.erase(part.entries.begin() + static_cast<long>(drop));
    if (verify_violation_certificate(part, 1, 1)) fail(v, "single pair accepted as a cover");
  }
  if (v.pass)
    v.detail = std::to_string(solved) + " grid solves on G^d_b (" + std::to_string(queries) +
               " on-grid queries); demo certificate of " + std::to_string(cert_size) +
               " pairs verified; 3-point cover verified";
  return v;
}

Verdict rounding_transfer() {
  return collect({{"rounding", testing::check_rounding_transfer(1000, 41)}}, 1000);
}

struct Criterion {
  int id;
  const char* name;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "query-bound reproduction", query_bound},
      {2, "Banach cap", banach_cap},
      {3, "ball survival", ball_survival},
      {4, "membership oracle equivalence", oracle_equivalence},
      {5, "geometry property suite", geometry_suite},
      {6, "tightness ceiling", tightness},
      {7, "grid totality and certificates", grid_totality},
      {8, "rounding transfer", rounding_transfer},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %d %s (%.1fs): %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                v.detail.c_str());
    std::fflush(stdout);
    failures += !v.pass;
  }
  return failures ? 1 : 0;
}
