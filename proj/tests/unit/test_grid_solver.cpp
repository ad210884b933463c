#include <doctest.h>

#include "lpfix/grid_solver.hpp"

using namespace lpfix;

namespace {

CertificateEntry entry(std::int64_t k, int bits, double fx) {
  return CertificateEntry{GridPoint{{k}, bits}, Point{fx}};
}

}  // namespace

TEST_CASE("grid resolutions") {
  CHECK(min_grid_resolution(2, 0.01, 0.5) == 11);
  CHECK(min_grid_resolution(1, 1.0, 0.0) == 1);
  CHECK(min_grid_resolution(4, 1e-3, 0.9) == 18);
  CHECK(existence_resolution(2, 0.01, 0.5) == 8);
  CHECK(existence_resolution(1, 1.0, 0.0) == 1);
  for (std::size_t d = 1; d <= 6; ++d)
    for (double eps : {0.3, 0.1, 1e-2, 1e-3})
      for (double lambda : {0.0, 0.2, 0.5, 0.9}) {
        CHECK(existence_resolution(d, eps, lambda) <= min_grid_resolution(d, eps, lambda));
        CHECK(existence_resolution(d, eps, lambda) >= 1);
      }
  CHECK_THROWS_AS(min_grid_resolution(2, 0.0, 0.5), ContractViolation);
  CHECK_THROWS_AS(min_grid_resolution(2, 0.1, 1.0), ContractViolation);
}

TEST_CASE("grid enumeration") {
  const PointSet g = enumerate_grid(GridSpec{2, 1});
  REQUIRE(g.size() == 9);
  CHECK(g[0][0] == 0.0);
  CHECK(g[0][1] == 0.0);
  CHECK(g[1][1] == 0.5);
  CHECK(g[3][0] == 0.5);
  CHECK(g[3][1] == 0.0);
  CHECK(g[8][0] == 1.0);
  CHECK(g[8][1] == 1.0);
  CHECK(enumerate_grid(GridSpec{3, 3}).size() == 729);
  CHECK(GridSpec{2, 11}.point_count() == 2049.0 * 2049.0);
  CHECK_THROWS_AS(enumerate_grid(GridSpec{3, 9}), GridTooLarge);
  CHECK_THROWS_AS(enumerate_grid(GridSpec{2, 0}), ContractViolation);
}

TEST_CASE("certificate verification") {
  const ViolationCertificate hand{1, 1, {entry(0, 1, 1.0), entry(2, 1, 0.0)}};
  CHECK(verify_violation_certificate(hand, 1, 1));
  ViolationCertificate missing = hand;
  missing.entries.pop_back();
  CHECK_FALSE(verify_violation_certificate(missing, 1, 1));
  CHECK_FALSE(verify_violation_certificate(ViolationCertificate{1, 1, {}}, 1, 1));
  // 1/4 and 3/4 fall on the near sides.
  CHECK(verify_violation_certificate(hand, 1, 2));
  const ViolationCertificate one_sided{1, 2, {entry(1, 2, 0.0)}};
  CHECK_FALSE(verify_violation_certificate(one_sided, 1, 2));
  CHECK_THROWS_AS(verify_violation_certificate(hand, 2, 1), DimensionMismatch);
}

TEST_CASE("certificate JSON round trip") {
  const ViolationCertificate cert{2, 3, {{GridPoint{{1, 7}, 3}, Point{0.25, 0.5}},
                                         {GridPoint{{8, 0}, 3}, Point{0.0, 1.0}}}};
  const auto j = certificate_to_json(cert);
  CHECK(j.size() == 2);
  CHECK(j[0]["x"] == nlohmann::json::array({1, 7}));
  CHECK(j[0]["b"] == 3);
  const auto back = certificate_from_json(j);
  CHECK(back.dim == 2);
  CHECK(back.bits == 3);
  REQUIRE(back.entries.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back.entries[i].x == cert.entries[i].x);
    CHECK(back.entries[i].fx == cert.entries[i].fx);
  }
  CHECK_THROWS_AS(certificate_from_json(nlohmann::json::object()), ContractViolation);
  auto off = j;
  off[0]["x"] = nlohmann::json::array({9, 0});
  CHECK_THROWS_AS(certificate_from_json(off), ContractViolation);
}

TEST_CASE("grid solve on G^2_11") {
  const auto f = random_affine_instance(2, PNorm::one(), 0.5, 1);
  GridSolveParams gp;
  gp.dim = 2;
  gp.bits = 11;
  gp.epsilon = 0.01;
  gp.lambda = 0.5;
  gp.seed = 1;
  const GridOracle g = restrict_to_grid(f, 11);
  const auto res = solve_grid_l1(g, gp);
  REQUIRE(res.outcome == GridOutcome::FoundFixpoint);
  CHECK(res.residual <= 0.01);
  CHECK(res.x.bits == 11);
  CHECK(on_grid(res.x.to_point(), 11));
  CHECK(residual(f, res.x.to_point(), PNorm::one()) <= 0.01);
  CHECK(res.queries_used == res.trace.size());
  for (const auto& rec : res.trace) CHECK(on_grid(rec.query, 11));
}

TEST_CASE("grid fixpoint on the grid is found by the first hit") {
  const auto f = make_constant(Point{0.5, 0.5}, PNorm::one());
  GridSolveParams gp;
  gp.dim = 2;
  gp.bits = min_grid_resolution(2, 0.1, 0.0);
  gp.epsilon = 0.1;
  gp.lambda = 0.0;
  const auto res = solve_grid_l1(restrict_to_grid(f, gp.bits), gp);
  CHECK(res.outcome == GridOutcome::FoundFixpoint);
  CHECK(res.residual == 0.0);
  CHECK(res.queries_used == 1);
}

TEST_CASE("non-contraction demo yields a verified certificate") {
  GridSolveParams gp;
  gp.dim = 1;
  gp.bits = 1;
  gp.epsilon = 0.1;
  gp.lambda = 0.5;
  gp.require_resolution = false;
  const auto res = solve_grid_l1(make_non_contraction(1, 1), gp);
  REQUIRE(res.outcome == GridOutcome::Certificate);
  CHECK(res.certificate.entries.size() == 2);
  CHECK(verify_violation_certificate(res.certificate, 1, 1));
  CHECK(res.certificate.entries[0].x == GridPoint{{1}, 1});
  CHECK(res.certificate.entries[0].fx == Point{1.0});
  CHECK(res.certificate.entries[1].x == GridPoint{{2}, 1});
  CHECK(res.certificate.entries[1].fx == Point{0.0});
  for (const auto& rec : res.trace) CHECK(rec.residual > 0.1);

  gp.require_resolution = true;
  CHECK_THROWS_AS(solve_grid_l1(make_non_contraction(1, 1), gp), ResolutionTooCoarse);
}

TEST_CASE("grid solve argument checks") {
  const GridOracle g = restrict_to_grid(random_affine_instance(2, PNorm::one(), 0.5, 2), 11);
  GridSolveParams gp;
  gp.dim = 3;
  gp.bits = 11;
  CHECK_THROWS_AS(solve_grid_l1(g, gp), DimensionMismatch);
  gp.dim = 2;
  gp.bits = 5;
  CHECK_THROWS_AS(solve_grid_l1(g, gp), ResolutionTooCoarse);
  gp.bits = 11;
  gp.rho_min = 0.5;
  CHECK_THROWS_AS(solve_grid_l1(g, gp), ContractViolation);
}

TEST_CASE("budget exhaustion without coverage") {
  GridSolveParams gp;
  gp.dim = 2;
  gp.bits = 3;
  gp.epsilon = 0.01;
  gp.lambda = 0.5;
  gp.max_queries = 1;
  gp.require_resolution = false;
  try {
    solve_grid_l1(restrict_to_grid(random_affine_instance(2, PNorm::one(), 0.5, 5), 3), gp);
    FAIL("expected CertificateIncomplete");
  } catch (const CertificateIncomplete& e) {
    CHECK(e.partial().queries_used == 1);
    CHECK(e.partial().trace.size() == 1);
  }
}

TEST_CASE("grid points near the fixpoint survive") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const double eps = 0.05, lambda = 0.5;
    const auto f = random_affine_instance(2, PNorm::one(), lambda, 30 + seed);
    const Point xs = *f.known_fixpoint();
    GridSolveParams gp;
    gp.dim = 2;
    gp.bits = min_grid_resolution(2, eps, lambda);
    gp.epsilon = eps;
    gp.lambda = lambda;
    gp.seed = seed;
    std::size_t kills = 0;
    const double r = survival_radius(eps, lambda);
    gp.observer = [&](const IterationEvent& ev) {
      for (std::size_t i = 0; i < ev.killed.size(); ++i)
        if (distance(ev.killed[i], xs, PNorm::one()) <= r) ++kills;
    };
    const auto res = solve_grid_l1(restrict_to_grid(f, gp.bits), gp);
    CHECK(res.outcome == GridOutcome::FoundFixpoint);
    CHECK(kills == 0);
  }
}
