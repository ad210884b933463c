#include <doctest.h>

#include <random>
#include <string>

#include "lpfix/grid.hpp"
#include "lpfix/errors.hpp"
#include "lpfix/oracles.hpp"
#include "lpfix/random.hpp"

using namespace lpfix;

namespace {

const PNorm kNorms[] = {PNorm::one(), PNorm::two(), PNorm::infinity(), PNorm::general(1.5),
                        PNorm::general(3.0)};

Point random_unit_point(std::size_t d, Rng& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  Point x(d);
  for (auto& c : x) c = u(rng);
  return x;
}

// Largest excess of |f(x) - f(y)| over lambda |x - y| on random pairs.
double contraction_excess(const ContractionInstance& f, std::size_t pairs, std::uint64_t seed) {
  Rng rng(seed);
  double worst = -1;
  const PNorm& p = f.norm_kind();
  for (std::size_t k = 0; k < pairs; ++k) {
    const Point x = random_unit_point(f.dimension(), rng);
    const Point y = random_unit_point(f.dimension(), rng);
    const double lhs = distance(f.evaluate(x), f.evaluate(y), p);
    worst = std::max(worst, lhs - f.lambda() * distance(x, y, p));
  }
  return worst;
}

}  // namespace

TEST_CASE("operator bound examples") {
  Eigen::MatrixXd D(2, 2);
  D << 0.5, 0, 0, 0.9;
  for (const PNorm& p : kNorms) CHECK(operator_contraction_bound(D, p) == 0.9);
  Eigen::MatrixXd A(2, 2);
  A << 0.5, 0.2, 0.3, 0.1;
  CHECK(operator_contraction_bound(A, PNorm::one()) == doctest::Approx(0.8));
  CHECK(operator_contraction_bound(A, PNorm::infinity()) == doctest::Approx(0.7));
  CHECK(operator_contraction_bound(A, PNorm::two()) == doctest::Approx(std::sqrt(0.8 * 0.7)));
  CHECK(operator_contraction_bound(A, PNorm::general(4.0)) ==
        doctest::Approx(std::pow(0.8, 0.25) * std::pow(0.7, 0.75)));
  CHECK_THROWS_AS(operator_contraction_bound(Eigen::MatrixXd(2, 3), PNorm::two()),
                  ContractViolation);
}

TEST_CASE("interpolated operator bound dominates the true l2 norm") {
  Rng rng(3);
  std::normal_distribution<double> g;
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + t % 4;
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = g(rng);
    const double spectral = Eigen::JacobiSVD<Eigen::MatrixXd>(A).singularValues()(0);
    CHECK(operator_contraction_bound(A, PNorm::two()) >= spectral * (1 - 1e-12));
  }
}

TEST_CASE("affine instance examples") {
  SUBCASE("half map") {
    const auto f = make_affine_clamped(0.5 * Eigen::MatrixXd::Identity(2, 2),
                                       Eigen::VectorXd::Constant(2, 0.25), PNorm::one());
    CHECK(f.lambda() == 0.5);
    REQUIRE(f.known_fixpoint());
    CHECK((*f.known_fixpoint())[0] == doctest::Approx(0.5));
    CHECK((*f.known_fixpoint())[1] == doctest::Approx(0.5));
  }
  SUBCASE("zero matrix is a constant map") {
    const auto f = make_affine_clamped(Eigen::MatrixXd::Zero(2, 2), Eigen::Vector2d(0.7, 0.3),
                                       PNorm::two());
    CHECK(f.lambda() == 0.0);
    CHECK(*f.known_fixpoint() == Point{0.7, 0.3});
    CHECK(f.evaluate(Point{0.1, 0.9}) == Point{0.7, 0.3});
  }
  SUBCASE("diagonal system") {
    Eigen::MatrixXd A(2, 2);
    A << 0.9, 0, 0, 0.5;
    const auto f = make_affine_clamped(A, Eigen::Vector2d(0.05, 0.3), PNorm::two());
    CHECK(f.lambda() == 0.9);
    CHECK((*f.known_fixpoint())[0] == doctest::Approx(0.5));
    CHECK((*f.known_fixpoint())[1] == doctest::Approx(0.6));
  }
  SUBCASE("fixpoint outside the unclamped solution") {
    // (I - A) x = t solves to x = 2, so the clamped map settles on the face.
    const auto f = make_affine_clamped(0.5 * Eigen::MatrixXd::Identity(1, 1),
                                       Eigen::VectorXd::Constant(1, 1.0), PNorm::one());
    CHECK((*f.known_fixpoint())[0] == 1.0);
  }
  Eigen::MatrixXd big(2, 2);
  big << 0.6, 0.0, 0.5, 0.1;
  CHECK_THROWS_AS(make_affine_clamped(big, Eigen::Vector2d(0, 0), PNorm::one()), ContractViolation);
}

TEST_CASE("known fixpoints have negligible residual") {
  for (const PNorm& p : kNorms) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto f = random_affine_instance(2 + seed % 4, p, seed % 2 ? 0.9 : 0.5, seed);
      REQUIRE(f.known_fixpoint());
      const Point& x = *f.known_fixpoint();
      CHECK(distance(f.evaluate(x), x, p) <= 1e-12);
    }
  }
}

TEST_CASE("random affine instances declare the requested factor") {
  for (const PNorm& p : kNorms) {
    const auto f = random_affine_instance(3, p, 0.9, 5);
    CHECK(f.lambda() == 0.9);
    const auto& stage = std::get<AffineClampedMap>(f.stages().front());
    CHECK(operator_contraction_bound(stage.A, p) <= 0.9);
    CHECK(operator_contraction_bound(stage.A, p) == doctest::Approx(0.9).epsilon(1e-12));
    for (double c : *f.known_fixpoint()) {
      CHECK(c >= 0.1);
      CHECK(c <= 0.9);
    }
  }
  CHECK(random_affine_instance(3, PNorm::two(), 0.5, 1).evaluate(Point{0.1, 0.2, 0.3}) ==
        random_affine_instance(3, PNorm::two(), 0.5, 1).evaluate(Point{0.1, 0.2, 0.3}));
}

TEST_CASE("constructed instances are contractions") {
  std::vector<ContractionInstance> instances;
  for (const PNorm& p : kNorms) {
    instances.push_back(random_affine_instance(3, p, 0.9, 11));
    instances.push_back(random_affine_instance(4, p, 0.5, 12));
    instances.push_back(make_constant(Point{0.2, 0.4, 0.6}, p));
    instances.push_back(make_composite({random_affine_instance(2, p, 0.8, 13),
                                        random_affine_instance(2, p, 0.7, 14)}));
  }
  for (const auto& f : instances) {
    CAPTURE(f.norm_kind().to_string());
    CHECK(contraction_excess(f, 10000, 99) <= 1e-12);
  }
}

TEST_CASE("coordinate clamping is non-expansive") {
  // clamp(2x - 1/2) against the unclamped difference 2|x - y|.
  const std::size_t d = 3;
  const ContractionInstance stretch(
      d, {AffineClampedMap{2.0 * Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Constant(3, -0.5)}},
      0.5, PNorm::two(), std::nullopt);
  Rng rng(4);
  for (const PNorm& p : kNorms) {
    for (int k = 0; k < 10000; ++k) {
      const Point x = random_unit_point(d, rng);
      const Point y = random_unit_point(d, rng);
      CHECK(distance(stretch.evaluate(x), stretch.evaluate(y), p) <=
            2.0 * distance(x, y, p) * (1 + 1e-15));
    }
  }
}

TEST_CASE("constant and composite instances") {
  const auto c = make_constant(Point{0.7, 0.3}, PNorm::two());
  CHECK(c.lambda() == 0.0);
  CHECK(*c.known_fixpoint() == Point{0.7, 0.3});
  CHECK_THROWS_AS(make_constant(Point{1.5, 0.3}, PNorm::two()), ContractViolation);

  const auto a = make_affine_clamped(0.5 * Eigen::MatrixXd::Identity(2, 2),
                                     Eigen::VectorXd::Constant(2, 0.25), PNorm::two());
  const auto comp = make_composite({a, a});
  CHECK(comp.lambda() == 0.25);
  CHECK(comp.evaluate(Point{0, 0}) == Point{0.375, 0.375});
  CHECK((*comp.known_fixpoint())[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(make_composite({a, make_constant(Point{0.5, 0.5}, PNorm::one())}),
                  ContractViolation);
}

TEST_CASE("declared lambda can only grow") {
  const auto f = random_affine_instance(2, PNorm::two(), 0.5, 2);
  CHECK(f.with_declared_lambda(0.7).lambda() == 0.7);
  CHECK_THROWS_AS(f.with_declared_lambda(0.4), ContractViolation);
  CHECK_THROWS_AS(f.with_declared_lambda(1.0), ContractViolation);
}

TEST_CASE("grid restriction") {
  const auto f = random_affine_instance(2, PNorm::one(), 0.5, 3);
  const GridOracle g = restrict_to_grid(f, 4);
  CHECK(g.bits() == 4);
  CHECK(g.evaluate(Point{0.25, 0.8125}) == f.evaluate(Point{0.25, 0.8125}));
  try {
    g.evaluate(Point{0.5, 1.0 / 3.0});
    FAIL("expected OffGridQuery");
  } catch (const OffGridQuery& e) {
    CHECK(std::string(e.what()).find("coordinate 1") != std::string::npos);
  }
  CHECK_THROWS_AS(g.evaluate(Point{1.0625, 0.0}), OffGridQuery);
  const GridOracle gc = restrict_to_grid(make_constant(Point{0.3, 0.3}, PNorm::one()), 2);
  CHECK(gc.evaluate(Point{0.25, 0.75}) == gc.evaluate(Point{1, 0}));
  CHECK_THROWS_AS(restrict_to_grid(f, 0), ContractViolation);
}

TEST_CASE("non-contraction demo map") {
  const GridOracle f = make_non_contraction(1, 1);
  CHECK(f.evaluate(Point{0}) == Point{1});
  CHECK(f.evaluate(Point{1}) == Point{0});
  CHECK(f.evaluate(Point{0.5}) == Point{1});
  for (double x : {0.0, 0.5, 1.0}) {
    CHECK(distance(f.evaluate(Point{x}), Point{x}, PNorm::one()) > 0.1);
  }
  // |f(0) - f(1)| = |0 - 1| rules out every lambda < 1.
  CHECK(distance(f.evaluate(Point{0}), f.evaluate(Point{1}), PNorm::one()) == 1.0);
  // A restricted contraction cannot reproduce it on all three points.
  const GridOracle g = restrict_to_grid(random_affine_instance(1, PNorm::one(), 0.9, 1), 1);
  bool same = true;
  for (double x : {0.0, 0.5, 1.0}) same = same && g.evaluate(Point{x}) == f.evaluate(Point{x});
  CHECK_FALSE(same);
}

TEST_CASE("counting oracle") {
  const auto f = random_affine_instance(2, PNorm::two(), 0.5, 8);
  const std::vector<Point> queries{{0.1, 0.2}, {0.3, 0.4}, {0.1, 0.2}, {0.9, 0.9}};
  CountingOracle a(f), b(f);
  for (const auto& q : queries) {
    const Point ra = a.query(q);
    const Point rb = b.query(q);
    CHECK(ra == rb);
    CHECK(ra == f.evaluate(q));
  }
  CHECK(a.count() == 3);
  CHECK(a.log().size() == a.count());
  CHECK(a.log() == b.log());
  CHECK(a.seen(Point{0.3, 0.4}));
  CHECK_FALSE(a.seen(Point{0.3, 0.5}));
  CHECK(a.dimension() == 2);
}
