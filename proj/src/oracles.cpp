#include "lpfix/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lpfix/errors.hpp"
#include "lpfix/random.hpp"

namespace lpfix {

namespace {

void clamp_unit(Point& y) {
  for (auto& c : y) c = std::clamp(c, 0.0, 1.0);
}

Point apply_stage(const MapStage& stage, const Point& x) {
  if (const auto* c = std::get_if<ConstantMap>(&stage)) return c->value;
  const auto& aff = std::get<AffineClampedMap>(stage);
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::Map<const Eigen::VectorXd> xv(x.data(), n);
  Eigen::VectorXd y = aff.A * xv + aff.t;
  Point out(y.data(), y.data() + n);
  clamp_unit(out);
  return out;
}

void check_unit_point(const Point& x, const char* what) {
  for (double c : x) {
    if (!(c >= 0.0 && c <= 1.0)) throw ContractViolation(std::string(what) + " must lie in [0,1]^d");
  }
}

// Banach iteration from the cube centre until |f(x) - x|_p <= tol.
Point iterate_to_fixpoint(const Oracle& f, const PNorm& p, double tol) {
  Point x(f.dimension(), 0.5);
  for (int i = 0; i < 10'000'000; ++i) {
    Point fx = f.evaluate(x);
    if (distance(fx, x, p) <= tol) return x;
    x = std::move(fx);
  }
  throw NonContractionSuspected("fixpoint iteration did not converge");
}

bool is_diagonal(const Eigen::MatrixXd& A) {
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      if (i != j && A(i, j) != 0.0) return false;
  return true;
}

}  // namespace

ContractionInstance::ContractionInstance(std::size_t dim, std::vector<MapStage> stages,
                                         double lambda, PNorm p,
                                         std::optional<Point> known_fixpoint)
    : dim_(dim), stages_(std::move(stages)), lambda_(lambda), p_(p),
      fixpoint_(std::move(known_fixpoint)) {
  if (dim_ == 0) throw ContractViolation("dimension must be positive");
  if (!(lambda_ >= 0.0 && lambda_ < 1.0)) throw ContractViolation("lambda must lie in [0,1)");
  if (stages_.empty()) throw ContractViolation("instance needs at least one stage");
  for (const auto& s : stages_) {
    if (const auto* c = std::get_if<ConstantMap>(&s)) {
      if (c->value.size() != dim_) throw DimensionMismatch(dim_, c->value.size());
    } else {
      const auto& a = std::get<AffineClampedMap>(s);
      const auto n = static_cast<Eigen::Index>(dim_);
      if (a.A.rows() != n || a.A.cols() != n || a.t.size() != n)
        throw DimensionMismatch(dim_, static_cast<std::size_t>(a.A.rows()));
    }
  }
  if (fixpoint_ && fixpoint_->size() != dim_) throw DimensionMismatch(dim_, fixpoint_->size());
}

Point ContractionInstance::evaluate(std::span<const double> x) const {
  if (x.size() != dim_) throw DimensionMismatch(dim_, x.size());
  Point y(x.begin(), x.end());
  for (const auto& s : stages_) y = apply_stage(s, y);
  return y;
}

ContractionInstance ContractionInstance::with_declared_lambda(double lambda) const {
  if (lambda < lambda_) throw ContractViolation("declared lambda below the verified bound");
  return ContractionInstance(dim_, stages_, lambda, p_, fixpoint_);
}

double operator_contraction_bound(const Eigen::MatrixXd& A, const PNorm& p) {
  if (A.rows() != A.cols()) throw ContractViolation("operator bound needs a square matrix");
  if (A.size() == 0) return 0.0;
  if (is_diagonal(A)) return A.diagonal().cwiseAbs().maxCoeff();
  const double col = A.cwiseAbs().colwise().sum().maxCoeff();
  const double row = A.cwiseAbs().rowwise().sum().maxCoeff();
  switch (p.kind()) {
    case PNorm::Kind::One:
      return col;
    case PNorm::Kind::Infinity:
      return row;
    default: {
      const double inv = 1.0 / p.exponent();
      return std::pow(col, inv) * std::pow(row, 1.0 - inv);
    }
  }
}

ContractionInstance make_affine_clamped(const Eigen::MatrixXd& A, const Eigen::VectorXd& t,
                                        const PNorm& p) {
  const double bound = operator_contraction_bound(A, p);
  if (!(bound < 1.0)) {
    std::ostringstream os;
    os << "operator bound " << bound << " is not a contraction factor";
    throw ContractViolation(os.str());
  }
  const auto d = static_cast<std::size_t>(A.rows());
  if (static_cast<std::size_t>(t.size()) != d) throw DimensionMismatch(d, t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i)
    if (!std::isfinite(t[i])) throw ContractViolation("non-finite offset");

  ContractionInstance inst(d, {AffineClampedMap{A, t}}, bound, p, std::nullopt);

  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(A.rows(), A.cols());
  Eigen::VectorXd sol = (I - A).partialPivLu().solve(t);
  Point x(sol.data(), sol.data() + sol.size());
  const bool inside = std::all_of(x.begin(), x.end(), [](double c) { return c >= 0.0 && c <= 1.0; });
  if (!(inside && distance(inst.evaluate(x), x, p) <= 1e-14)) x = iterate_to_fixpoint(inst, p, 1e-14);
  return ContractionInstance(d, inst.stages(), bound, p, std::move(x));
}

ContractionInstance make_constant(const Point& value, const PNorm& p) {
  if (value.empty()) throw ContractViolation("constant map needs a point");
  check_unit_point(value, "constant value");
  return ContractionInstance(value.size(), {ConstantMap{value}}, 0.0, p, value);
}

ContractionInstance make_composite(const std::vector<ContractionInstance>& parts) {
  if (parts.empty()) throw ContractViolation("empty composition");
  const auto d = parts.front().dimension();
  const auto p = parts.front().norm_kind();
  std::vector<MapStage> stages;
  double lambda = 1.0;
  for (const auto& part : parts) {
    if (part.dimension() != d) throw DimensionMismatch(d, part.dimension());
    if (!(part.norm_kind() == p)) throw ContractViolation("composition mixes norms");
    stages.insert(stages.end(), part.stages().begin(), part.stages().end());
    lambda *= part.lambda();
  }
  ContractionInstance inst(d, std::move(stages), lambda, p, std::nullopt);
  Point x = iterate_to_fixpoint(inst, p, 1e-14);
  return ContractionInstance(d, inst.stages(), lambda, p, std::move(x));
}

ContractionInstance random_affine_instance(std::size_t dim, const PNorm& p, double lambda,
                                           std::uint64_t seed) {
  if (dim == 0) throw ContractViolation("dimension must be positive");
  if (!(lambda >= 0.0 && lambda < 1.0)) throw ContractViolation("lambda must lie in [0,1)");
  Rng rng(mix_seed(seed, 0xaff1));
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> interior(0.1, 0.9);

  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd A(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = gauss(rng);
  const double raw = operator_contraction_bound(A, p);
  A *= (raw > 0.0 ? lambda / raw : 0.0);
  // Rounding can push the rescaled bound a few ulps over lambda.
  while (operator_contraction_bound(A, p) > lambda) A *= (1.0 - 1e-15);

  Eigen::VectorXd xstar(n);
  for (Eigen::Index i = 0; i < n; ++i) xstar[i] = interior(rng);
  const Eigen::VectorXd t = xstar - A * xstar;

  auto inst = make_affine_clamped(A, t, p);
  return inst.with_declared_lambda(lambda);
}

GridOracle::GridOracle(std::shared_ptr<const Oracle> inner, int bits)
    : inner_(std::move(inner)), bits_(bits) {
  if (!inner_) throw ContractViolation("grid oracle needs an inner map");
  if (bits_ < 1 || bits_ > 52) throw ContractViolation("grid bits must lie in [1, 52]");
}

Point GridOracle::evaluate(std::span<const double> x) const {
  if (x.size() != dimension()) throw DimensionMismatch(dimension(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double c = x[i];
    if (!on_grid(std::span<const double>(&x[i], 1), bits_)) {
      std::ostringstream os;
      os.precision(17);
      os << "query coordinate " << i << " = " << c << " is not on G_" << bits_;
      throw OffGridQuery(os.str());
    }
  }
  return inner_->evaluate(x);
}

GridOracle restrict_to_grid(const ContractionInstance& inst, int bits) {
  return GridOracle(std::make_shared<ContractionInstance>(inst), bits);
}

namespace {

class AntipodalMap : public Oracle {
 public:
  explicit AntipodalMap(std::size_t dim) : dim_(dim) {}
  std::size_t dimension() const override { return dim_; }
  Point evaluate(std::span<const double> x) const override {
    Point y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > 0.5 ? 0.0 : 1.0;
    return y;
  }

 private:
  std::size_t dim_;
};

}  // namespace

GridOracle make_non_contraction(std::size_t dim, int bits) {
  if (dim == 0) throw ContractViolation("dimension must be positive");
  return GridOracle(std::make_shared<AntipodalMap>(dim), bits);
}

Point CountingOracle::query(std::span<const double> x) {
  Point key(x.begin(), x.end());
  if (auto it = index_.find(key); it != index_.end()) return log_[it->second].second;
  Point y = inner_->evaluate(x);
  index_.emplace(key, log_.size());
  log_.emplace_back(std::move(key), y);
  return y;
}

bool CountingOracle::seen(std::span<const double> x) const {
  return index_.count(Point(x.begin(), x.end())) > 0;
}

}  // namespace lpfix
