#pragma once

// Command-line front end: instance loading, trace/summary serialisation and
// the solve / grid-solve / bench / verify-cert commands.

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpfix/grid_solver.hpp"
#include "lpfix/oracles.hpp"
#include "lpfix/solver.hpp"

namespace lpfix::cli {

enum ExitCode : int { kFixpoint = 0, kError = 1, kCertificate = 2, kBudget = 3 };

// ---------------------------------------------------------------------------
// Instances

enum class MapKind { Affine, Constant, NonContractionDemo };

/// Parsed instance file:
///   {d, p, lambda, epsilon,
///    map: {type: "affine", A: [...row-major...], t: [...]}
///       | {type: "constant", c: [...]}
///       | {type: "non_contraction_demo", b}}
struct InstanceSpec {
  std::size_t d = 2;
  PNorm p = PNorm::two();
  double lambda = 0.5;
  double epsilon = 1e-2;
  MapKind kind = MapKind::Affine;
  std::vector<double> A;
  std::vector<double> t;
  std::vector<double> c;
  int b = 1;
};

/// Throws ContractViolation with a readable message on schema violations.
InstanceSpec parse_instance(const nlohmann::json& j);
nlohmann::json instance_to_json(const InstanceSpec& spec);

/// Contraction instance for affine/constant maps, with lambda as declared.
ContractionInstance build_contraction(const InstanceSpec& spec);

/// Oracle for the continuous solver (non-contraction demos become grid
/// oracles and will reject off-grid queries).
std::shared_ptr<const Oracle> build_oracle(const InstanceSpec& spec);

/// Grid oracle on G^d_bits.
std::shared_ptr<const Oracle> build_grid_oracle(const InstanceSpec& spec, int bits);

// ---------------------------------------------------------------------------
// Reports

/// Columns: iter, q_1..q_d, fx_1..fx_d, residual, alive_fraction,
/// alive_fraction_after, achieved_rho, discard_fraction, cum_queries.
/// Reals are written with 17 significant digits.
void write_trace_csv(std::ostream& os, const std::vector<IterationRecord>& trace, std::size_t d);
std::vector<IterationRecord> read_trace_csv(std::istream& is);

const char* outcome_name(Outcome o);
Outcome parse_outcome(const std::string& s);

nlohmann::json report_to_json(const SolveReport& report);
/// Restores every summary field (the trace travels separately as CSV).
SolveReport report_from_json(const nlohmann::json& j);

nlohmann::json grid_result_to_json(const GridSolveResult& result);

// ---------------------------------------------------------------------------
// Bench

struct BenchSpec {
  std::vector<std::size_t> d{2, 3};
  std::vector<PNorm> p{PNorm::one(), PNorm::two(), PNorm::general(3.0), PNorm::infinity()};
  std::vector<double> epsilon{1e-2, 1e-3};
  std::vector<double> lambda{0.5, 0.9};
  std::size_t instances = 1;
  std::uint64_t seed = 0;
  std::size_t cloud = std::size_t{1} << 17;
  std::size_t dirs = 0;
  double rho_min = 0;
  std::size_t max_queries = 0;
  /// 0 selects the hardware concurrency.
  std::size_t threads = 0;
};

struct BenchRow {
  std::size_t d = 0;
  PNorm p = PNorm::two();
  double epsilon = 0;
  double lambda = 0;
  std::size_t instance = 0;
  std::uint64_t seed = 0;
  std::string outcome;
  std::size_t queries_used = 0;
  std::size_t bound = 0;
  std::size_t banach_queries = 0;
  double residual = 0;
  double min_rho = 0;
  std::string error;
};

/// Seed of one (cell, instance) pair.
std::uint64_t bench_seed(const BenchSpec& spec, std::size_t cell, std::size_t instance);

/// Rows in cell order d, p, epsilon, lambda, instance regardless of the
/// thread count.
std::vector<BenchRow> run_bench(const BenchSpec& spec);

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows);

// ---------------------------------------------------------------------------
// Entry point

/// Parses argv and dispatches to a subcommand. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lpfix::cli
