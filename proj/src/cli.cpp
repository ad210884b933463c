#include "lpfix/cli.hpp"

#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "lpfix/random.hpp"

namespace lpfix::cli {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Instances

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> real_array(const json& j, const char* key) {
  const auto& a = j.at(key);
  if (!a.is_array()) throw ContractViolation(std::string("'") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : a) {
    if (!v.is_number()) throw ContractViolation(std::string("'") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

PNorm parse_p(const json& j) {
  if (j.is_string()) return PNorm::parse(j.get<std::string>());
  if (j.is_number()) return PNorm::parse(fmt17(j.get<double>()));
  throw ContractViolation("'p' must be a string");
}

}  // namespace

InstanceSpec parse_instance(const json& j) {
  if (!j.is_object()) throw ContractViolation("instance must be a JSON object");
  InstanceSpec s;
  try {
    const auto d = j.at("d").get<std::int64_t>();
    if (d < 1) throw ContractViolation("'d' must be positive");
    s.d = static_cast<std::size_t>(d);
    s.p = parse_p(j.at("p"));
    s.lambda = j.at("lambda").get<double>();
    s.epsilon = j.at("epsilon").get<double>();
    const auto& m = j.at("map");
    const auto type = m.at("type").get<std::string>();
    if (type == "affine") {
      s.kind = MapKind::Affine;
      s.A = real_array(m, "A");
      s.t = real_array(m, "t");
      if (s.A.size() != s.d * s.d) throw ContractViolation("'A' must have d*d entries");
      if (s.t.size() != s.d) throw ContractViolation("'t' must have d entries");
    } else if (type == "constant") {
      s.kind = MapKind::Constant;
      s.c = real_array(m, "c");
      if (s.c.size() != s.d) throw ContractViolation("'c' must have d entries");
    } else if (type == "non_contraction_demo") {
      s.kind = MapKind::NonContractionDemo;
      s.b = m.at("b").get<int>();
      if (s.b < 1) throw ContractViolation("'b' must be at least 1");
    } else {
      throw ContractViolation("unknown map type '" + type + "'");
    }
  } catch (const json::exception& e) {
    throw ContractViolation(std::string("instance schema: ") + e.what());
  }
  if (!(s.lambda >= 0.0 && s.lambda < 1.0)) throw ContractViolation("'lambda' must lie in [0,1)");
  if (!(s.epsilon > 0.0)) throw ContractViolation("'epsilon' must be positive");
  return s;
}

json instance_to_json(const InstanceSpec& s) {
  json m;
  switch (s.kind) {
    case MapKind::Affine:
      m = {{"type", "affine"}, {"A", s.A}, {"t", s.t}};
      break;
    case MapKind::Constant:
      m = {{"type", "constant"}, {"c", s.c}};
      break;
    case MapKind::NonContractionDemo:
      m = {{"type", "non_contraction_demo"}, {"b", s.b}};
      break;
  }
  return {{"d", s.d}, {"p", s.p.to_string()}, {"lambda", s.lambda}, {"epsilon", s.epsilon}, {"map", m}};
}

ContractionInstance build_contraction(const InstanceSpec& s) {
  switch (s.kind) {
    case MapKind::Affine: {
      const auto n = static_cast<Eigen::Index>(s.d);
      Eigen::MatrixXd A(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k) A(i, k) = s.A[static_cast<std::size_t>(i * n + k)];
      Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(s.t.data(), n);
      return make_affine_clamped(A, t, s.p).with_declared_lambda(s.lambda);
    }
    case MapKind::Constant:
      return make_constant(s.c, s.p).with_declared_lambda(s.lambda);
    case MapKind::NonContractionDemo:
      break;
  }
  throw ContractViolation("a non_contraction_demo map is not a contraction instance");
}

std::shared_ptr<const Oracle> build_oracle(const InstanceSpec& s) {
  if (s.kind == MapKind::NonContractionDemo)
    return std::make_shared<GridOracle>(make_non_contraction(s.d, s.b));
  return std::make_shared<ContractionInstance>(build_contraction(s));
}

std::shared_ptr<const Oracle> build_grid_oracle(const InstanceSpec& s, int bits) {
  if (s.kind == MapKind::NonContractionDemo)
    return std::make_shared<GridOracle>(make_non_contraction(s.d, bits));
  return std::make_shared<GridOracle>(restrict_to_grid(build_contraction(s), bits));
}

// ---------------------------------------------------------------------------
// Reports

void write_trace_csv(std::ostream& os, const std::vector<IterationRecord>& trace, std::size_t d) {
  os << "iter";
  for (std::size_t i = 1; i <= d; ++i) os << ",q_" << i;
  for (std::size_t i = 1; i <= d; ++i) os << ",fx_" << i;
  os << ",residual,alive_fraction,alive_fraction_after,achieved_rho,discard_fraction,cum_queries\n";
  for (const auto& r : trace) {
    if (r.query.size() != d || r.response.size() != d) throw DimensionMismatch(d, r.query.size());
    os << r.iter;
    for (double v : r.query) os << ',' << fmt17(v);
    for (double v : r.response) os << ',' << fmt17(v);
    os << ',' << fmt17(r.residual) << ',' << fmt17(r.alive_fraction) << ','
       << fmt17(r.alive_fraction_after) << ',' << fmt17(r.achieved_rho) << ','
       << fmt17(r.discard_fraction) << ',' << r.cum_queries << '\n';
  }
}

std::vector<IterationRecord> read_trace_csv(std::istream& is) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  std::string line;
  if (!std::getline(is, line)) throw ContractViolation("trace CSV is empty");
  const auto header = split(line);
  if (header.size() < 7 || header.front() != "iter" || (header.size() - 7) % 2 != 0)
    throw ContractViolation("unexpected trace CSV header");
  const std::size_t d = (header.size() - 7) / 2;

  std::vector<IterationRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != header.size()) throw ContractViolation("ragged trace CSV row");
    IterationRecord r;
    std::size_t k = 0;
    r.iter = std::stoull(c[k++]);
    r.query.resize(d);
    r.response.resize(d);
    for (auto& v : r.query) v = std::stod(c[k++]);
    for (auto& v : r.response) v = std::stod(c[k++]);
    r.residual = std::stod(c[k++]);
    r.alive_fraction = std::stod(c[k++]);
    r.alive_fraction_after = std::stod(c[k++]);
    r.achieved_rho = std::stod(c[k++]);
    r.discard_fraction = std::stod(c[k++]);
    r.cum_queries = std::stoull(c[k++]);
    out.push_back(std::move(r));
  }
  return out;
}

const char* outcome_name(Outcome o) {
  return o == Outcome::FoundFixpoint ? "FoundFixpoint" : "QueryBudgetExhausted";
}

Outcome parse_outcome(const std::string& s) {
  if (s == "FoundFixpoint") return Outcome::FoundFixpoint;
  if (s == "QueryBudgetExhausted") return Outcome::QueryBudgetExhausted;
  throw ContractViolation("unknown outcome '" + s + "'");
}

json report_to_json(const SolveReport& r) {
  return {{"outcome", outcome_name(r.outcome)},
          {"x", r.x},
          {"residual", r.residual},
          {"queries_used", r.queries_used},
          {"banach_queries", r.banach_queries},
          {"used_banach", r.used_banach},
          {"theoretical_bound", r.theoretical_bound},
          {"min_rho", r.min_rho},
          {"max_queries", r.max_queries},
          {"iterations", r.trace.size()}};
}

SolveReport report_from_json(const json& j) {
  SolveReport r;
  r.outcome = parse_outcome(j.at("outcome").get<std::string>());
  r.x = j.at("x").get<Point>();
  r.residual = j.at("residual").get<double>();
  r.queries_used = j.at("queries_used").get<std::size_t>();
  r.banach_queries = j.at("banach_queries").get<std::size_t>();
  r.used_banach = j.at("used_banach").get<bool>();
  r.theoretical_bound = j.at("theoretical_bound").get<std::size_t>();
  r.min_rho = j.at("min_rho").get<double>();
  r.max_queries = j.at("max_queries").get<std::size_t>();
  return r;
}

json grid_result_to_json(const GridSolveResult& r) {
  json j = {{"outcome", r.outcome == GridOutcome::FoundFixpoint ? "FoundFixpoint" : "ViolationCertificate"},
            {"queries_used", r.queries_used},
            {"min_rho", r.min_rho},
            {"iterations", r.trace.size()}};
  if (r.outcome == GridOutcome::FoundFixpoint) {
    j["x"] = r.x.to_point();
    j["k"] = r.x.k;
    j["b"] = r.x.bits;
    j["residual"] = r.residual;
  } else {
    j["certificate_size"] = r.certificate.entries.size();
  }
  return j;
}

// ---------------------------------------------------------------------------
// Bench

std::uint64_t bench_seed(const BenchSpec& spec, std::size_t cell, std::size_t instance) {
  return mix_seed(mix_seed(spec.seed, cell), instance);
}

std::vector<BenchRow> run_bench(const BenchSpec& spec) {
  std::vector<BenchRow> rows;
  std::size_t cell = 0;
  for (auto d : spec.d)
    for (const auto& p : spec.p)
      for (auto eps : spec.epsilon)
        for (auto lam : spec.lambda) {
          for (std::size_t k = 0; k < spec.instances; ++k) {
            BenchRow r;
            r.d = d;
            r.p = p;
            r.epsilon = eps;
            r.lambda = lam;
            r.instance = k;
            r.seed = bench_seed(spec, cell, k);
            rows.push_back(std::move(r));
          }
          ++cell;
        }

  auto work = [&spec](BenchRow& r) {
    try {
      const auto inst = random_affine_instance(r.d, r.p, r.lambda, r.seed);
      SolveParams sp;
      sp.dim = r.d;
      sp.p = r.p;
      sp.epsilon = r.epsilon;
      sp.lambda = r.lambda;
      sp.cloud = spec.cloud;
      sp.dirs = spec.dirs;
      sp.rho_min = spec.rho_min;
      sp.max_queries = spec.max_queries;
      sp.seed = r.seed;
      const auto rep = solve_continuous(inst, sp);
      r.outcome = outcome_name(rep.outcome);
      r.queries_used = rep.queries_used;
      r.bound = rep.theoretical_bound;
      r.residual = rep.residual;
      r.min_rho = rep.min_rho;
      const Point x0(r.d, 0.5);
      r.banach_queries = banach_iterate(inst, x0, r.epsilon, r.lambda, r.p).queries;
    } catch (const std::exception& e) {
      if (r.outcome.empty()) r.outcome = "Error";
      r.error = e.what();
    }
  };

  std::size_t threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, rows.size());
  if (threads <= 1) {
    for (auto& r : rows) work(r);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < rows.size();) work(rows[i]);
    });
  for (auto& th : pool) th.join();
  return rows;
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << "d,p,epsilon,lambda,instance,seed,outcome,queries_used,bound,banach_queries,residual,min_rho,error\n";
  for (const auto& r : rows) {
    std::string err = r.error;
    for (auto& ch : err)
      if (ch == ',' || ch == '\n') ch = ';';
    os << r.d << ',' << r.p.to_string() << ',' << fmt17(r.epsilon) << ',' << fmt17(r.lambda) << ','
       << r.instance << ',' << r.seed << ',' << r.outcome << ',' << r.queries_used << ',' << r.bound
       << ',' << r.banach_queries << ',' << fmt17(r.residual) << ',' << fmt17(r.min_rho) << ','
       << err << '\n';
  }
}

// ---------------------------------------------------------------------------
// Commands

namespace {

struct RunConfig {
  std::string instance;
  std::optional<double> epsilon, lambda;
  std::optional<std::string> p;
  std::optional<std::size_t> d;
  std::size_t cloud = std::size_t{1} << 17;
  std::size_t dirs = 0;
  double rho_min = 0;
  std::optional<std::uint64_t> seed;
  std::size_t max_queries = 0;
  std::string out_csv, out_json, out_cert, cert;
  std::optional<int> bits;
  std::string sweep;
  std::size_t instances = 1;
  std::size_t threads = 0;
};

std::uint64_t resolve_seed(const RunConfig& cfg) {
  if (cfg.seed) return *cfg.seed;
  if (const char* env = std::getenv("LPFIX_SEED"); env && *env) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw ContractViolation("LPFIX_SEED must be an unsigned integer");
    return v;
  }
  return 0;
}

InstanceSpec load_instance(const RunConfig& cfg, std::uint64_t seed) {
  InstanceSpec s;
  if (!cfg.instance.empty()) {
    std::ifstream in(cfg.instance);
    if (!in) throw ContractViolation("cannot open instance file " + cfg.instance);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ContractViolation(std::string("instance is not valid JSON: ") + e.what());
    }
    s = parse_instance(j);
  }
  if (cfg.d) s.d = *cfg.d;
  if (cfg.p) s.p = PNorm::parse(*cfg.p);
  if (cfg.lambda) s.lambda = *cfg.lambda;
  if (cfg.epsilon) s.epsilon = *cfg.epsilon;
  if (cfg.instance.empty()) {
    // No file: a random affine contraction of the requested shape.
    const auto inst = random_affine_instance(s.d, s.p, s.lambda, seed);
    const auto& aff = std::get<AffineClampedMap>(inst.stages().front());
    s.kind = MapKind::Affine;
    s.A.clear();
    for (Eigen::Index i = 0; i < aff.A.rows(); ++i)
      for (Eigen::Index k = 0; k < aff.A.cols(); ++k) s.A.push_back(aff.A(i, k));
    s.t.assign(aff.t.data(), aff.t.data() + aff.t.size());
  } else if ((s.kind == MapKind::Affine && s.A.size() != s.d * s.d) ||
             (s.kind == MapKind::Constant && s.c.size() != s.d)) {
    throw ContractViolation("--d does not match the instance file");
  }
  return s;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ContractViolation("cannot write " + path);
  out << content;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const auto seed = resolve_seed(cfg);
  const auto spec = load_instance(cfg, seed);
  const auto oracle = build_oracle(spec);

  SolveParams sp;
  sp.dim = spec.d;
  sp.p = spec.p;
  sp.epsilon = spec.epsilon;
  sp.lambda = spec.lambda;
  sp.cloud = cfg.cloud;
  sp.dirs = cfg.dirs;
  sp.rho_min = cfg.rho_min;
  sp.max_queries = cfg.max_queries;
  sp.seed = seed;

  SolveReport rep;
  try {
    rep = solve_continuous(*oracle, sp);
  } catch (const EmptySearchSpace& e) {
    if (!cfg.out_csv.empty()) {
      std::ostringstream csv;
      write_trace_csv(csv, e.report().trace, spec.d);
      write_file(cfg.out_csv, csv.str());
    }
    throw;
  }
  if (!cfg.out_csv.empty()) {
    std::ostringstream csv;
    write_trace_csv(csv, rep.trace, spec.d);
    write_file(cfg.out_csv, csv.str());
  }
  json summary = report_to_json(rep);
  summary["d"] = spec.d;
  summary["p"] = spec.p.to_string();
  summary["epsilon"] = spec.epsilon;
  summary["lambda"] = spec.lambda;
  summary["seed"] = seed;
  if (!cfg.out_json.empty()) write_file(cfg.out_json, summary.dump(2) + "\n");
  out << summary.dump(2) << "\n";
  return rep.outcome == Outcome::FoundFixpoint ? kFixpoint : kBudget;
}

int cmd_grid_solve(const RunConfig& cfg, std::ostream& out) {
  const auto seed = resolve_seed(cfg);
  const auto spec = load_instance(cfg, seed);
  const bool demo = spec.kind == MapKind::NonContractionDemo;
  const int bits = cfg.bits ? *cfg.bits
                            : (demo ? spec.b : min_grid_resolution(spec.d, spec.epsilon, spec.lambda));
  if (spec.p.kind() != PNorm::Kind::One) throw ContractViolation("grid mode requires p = 1");
  const auto oracle = build_grid_oracle(spec, bits);

  GridSolveParams gp;
  gp.dim = spec.d;
  gp.bits = bits;
  gp.epsilon = spec.epsilon;
  gp.lambda = spec.lambda;
  gp.dirs = cfg.dirs;
  gp.rho_min = cfg.rho_min;
  gp.max_queries = cfg.max_queries;
  gp.seed = seed;
  gp.require_resolution = !demo;

  const auto res = solve_grid_l1(*oracle, gp);
  if (!cfg.out_csv.empty()) {
    std::ostringstream csv;
    write_trace_csv(csv, res.trace, spec.d);
    write_file(cfg.out_csv, csv.str());
  }
  json summary = grid_result_to_json(res);
  summary["d"] = spec.d;
  summary["bits"] = bits;
  summary["epsilon"] = spec.epsilon;
  summary["lambda"] = spec.lambda;
  summary["seed"] = seed;
  if (res.outcome == GridOutcome::Certificate) {
    const auto cert = certificate_to_json(res.certificate);
    summary["certificate"] = cert;
    if (!cfg.out_cert.empty()) write_file(cfg.out_cert, cert.dump(2) + "\n");
  }
  if (!cfg.out_json.empty()) write_file(cfg.out_json, summary.dump(2) + "\n");
  out << summary.dump(2) << "\n";
  return res.outcome == GridOutcome::FoundFixpoint ? kFixpoint : kCertificate;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

// "d=2,3;p=1,2,inf;eps=1e-2,1e-3;lambda=0.5,0.9"
void apply_sweep(BenchSpec& spec, const std::string& sweep) {
  for (const auto& part : split(sweep, ';')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw ContractViolation("sweep entries look like key=v1,v2");
    const auto key = part.substr(0, eq);
    const auto values = split(part.substr(eq + 1), ',');
    if (values.empty()) throw ContractViolation("empty sweep list for " + key);
    if (key == "d") {
      spec.d.clear();
      for (const auto& v : values) spec.d.push_back(std::stoul(v));
    } else if (key == "p") {
      spec.p.clear();
      for (const auto& v : values) spec.p.push_back(PNorm::parse(v));
    } else if (key == "eps" || key == "epsilon") {
      spec.epsilon.clear();
      for (const auto& v : values) spec.epsilon.push_back(std::stod(v));
    } else if (key == "lambda") {
      spec.lambda.clear();
      for (const auto& v : values) spec.lambda.push_back(std::stod(v));
    } else {
      throw ContractViolation("unknown sweep key '" + key + "'");
    }
  }
}

int cmd_bench(const RunConfig& cfg, std::ostream& out) {
  BenchSpec spec;
  if (!cfg.sweep.empty()) apply_sweep(spec, cfg.sweep);
  if (cfg.d) spec.d = {*cfg.d};
  if (cfg.p) spec.p = {PNorm::parse(*cfg.p)};
  if (cfg.epsilon) spec.epsilon = {*cfg.epsilon};
  if (cfg.lambda) spec.lambda = {*cfg.lambda};
  spec.instances = cfg.instances;
  spec.seed = resolve_seed(cfg);
  spec.cloud = cfg.cloud;
  spec.dirs = cfg.dirs;
  spec.rho_min = cfg.rho_min;
  spec.max_queries = cfg.max_queries;
  spec.threads = cfg.threads;

  const auto rows = run_bench(spec);
  std::ostringstream csv;
  write_bench_csv(csv, rows);
  if (!cfg.out_csv.empty()) write_file(cfg.out_csv, csv.str());
  else out << csv.str();
  return kFixpoint;
}

int cmd_verify_cert(const RunConfig& cfg, std::ostream& out) {
  std::ifstream in(cfg.cert);
  if (!in) throw ContractViolation("cannot open certificate " + cfg.cert);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ContractViolation(std::string("certificate is not valid JSON: ") + e.what());
  }
  const auto cert = certificate_from_json(j);
  const std::size_t d = cfg.d ? *cfg.d : cert.dim;
  const int b = cfg.bits ? *cfg.bits : cert.bits;
  const bool ok = verify_violation_certificate(cert, d, b);
  out << (ok ? "covered" : "not covered") << " (" << cert.entries.size() << " pairs, d=" << d
      << ", b=" << b << ")\n";
  return ok ? kFixpoint : kError;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Approximate fixpoints of lp-contraction maps on the unit cube"};
  app.require_subcommand(1);

  auto common = [&cfg](CLI::App* sub) {
    sub->add_option("--instance", cfg.instance, "Instance JSON file");
    sub->add_option("--epsilon", cfg.epsilon, "Target residual");
    sub->add_option("--lambda", cfg.lambda, "Declared contraction factor");
    sub->add_option("--p", cfg.p, "Norm: 1, 2, inf or a real > 1");
    sub->add_option("--d", cfg.d, "Dimension");
    sub->add_option("--dirs", cfg.dirs, "Sampled directions (default 64d)");
    sub->add_option("--rho-min", cfg.rho_min, "Target centerpoint quality (default 1/(2(d+1)))");
    sub->add_option("--seed", cfg.seed, "Seed (falls back to LPFIX_SEED, then 0)");
    sub->add_option("--max-queries", cfg.max_queries, "Query budget (default 4x the bound)");
    sub->add_option("--out-csv", cfg.out_csv, "Trace CSV path");
    sub->add_option("--out-json", cfg.out_json, "Summary JSON path");
  };

  auto* solve = app.add_subcommand("solve", "Continuous centerpoint-cutting solve");
  common(solve);
  solve->add_option("--cloud", cfg.cloud, "Point-cloud size");

  auto* grid = app.add_subcommand("grid-solve", "l1 solve on the dyadic grid");
  common(grid);
  grid->add_option("--bits", cfg.bits, "Grid resolution b (default: the minimum admissible)");
  grid->add_option("--out-cert", cfg.out_cert, "Certificate JSON path");

  auto* bench = app.add_subcommand("bench", "Sweep over random affine instances");
  common(bench);
  bench->add_option("--cloud", cfg.cloud, "Point-cloud size");
  bench->add_option("--sweep", cfg.sweep, "e.g. \"d=2,3;p=1,2,inf;eps=1e-2,1e-3;lambda=0.5,0.9\"");
  bench->add_option("--instances", cfg.instances, "Instances per cell");
  bench->add_option("--threads", cfg.threads, "Worker threads (default: all cores)");

  auto* verify = app.add_subcommand("verify-cert", "Check grid coverage of a certificate");
  verify->add_option("--cert", cfg.cert, "Certificate JSON file")->required();
  verify->add_option("--d", cfg.d, "Dimension (default: from the certificate)");
  verify->add_option("--bits", cfg.bits, "Grid resolution (default: from the certificate)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kError;
  }

  try {
    if (solve->parsed()) return cmd_solve(cfg, out);
    if (grid->parsed()) return cmd_grid_solve(cfg, out);
    if (bench->parsed()) return cmd_bench(cfg, out);
    if (verify->parsed()) return cmd_verify_cert(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

}  // namespace lpfix::cli
