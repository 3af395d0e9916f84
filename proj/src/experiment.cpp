#include "ddsync/experiment.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <thread>

#include "ddsync/io.hpp"
#include "ddsync/l1mra.hpp"
#include "ddsync/tas.hpp"
#include "json.hpp"

namespace ddsync {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& msg) { throw SyncError(ErrorKind::InvalidArgument, msg); }

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw SyncError(ErrorKind::Parse, fmt::format("config: '{}{}' has the wrong type", where, key));
  }
}

template <class T>
void read_optional(const json& obj, const char* key, std::optional<T>& out, const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  T value{};
  read(obj, key, value, where);
  out = value;
}

const json& section(const json& doc, const char* key) {
  static const json empty = json::object();
  if (!doc.contains(key)) return empty;
  if (!doc.at(key).is_object()) throw SyncError(ErrorKind::Parse, fmt::format("config: '{}' must be an object", key));
  return doc.at(key);
}

}  // namespace

const char* to_string(Algo a) {
  switch (a) {
    case Algo::Dds: return "dds";
    case Algo::Tas: return "tas";
    case Algo::L1mra: return "l1mra";
  }
  return "dds";
}

Algo parse_algo(const std::string& s) {
  if (s == "dds") return Algo::Dds;
  if (s == "tas") return Algo::Tas;
  if (s == "l1mra") return Algo::L1mra;
  invalid("algo must be one of dds, tas, l1mra (got '" + s + "')");
}

void ExperimentConfig::validate() const {
  if (n < 2) invalid("n must be at least 2");
  if (dim < 2) invalid("D must be at least 2");
  if (graph.type != "complete" && graph.type != "erdos_renyi") {
    invalid("graph.type must be 'complete' or 'erdos_renyi' (got '" + graph.type + "')");
  }
  if (graph.type == "erdos_renyi" && !(graph.p > 0.0 && graph.p <= 1.0)) invalid("graph.p must lie in (0, 1]");
  const auto& c = corruption;
  if (c.model != "random" && c.model != "consistent" && c.model != "spurious") {
    invalid("corruption.model must be 'random', 'consistent' or 'spurious' (got '" + c.model + "')");
  }
  const double limit = c.allow_majority ? 1.0 : 0.5;
  auto check_alpha = [&](double a) {
    if (!(a >= 0.0 && a < limit)) {
      invalid(fmt::format("alpha {} must lie in [0, {}){}", a, limit,
                          c.allow_majority ? "" : "; set corruption.allow_majority for experiments beyond 1/2"));
    }
  };
  check_alpha(c.alpha);
  for (double a : sweep.alphas) check_alpha(a);
  if (!(c.rho >= 0.0 && c.rho < 1.5707963267948966)) invalid("corruption.rho must lie in [0, pi/2)");
  if (c.model == "spurious") {
    if (dim != 2) invalid("the spurious model requires D = 2");
    if (n % 2 != 0) invalid("the spurious model requires an even n");
    if (graph.type != "complete") invalid("the spurious model uses a complete graph");
    if (!(c.theta > 0.0 && c.theta < 1.5707963267948966)) invalid("corruption.theta must lie in (0, pi/2)");
  }
  std::vector<Algo> algos = sweep.algos;
  algos.push_back(solver.algo);
  for (Algo a : algos) {
    if (a != Algo::Dds && dim != 2) invalid(std::string(to_string(a)) + " requires D = 2");
  }
  if (solver.max_epochs < 0) invalid("solver.max_epochs must be non-negative");
  if (!(solver.stop_tol >= 0.0)) invalid("solver.stop_tol must be non-negative");
  if (solver.algo == Algo::Tas && solver.eta && !(*solver.eta > 0.0 && *solver.eta < 1.0)) {
    invalid("tas requires 0 < eta < 1");
  }
  if (solver.algo == Algo::Dds) {
    DdsConfig dc;
    dc.beta = solver.beta;
    dc.eta = solver.eta;
    resolve(dc, dim);
  }
  if (!(sweep.success_tol > 0.0)) invalid("sweep.success_tol must be positive");
}

ExperimentConfig config_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SyncError(ErrorKind::Parse, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SyncError(ErrorKind::Parse, "config must be a JSON object");
  ExperimentConfig c;
  read(doc, "n", c.n, "");
  read(doc, "D", c.dim, "");
  read(doc, "output_dir", c.output_dir, "");

  const json& g = section(doc, "graph");
  read(g, "type", c.graph.type, "graph.");
  read(g, "p", c.graph.p, "graph.");

  const json& k = section(doc, "corruption");
  read(k, "model", c.corruption.model, "corruption.");
  read(k, "alpha", c.corruption.alpha, "corruption.");
  read(k, "rho", c.corruption.rho, "corruption.");
  read(k, "seed", c.corruption.seed, "corruption.");
  read(k, "theta", c.corruption.theta, "corruption.");
  read(k, "allow_majority", c.corruption.allow_majority, "corruption.");

  const json& s = section(doc, "solver");
  std::string algo = to_string(c.solver.algo);
  read(s, "algo", algo, "solver.");
  c.solver.algo = parse_algo(algo);
  read_optional(s, "eta", c.solver.eta, "solver.");
  read_optional(s, "beta", c.solver.beta, "solver.");
  std::optional<std::string> rule;
  read_optional(s, "rule", rule, "solver.");
  if (rule) c.solver.rule = parse_selection_variant(*rule);
  read(s, "max_epochs", c.solver.max_epochs, "solver.");
  read(s, "stop_tol", c.solver.stop_tol, "solver.");
  read(s, "random_order", c.solver.random_order, "solver.");

  const json& w = section(doc, "sweep");
  read(w, "alphas", c.sweep.alphas, "sweep.");
  read(w, "seeds", c.sweep.seeds, "sweep.");
  std::vector<std::string> algos;
  read(w, "algos", algos, "sweep.");
  for (const auto& a : algos) c.sweep.algos.push_back(parse_algo(a));
  read(w, "success_tol", c.sweep.success_tol, "sweep.");
  return c;
}

ExperimentConfig load_config(const std::string& path) { return config_from_json(read_file(path)); }

Scenario build_scenario(const ExperimentConfig& config, double alpha, std::uint64_t seed) {
  const auto& c = config.corruption;
  if (c.model == "spurious") {
    Scenario s = spurious_fixture(config.n, c.theta);
    s.meta.seed = seed;
    return s;
  }
  Rng rng(seed);
  const MeasurementGraph topo = config.graph.type == "complete"
                                    ? make_complete(config.n, config.dim)
                                    : make_erdos_renyi(config.n, config.dim, config.graph.p, rng);
  Scenario s = make_scenario(topo, generate_ground_truth(config.n, config.dim, c.rho, rng),
                             ScenarioMeta{"clean", 0.0, seed, c.rho});
  const CorruptionOptions opts{c.allow_majority};
  s = c.model == "consistent" ? corrupt_consistent(s, alpha, rng, opts) : corrupt_random(s, alpha, rng, opts);
  s.meta.seed = seed;
  return s;
}

RunTrace run_solver(const Scenario& scenario, const SolverSpec& solver, Rng& rng, bool record_iterations,
                    SyncState* final_state) {
  RunControls controls;
  controls.max_epochs = solver.max_epochs;
  controls.stop_tol = solver.stop_tol;
  controls.record_iterations = record_iterations;
  switch (solver.algo) {
    case Algo::Dds: {
      DdsConfig dc;
      dc.beta = solver.beta;
      dc.eta = solver.eta;
      if (solver.rule) dc.rule = SelectionRule{*solver.rule, SelectionRule{}.search_budget};
      dc.controls = controls;
      dc.random_order = solver.random_order;
      return dds_run(scenario, dc, rng, final_state);
    }
    case Algo::Tas: {
      TasConfig tc;
      tc.eta = solver.eta;
      tc.controls = controls;
      return tas_run(scenario, tc, final_state);
    }
    case Algo::L1mra: return gd_l1_run(scenario, controls, true, final_state);
  }
  invalid("unknown algorithm");
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, int workers) {
  config.validate();
  if (config.sweep.alphas.empty() || config.sweep.seeds.empty()) invalid("sweep.alphas and sweep.seeds must be nonempty");
  std::vector<Algo> algos = config.sweep.algos.empty() ? std::vector<Algo>{config.solver.algo} : config.sweep.algos;

  std::vector<SweepRow> rows;
  for (double a : config.sweep.alphas)
    for (auto seed : config.sweep.seeds)
      for (Algo algo : algos) rows.push_back(SweepRow{a, seed, algo, "", std::nullopt, 0, 0.0, false, ""});

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      SweepRow& row = rows[i];
      const auto start = std::chrono::steady_clock::now();
      try {
        const Scenario s = build_scenario(config, row.alpha, row.seed);
        SolverSpec solver = config.solver;
        solver.algo = row.algo;
        Rng rng(row.seed ^ 0x9e3779b97f4a7c15ULL);
        const RunTrace t = run_solver(s, solver, rng, false);
        row.status = to_string(t.status);
        row.final_delta = t.final_delta();
        row.epochs = t.completed_epochs();
        row.success = row.final_delta && *row.final_delta < config.sweep.success_tol;
      } catch (const std::exception& e) {
        row.status = to_string(RunStatus::Error);
        row.error = e.what();
      }
      row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
  };
  const int count = std::max(1, std::min<int>(workers, static_cast<int>(rows.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < count; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tuple(a.alpha, a.seed, static_cast<int>(a.algo)) < std::tuple(b.alpha, b.seed, static_cast<int>(b.algo));
  });
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "alpha,seed,algo,status,final_delta,epochs,success,error\n";
  for (const auto& r : rows) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), '"', '\'');
    out += fmt::format("{},{},{},{},{},{},{},{}\n", format_double(r.alpha), r.seed, to_string(r.algo), r.status,
                       r.final_delta ? format_double(*r.final_delta) : "", r.epochs, r.success ? 1 : 0,
                       err.empty() ? "" : "\"" + err + "\"");
  }
  return out;
}

std::string sweep_timing_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "alpha,seed,algo,wall_ms\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{}\n", format_double(r.alpha), r.seed, to_string(r.algo), format_double(r.wall_ms));
  }
  return out;
}

std::string sweep_pivot_to_csv(const std::vector<SweepRow>& rows) {
  std::map<std::pair<double, int>, std::pair<int, int>> agg;
  for (const auto& r : rows) {
    auto& [runs, ok] = agg[{r.alpha, static_cast<int>(r.algo)}];
    ++runs;
    ok += r.success ? 1 : 0;
  }
  std::string out = "alpha,algo,runs,successes,success_rate\n";
  for (const auto& [key, v] : agg) {
    out += fmt::format("{},{},{},{},{}\n", format_double(key.first), to_string(static_cast<Algo>(key.second)), v.first,
                       v.second, format_double(static_cast<double>(v.second) / v.first));
  }
  return out;
}

}  // namespace ddsync
