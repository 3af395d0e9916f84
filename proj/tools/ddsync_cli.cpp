#include <fmt/format.h>
#include <fmt/ranges.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "ddsync/experiment.hpp"
#include "ddsync/io.hpp"

using namespace ddsync;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitMaxEpochs = 2;
constexpr int kSampledTrials = 20000;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("ddsync");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("SYNC_LOG")) {
    const std::string level = env;
    if (level == "error" || level == "warn" || level == "info" || level == "debug") {
      spdlog::set_level(spdlog::level::from_str(level));
    } else {
      spdlog::warn("ignoring SYNC_LOG='{}'; expected error, warn, info or debug", level);
    }
  }
}

std::string verdict_line(const MeasurementGraph& g, std::uint64_t seed) {
  const bool exhaustive = g.n() <= kMaxExhaustiveNodes;
  const auto mode = exhaustive ? WellConnectedMode::exhaustive_scan() : WellConnectedMode::sampled(kSampledTrials, seed);
  const WellConnectedReport r = is_well_connected(g, mode);
  std::string line = fmt::format("well_connected: {} ({}, {} subsets)", to_string(r.verdict),
                                 exhaustive ? "exhaustive" : "sampled", r.subsets_checked);
  if (r.verdict == Verdict::False) line += fmt::format("\nwitness: {}", fmt::join(r.witness, " "));
  return line;
}

Eigen::VectorXd parse_query(const std::string& text) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<double> xs;
  for (double x; in >> x;) xs.push_back(x);
  if (!in.eof() || xs.empty()) throw SyncError(ErrorKind::Parse, "query must be a comma-separated list of numbers");
  return Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

std::string format_point(const Eigen::VectorXd& x) {
  std::vector<std::string> parts;
  for (Eigen::Index i = 0; i < x.size(); ++i) parts.push_back(format_double(x(i)));
  return fmt::format("{}", fmt::join(parts, ","));
}

struct GenerateArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

int cmd_generate(const GenerateArgs& a) {
  ExperimentConfig c = load_config(a.config);
  if (a.seed) c.corruption.seed = *a.seed;
  c.validate();
  const Scenario s = build_scenario(c, c.corruption.alpha, c.corruption.seed);
  const fs::path path = fs::path(a.out.empty() ? c.output_dir : a.out) / "scenario.json";
  save_scenario(s, path);
  fmt::print("scenario: {}\n", path.string());
  fmt::print("model: {}\nalpha0: {}\n", s.meta.model, format_double(corruption_stats(s.graph).alpha0));
  fmt::print("{}\n", verdict_line(s.graph, c.corruption.seed));
  return kExitOk;
}

struct RunArgs {
  std::string scenario;
  std::string config;
  std::string out = "out";
  std::optional<std::string> algo;
  std::optional<double> eta;
  std::optional<double> beta;
  std::optional<int> max_epochs;
  std::uint64_t seed = 0;
  bool no_timing = false;
};

int cmd_run(const RunArgs& a) {
  const Scenario s = load_scenario(a.scenario);
  ExperimentConfig c = a.config.empty() ? ExperimentConfig{} : load_config(a.config);
  c.n = s.graph.n();
  c.dim = s.graph.dim();
  c.graph = GraphSpec{};
  c.corruption = CorruptionSpec{};
  c.sweep = SweepSpec{};
  if (a.algo) c.solver.algo = parse_algo(*a.algo);
  if (a.eta) c.solver.eta = a.eta;
  if (a.beta) c.solver.beta = a.beta;
  if (a.max_epochs) c.solver.max_epochs = *a.max_epochs;
  c.validate();

  Rng rng(a.seed);
  const RunTrace trace = run_solver(s, c.solver, rng);
  const fs::path out(a.out);
  write_file(out / "trace.csv", trace_to_csv(trace, s.graph.n(), !a.no_timing));
  const std::string summary = summary_to_json(trace);
  write_file(out / "summary.json", summary);
  fmt::print("{}", summary);
  if (trace.status == RunStatus::Error) {
    spdlog::error("{}", trace.error);
    return kExitError;
  }
  return trace.status == RunStatus::Converged ? kExitOk : kExitMaxEpochs;
}

struct SweepArgs {
  std::string config;
  std::string out;
  int workers = 1;
  std::optional<std::string> algo;
};

int cmd_sweep(const SweepArgs& a) {
  ExperimentConfig c = load_config(a.config);
  if (a.algo) {
    c.solver.algo = parse_algo(*a.algo);
    c.sweep.algos = {c.solver.algo};
  }
  const auto rows = run_sweep(c, std::max(1, a.workers));
  const fs::path out(a.out.empty() ? c.output_dir : a.out);
  write_file(out / "sweep.csv", sweep_to_csv(rows));
  write_file(out / "sweep_pivot.csv", sweep_pivot_to_csv(rows));
  write_file(out / "sweep_timing.csv", sweep_timing_to_csv(rows));
  const auto failed = std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.error.empty(); });
  fmt::print("runs: {}\nerrors: {}\n{}", rows.size(), failed, sweep_pivot_to_csv(rows));
  return kExitOk;
}

int cmd_check_graph(const std::string& path, std::uint64_t seed) {
  const Scenario s = load_scenario(path);
  const MeasurementGraph& g = s.graph;
  std::vector<int> degrees;
  for (int j = 0; j < g.n(); ++j) degrees.push_back(g.degree(j));
  fmt::print("n: {}\nD: {}\nedges: {}\nconnected: true\n", g.n(), g.dim(), g.edges().size());
  fmt::print("degrees: {}\n", fmt::join(degrees, " "));
  if (g.is_labeled()) {
    fmt::print("alpha0: {}\n", format_double(corruption_stats(g).alpha0));
  } else {
    fmt::print("alpha0: unknown (unlabeled edges)\n");
  }
  fmt::print("{}\n", verdict_line(g, seed));
  return kExitOk;
}

struct DepthArgs {
  std::string points;
  double beta = 0.25;
  std::string query;
  std::uint64_t seed = 0;
};

int cmd_depth(const DepthArgs& a) {
  const PointCloud cloud = load_points(a.points);
  if (cloud.dim > 3) throw SyncError(ErrorKind::UnsupportedDim, "depth supports dimensions 1, 2 and 3");
  fmt::print("points: {}\ndim: {}\nrequired_depth: {}\n", cloud.size(), cloud.dim, required_depth(a.beta, cloud.size()));
  if (!a.query.empty()) {
    const Eigen::VectorXd q = parse_query(a.query);
    if (q.size() != cloud.dim) throw SyncError(ErrorKind::DimensionMismatch, "query dimension differs from the points");
    fmt::print("query_depth: {}\n", tukey_depth(q, cloud));
  }
  if (cloud.dim == 1) {
    const auto xs = cloud.scalars();
    const DepthInterval r = depth_region_1d(a.beta, xs);
    fmt::print("region: [{}, {}]\n", format_double(r.lo), format_double(r.hi));
  }
  Rng rng(a.seed);
  const Eigen::VectorXd deep = max_depth_point(cloud, a.beta, SelectionRule{SelectionVariant::DeepestCandidate, 500}, rng);
  fmt::print("deep_point: {}\ndeep_point_depth: {}\n", format_point(deep), tukey_depth(deep, cloud));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Robust rotation synchronization by depth descent"};
  app.require_subcommand(1);
  const std::vector<std::string> algos{"dds", "tas", "l1mra"};

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a scenario file from an experiment config");
  generate->add_option("--config", gen.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  generate->add_option("--out", gen.out, "Output directory (default: config output_dir)");
  generate->add_option("--seed", gen.seed, "Override corruption.seed");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a solver on a scenario file");
  run_cmd->add_option("--scenario", run.scenario, "Scenario or graph file (JSON)")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--config", run.config, "Config whose solver section is used")->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run.out, "Output directory for trace.csv and summary.json")->capture_default_str();
  run_cmd->add_option("--algo", run.algo, "Solver")->check(CLI::IsMember(algos));
  run_cmd->add_option("--eta", run.eta, "Step size");
  run_cmd->add_option("--beta", run.beta, "Depth level (dds)");
  run_cmd->add_option("--max-epochs", run.max_epochs, "Epoch limit");
  run_cmd->add_option("--seed", run.seed, "Seed for randomized selection rules")->capture_default_str();
  run_cmd->add_flag("--no-timing", run.no_timing, "Leave the wall_ms column empty");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Run an alpha x seed x algo grid");
  sweep->add_option("--config", sw.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", sw.out, "Output directory (default: config output_dir)");
  sweep->add_option("--workers", sw.workers, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  sweep->add_option("--algo", sw.algo, "Restrict the grid to one solver")->check(CLI::IsMember(algos));

  std::string graph_path;
  std::uint64_t graph_seed = 0;
  auto* check = app.add_subcommand("check-graph", "Report connectivity, corruption and well-connectedness");
  auto* positional = check->add_option("graph", graph_path, "Graph or scenario file (JSON)")->check(CLI::ExistingFile);
  check->add_option("--scenario", graph_path, "Same as the positional argument")->check(CLI::ExistingFile)->excludes(positional);
  check->add_option("--seed", graph_seed, "Seed for sampled checks on large graphs")->capture_default_str();

  DepthArgs dp;
  auto* depth = app.add_subcommand("depth", "Tukey depth utilities for a point file");
  depth->add_option("points", dp.points, "Points file (JSON or text)")->required()->check(CLI::ExistingFile);
  depth->add_option("--beta", dp.beta, "Depth level in (0, 1/2]")->capture_default_str();
  depth->add_option("--query", dp.query, "Query point, comma separated");
  depth->add_option("--seed", dp.seed, "Seed for the candidate search")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*generate) return cmd_generate(gen);
    if (*run_cmd) return cmd_run(run);
    if (*sweep) return cmd_sweep(sw);
    if (*check) {
      if (graph_path.empty()) throw SyncError(ErrorKind::InvalidArgument, "check-graph needs a graph file");
      return cmd_check_graph(graph_path, graph_seed);
    }
    if (*depth) return cmd_depth(dp);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitError;
  }
  return kExitError;
}
