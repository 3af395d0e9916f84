#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ddsync/dds.hpp"

namespace ddsync {

enum class Algo { Dds, Tas, L1mra };
const char* to_string(Algo a);
Algo parse_algo(const std::string& s);

struct GraphSpec {
  std::string type = "complete";  // complete | erdos_renyi
  double p = 1.0;
};

struct CorruptionSpec {
  std::string model = "random";  // random | consistent | spurious
  double alpha = 0.0;
  double rho = 1.0;
  std::uint64_t seed = 0;
  double theta = 0.7853981633974483;  // spurious model only
  bool allow_majority = false;
};

struct SolverSpec {
  Algo algo = Algo::Dds;
  std::optional<double> eta;
  std::optional<double> beta;
  std::optional<SelectionVariant> rule;
  int max_epochs = 2000;
  double stop_tol = 1e-12;
  bool random_order = false;
};

struct SweepSpec {
  std::vector<double> alphas;
  std::vector<std::uint64_t> seeds;
  std::vector<Algo> algos;  // defaults to {solver.algo}
  double success_tol = 1e-6;
};

struct ExperimentConfig {
  int n = 10;
  int dim = 2;
  GraphSpec graph;
  CorruptionSpec corruption;
  SolverSpec solver;
  SweepSpec sweep;
  std::string output_dir = "out";

  /// Throws InvalidArgument with an actionable message.
  void validate() const;
};

ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Deterministic in (config, alpha, seed).
Scenario build_scenario(const ExperimentConfig& config, double alpha, std::uint64_t seed);

/// Validates solver/dimension compatibility and runs the selected solver.
RunTrace run_solver(const Scenario& scenario, const SolverSpec& solver, Rng& rng, bool record_iterations = true,
                    SyncState* final_state = nullptr);

struct SweepRow {
  double alpha = 0.0;
  std::uint64_t seed = 0;
  Algo algo = Algo::Dds;
  std::string status;
  std::optional<double> final_delta;
  int epochs = 0;
  double wall_ms = 0.0;
  bool success = false;
  std::string error;
};

/// Runs the alpha x seed x algo grid on a pool of `workers` threads. Rows come
/// back sorted by (alpha, seed, algo); failures are recorded per row.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config, int workers);

/// alpha, seed, algo, status, final_delta, epochs, success, error.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
/// alpha, seed, algo, wall_ms.
std::string sweep_timing_to_csv(const std::vector<SweepRow>& rows);
/// alpha, algo, runs, successes, success_rate.
std::string sweep_pivot_to_csv(const std::vector<SweepRow>& rows);

}  // namespace ddsync
