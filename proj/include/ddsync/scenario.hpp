#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ddsync/graph.hpp"

namespace ddsync {

struct ScenarioMeta {
  std::string model = "clean";
  double alpha = 0.0;
  std::uint64_t seed = 0;
  double rho = 0.0;
};

/// A labeled measurement graph together with its ground truth (optional) and
/// the solver initialization.
struct Scenario {
  MeasurementGraph graph;
  std::vector<Rotation> ground_truth;  // empty when unknown
  std::vector<Rotation> init;
  ScenarioMeta meta;

  bool has_ground_truth() const { return !ground_truth.empty(); }
};

/// n rotations whose transposes lie in a ball of radius rho around a random
/// center (geodesic metric; angular metric for D = 2).
std::vector<Rotation> generate_ground_truth(int n, int dim, double spread_rho, Rng& rng);

/// Fills a topology with exact measurements R*_j R*_k^T, labels every edge
/// good and initializes all estimates to the identity.
Scenario make_scenario(const MeasurementGraph& topology, std::vector<Rotation> ground_truth, ScenarioMeta meta);

/// Strategy for corrupting a clean scenario: which edges become bad and what
/// they measure.
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::string name() const = 0;
  /// Edge indices to corrupt. The default samples edges in random order and
  /// accepts one while both endpoints stay within floor(alpha * n_j).
  virtual std::vector<int> choose_bad_edges(const Scenario& s, double alpha, Rng& rng);
  virtual Rotation bad_measurement(const Scenario& s, const Edge& e, Rng& rng) = 0;
};

/// Haar-random bad measurements.
class RandomAdversary : public Adversary {
 public:
  std::string name() const override { return "random"; }
  Rotation bad_measurement(const Scenario& s, const Edge& e, Rng& rng) override;
};

/// Bad measurements consistent with an alternative Haar-random signal R^b.
class ConsistentAdversary : public Adversary {
 public:
  std::string name() const override { return "consistent"; }
  std::vector<int> choose_bad_edges(const Scenario& s, double alpha, Rng& rng) override;
  Rotation bad_measurement(const Scenario& s, const Edge& e, Rng& rng) override;
  const std::vector<Rotation>& signal() const { return signal_; }

 private:
  std::vector<Rotation> signal_;
};

struct CorruptionOptions {
  /// Permits alpha in [1/2, 1) for demonstrations where the adversary wins.
  bool allow_majority = false;
};

Scenario corrupt(const Scenario& s, Adversary& adversary, double alpha, Rng& rng, CorruptionOptions opts = {});
Scenario corrupt_random(const Scenario& s, double alpha, Rng& rng, CorruptionOptions opts = {});
/// Also returns the alternative signal when `signal` is non-null.
Scenario corrupt_consistent(const Scenario& s, double alpha, Rng& rng, CorruptionOptions opts = {},
                            std::vector<Rotation>* signal = nullptr);

/// SO(2) fixture with two clusters theta apart that is coordinatewise fixed
/// for the least-absolute-deviations energy. Bad edges pair j with j + n/2.
Scenario spurious_fixture(int n_even, double theta);
inline constexpr double kSpuriousEpsilon = 1e-3;

}  // namespace ddsync
