#pragma once

// Randomized property suites shared by the unit tests and the acceptance
// binary. Each returns the number of cases checked and the violations seen.

#include <cstdint>
#include <string>

namespace props {

struct Report {
  long cases = 0;
  long violations = 0;
  std::string first_failure;

  void check(bool ok, const std::string& what) {
    ++cases;
    if (!ok) {
      if (violations == 0) first_failure = what;
      ++violations;
    }
  }
  void merge(const Report& other) {
    if (violations == 0 && other.violations > 0) first_failure = other.first_failure;
    cases += other.cases;
    violations += other.violations;
  }
};

// Manifold.
Report exp_log_round_trip(int cases, std::uint64_t seed);
Report metric_axioms(int cases, std::uint64_t seed);
Report bi_invariance(int cases, std::uint64_t seed);
Report geodesic_interiority(int cases, std::uint64_t seed);
Report so2_consistency(int cases, std::uint64_t seed);

// Depth.
Report depth_lower_bound(int clouds_per_n, int dim, std::uint64_t seed);
Report affine_equivariance(int cases, std::uint64_t seed);
Report region_depth_consistency(std::uint64_t seed);
Report exact_vs_monte_carlo(int clouds, int directions, std::uint64_t seed);

// L1 baseline: strict energy decrease and bounded spread on random runs.
Report l1_monotonicity(int scenarios, std::uint64_t seed);

}  // namespace props
