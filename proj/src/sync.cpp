#include "ddsync/sync.hpp"

#include <algorithm>

namespace ddsync {

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "Converged";
    case RunStatus::MaxEpochs: return "MaxEpochs";
    case RunStatus::Error: return "Error";
  }
  return "Error";
}

std::optional<double> RunTrace::final_delta() const {
  if (epochs.empty()) return std::nullopt;
  return epochs.back().delta;
}

std::vector<double> RunTrace::delta_ratios() const {
  std::vector<double> out;
  for (std::size_t e = 1; e < epochs.size(); ++e) {
    const auto& prev = epochs[e - 1].delta;
    const auto& cur = epochs[e].delta;
    if (prev && cur && *prev > 0.0) out.push_back(*cur / *prev);
  }
  return out;
}

std::vector<Rotation> normalization_products(const std::vector<Rotation>& estimates,
                                             const std::vector<Rotation>& ground_truth) {
  if (estimates.size() != ground_truth.size()) {
    throw SyncError(ErrorKind::DimensionMismatch, "estimates and ground truth differ in length");
  }
  std::vector<Rotation> out;
  out.reserve(estimates.size());
  for (std::size_t j = 0; j < estimates.size(); ++j) out.push_back(ground_truth[j].transpose() * estimates[j]);
  return out;
}

double normalization_spread(const std::vector<Rotation>& estimates, const std::vector<Rotation>& ground_truth) {
  const auto p = normalization_products(estimates, ground_truth);
  double best = 0.0;
  if (!p.empty() && p[0].dim() == 2) {
    for (std::size_t a = 0; a < p.size(); ++a)
      for (std::size_t b = a + 1; b < p.size(); ++b)
        best = std::max(best, angular_distance(UnitComplex::from_rotation(p[a]), UnitComplex::from_rotation(p[b])));
    return best;
  }
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::size_t b = a + 1; b < p.size(); ++b) best = std::max(best, geodesic_distance(p[a], p[b]));
  return best;
}

double normalization_ball_radius(const std::vector<Rotation>& estimates, const std::vector<Rotation>& ground_truth) {
  const auto p = normalization_products(estimates, ground_truth);
  if (p.empty()) return 0.0;
  if (p[0].dim() == 2) {
    std::vector<UnitComplex> z;
    z.reserve(p.size());
    for (const auto& r : p) z.push_back(UnitComplex::from_rotation(r));
    return enclosing_arc_unchecked(z).radius;
  }
  return enclosing_ball_unchecked(p).radius;
}

}  // namespace ddsync
