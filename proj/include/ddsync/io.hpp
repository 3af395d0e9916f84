#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "ddsync/depth.hpp"
#include "ddsync/sync.hpp"

namespace ddsync {

/// Shortest-round-trip-safe float text: 17 significant digits.
std::string format_double(double x);

/// Graph JSON: {"n", "D", "edges": [{"j", "k", "R": [D*D row-major], "label"}],
/// "ground_truth": [[D*D], ...]} plus an optional "scenario" section
/// {"model", "alpha", "seed", "rho", "init": [[D*D], ...]}. Edges are written
/// sorted; output is byte-stable for identical input.
std::string scenario_to_json(const Scenario& s);
/// Parses a graph or scenario document. Without a scenario section the
/// initialization is the identity and meta keeps its defaults.
Scenario scenario_from_json(const std::string& text);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

/// Columns: epoch, t, node, step_norm, delta, ball_radius, l1_energy, wall_ms.
/// Iteration rows leave delta/ball_radius/wall_ms empty; epoch rows leave node
/// empty and report the largest step of the epoch. With timing off wall_ms is
/// empty everywhere.
std::string trace_to_csv(const RunTrace& trace, int n, bool timing = true);
inline constexpr const char* kTraceHeader = "epoch,t,node,step_norm,delta,ball_radius,l1_energy,wall_ms";

/// {"status", "final_delta", "epochs"[, "coordinatewise_fixed"]}.
std::string summary_to_json(const RunTrace& trace);

/// Points file: JSON {"points": [[...], ...]} or plain text with one point per
/// line (whitespace or comma separated).
PointCloud load_points(const std::filesystem::path& path);
PointCloud points_from_text(const std::string& text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace ddsync
