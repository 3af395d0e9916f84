#include "ddsync/io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ddsync {

namespace {

using nlohmann::json;

void append_matrix(std::string& out, const Rotation& r) {
  out += '[';
  const auto v = r.to_row_major();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  out += ']';
}

void append_rotations(std::string& out, const std::vector<Rotation>& rs, const std::string& indent) {
  out += "[";
  for (std::size_t i = 0; i < rs.size(); ++i) {
    out += i ? ",\n" : "\n";
    out += indent;
    append_matrix(out, rs[i]);
  }
  if (!rs.empty()) out += "\n" + indent.substr(2);
  out += "]";
}

std::string quoted(const std::string& s) { return json(s).dump(); }

template <class T>
T field(const json& obj, const char* key, const char* where) {
  if (!obj.contains(key)) throw SyncError(ErrorKind::Parse, fmt::format("{}: missing field '{}'", where, key));
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SyncError(ErrorKind::Parse, fmt::format("{}: field '{}' has the wrong type ({})", where, key, e.what()));
  }
}

Rotation parse_rotation(const json& v, int dim, const std::string& where) {
  if (!v.is_array() || static_cast<int>(v.size()) != dim * dim) {
    throw SyncError(ErrorKind::Parse, fmt::format("{}: expected {} numbers", where, dim * dim));
  }
  std::vector<double> entries;
  for (const auto& x : v) {
    if (!x.is_number()) throw SyncError(ErrorKind::Parse, where + ": entries must be numbers");
    entries.push_back(x.get<double>());
  }
  try {
    return Rotation::from_row_major(dim, entries);
  } catch (const SyncError& e) {
    throw SyncError(e.kind(), where + ": " + e.what());
  }
}

// Accepts [[D*D], ...] or a flat [n*D*D] array.
std::vector<Rotation> parse_rotation_list(const json& v, int n, int dim, const std::string& where) {
  if (!v.is_array()) throw SyncError(ErrorKind::Parse, where + ": expected an array");
  std::vector<Rotation> out;
  if (!v.empty() && v[0].is_number()) {
    if (static_cast<int>(v.size()) != n * dim * dim) {
      throw SyncError(ErrorKind::Parse, fmt::format("{}: expected {} numbers", where, n * dim * dim));
    }
    for (int j = 0; j < n; ++j) {
      json chunk = json::array();
      for (int i = 0; i < dim * dim; ++i) chunk.push_back(v[static_cast<std::size_t>(j * dim * dim + i)]);
      out.push_back(parse_rotation(chunk, dim, fmt::format("{}[{}]", where, j)));
    }
    return out;
  }
  if (static_cast<int>(v.size()) != n) throw SyncError(ErrorKind::Parse, fmt::format("{}: expected {} rotations", where, n));
  for (int j = 0; j < n; ++j) out.push_back(parse_rotation(v[static_cast<std::size_t>(j)], dim, fmt::format("{}[{}]", where, j)));
  return out;
}

std::string optional_double(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

}  // namespace

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

std::string scenario_to_json(const Scenario& s) {
  const auto& g = s.graph;
  std::string out = fmt::format("{{\n  \"n\": {},\n  \"D\": {},\n  \"edges\": [", g.n(), g.dim());
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    const Edge& e = g.edges()[i];
    out += i ? ",\n" : "\n";
    out += fmt::format("    {{\"j\": {}, \"k\": {}, \"R\": ", e.j, e.k);
    append_matrix(out, e.measurement);
    out += fmt::format(", \"label\": \"{}\"}}", to_string(e.label));
  }
  out += g.edges().empty() ? "]" : "\n  ]";
  if (s.has_ground_truth()) {
    out += ",\n  \"ground_truth\": ";
    append_rotations(out, s.ground_truth, "    ");
  }
  out += ",\n  \"scenario\": {\n";
  out += fmt::format("    \"model\": {},\n    \"alpha\": {},\n    \"seed\": {},\n    \"rho\": {},\n    \"init\": ",
                     quoted(s.meta.model), format_double(s.meta.alpha), s.meta.seed, format_double(s.meta.rho));
  append_rotations(out, s.init, "      ");
  out += "\n  }\n}\n";
  return out;
}

Scenario scenario_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SyncError(ErrorKind::Parse, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SyncError(ErrorKind::Parse, "graph document must be a JSON object");
  const int n = field<int>(doc, "n", "graph");
  const int dim = field<int>(doc, "D", "graph");
  if (n < 1 || dim < 2) throw SyncError(ErrorKind::Parse, "graph: n must be >= 1 and D >= 2");
  const json edges_json = field<json>(doc, "edges", "graph");
  if (!edges_json.is_array()) throw SyncError(ErrorKind::Parse, "graph: 'edges' must be an array");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < edges_json.size(); ++i) {
    const auto& ej = edges_json[i];
    const std::string where = fmt::format("edges[{}]", i);
    Edge e;
    e.j = field<int>(ej, "j", where.c_str());
    e.k = field<int>(ej, "k", where.c_str());
    e.measurement = parse_rotation(field<json>(ej, "R", where.c_str()), dim, where + ".R");
    e.label = ej.contains("label") ? parse_edge_label(field<std::string>(ej, "label", where.c_str())) : EdgeLabel::Unknown;
    edges.push_back(std::move(e));
  }
  Scenario s{MeasurementGraph(n, dim, std::move(edges)), {}, {}, {}};
  if (doc.contains("ground_truth") && !doc["ground_truth"].is_null()) {
    s.ground_truth = parse_rotation_list(doc["ground_truth"], n, dim, "ground_truth");
  }
  s.init.assign(static_cast<std::size_t>(n), Rotation::identity(dim));
  if (doc.contains("scenario")) {
    const json& sc = doc["scenario"];
    if (!sc.is_object()) throw SyncError(ErrorKind::Parse, "'scenario' must be an object");
    if (sc.contains("model")) s.meta.model = field<std::string>(sc, "model", "scenario");
    if (sc.contains("alpha")) s.meta.alpha = field<double>(sc, "alpha", "scenario");
    if (sc.contains("seed")) s.meta.seed = field<std::uint64_t>(sc, "seed", "scenario");
    if (sc.contains("rho")) s.meta.rho = field<double>(sc, "rho", "scenario");
    if (sc.contains("init")) s.init = parse_rotation_list(sc["init"], n, dim, "scenario.init");
  }
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SyncError(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SyncError(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw SyncError(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

Scenario load_scenario(const std::filesystem::path& path) { return scenario_from_json(read_file(path)); }

void save_scenario(const Scenario& s, const std::filesystem::path& path) { write_file(path, scenario_to_json(s)); }

std::string trace_to_csv(const RunTrace& trace, int n, bool timing) {
  std::string out = std::string(kTraceHeader) + "\n";
  auto epoch_row = [&](const EpochRecord& e) {
    out += fmt::format("{},{},,{},{},{},{},{}\n", e.epoch, e.t, format_double(e.max_step), optional_double(e.delta),
                       optional_double(e.ball_radius), optional_double(e.l1_energy),
                       timing ? format_double(e.wall_ms) : std::string());
  };
  std::size_t next = 0;
  for (const auto& e : trace.epochs) {
    // Iterations belonging to epoch e have t in [(e-1) n, e n).
    while (next < trace.iterations.size() && e.epoch > 0 && trace.iterations[next].t < e.t) {
      const auto& it = trace.iterations[next++];
      out += fmt::format("{},{},{},{},,,{},\n", n > 0 ? it.t / n + 1 : 0, it.t, it.node, format_double(it.step_norm),
                         optional_double(it.l1_energy));
    }
    epoch_row(e);
  }
  return out;
}

std::string summary_to_json(const RunTrace& trace) {
  const auto d = trace.final_delta();
  std::string out = fmt::format("{{\n  \"status\": \"{}\",\n  \"final_delta\": {},\n  \"epochs\": {}",
                                to_string(trace.status), d ? format_double(*d) : "null", trace.completed_epochs());
  if (trace.coordinatewise_fixed) {
    out += fmt::format(",\n  \"coordinatewise_fixed\": {}", *trace.coordinatewise_fixed ? "true" : "false");
  }
  if (!trace.error.empty()) out += ",\n  \"error\": " + quoted(trace.error);
  out += "\n}\n";
  return out;
}

PointCloud points_from_text(const std::string& text) {
  std::vector<std::vector<double>> rows;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw SyncError(ErrorKind::Parse, std::string("invalid JSON: ") + e.what());
    }
    const json pts = doc.is_object() ? field<json>(doc, "points", "points file") : doc;
    try {
      for (const auto& p : pts) {
        if (p.is_number()) rows.push_back({p.get<double>()});
        else rows.push_back(p.get<std::vector<double>>());
      }
    } catch (const json::exception& e) {
      throw SyncError(ErrorKind::Parse, std::string("points must be numbers or arrays of numbers: ") + e.what());
    }
  } else {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ls(line);
      std::vector<double> row;
      std::string tok;
      while (ls >> tok) {
        try {
          std::size_t used = 0;
          row.push_back(std::stod(tok, &used));
          if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
          throw SyncError(ErrorKind::Parse, "not a number: '" + tok + "'");
        }
      }
      if (!row.empty()) rows.push_back(std::move(row));
    }
  }
  if (rows.empty()) throw SyncError(ErrorKind::Parse, "points file contains no points");
  const int dim = static_cast<int>(rows[0].size());
  std::vector<Eigen::VectorXd> pts;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != dim) throw SyncError(ErrorKind::Parse, "points have inconsistent dimensions");
    pts.push_back(Eigen::Map<const Eigen::VectorXd>(r.data(), dim));
  }
  return PointCloud(dim, std::move(pts));
}

PointCloud load_points(const std::filesystem::path& path) { return points_from_text(read_file(path)); }

}  // namespace ddsync
