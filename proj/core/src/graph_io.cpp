#include "lvg/graph_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "lvg/format.hpp"

namespace lvg {

using nlohmann::json;
using nlohmann::ordered_json;

const GridCoord* LatticeMeta::find_coord(VertexId id) const {
  for (const auto& c : coords) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

GraphFormatError::GraphFormatError(std::string file, int line,
                                   const std::string& message)
    : std::runtime_error(line > 0 ? file + ":" + std::to_string(line) + ": " + message
                                  : file + ": " + message),
      file_(std::move(file)),
      line_(line) {}

namespace {

int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

// 1-based start lines of the object elements of the top-level "vertices" and
// "edges" arrays, recovered by a small scan of the raw text. Lets validation
// errors name the exact line of the offending entry.
struct ElementLines {
  std::vector<int> vertices;
  std::vector<int> edges;
};

ElementLines scan_element_lines(const std::string& text) {
  ElementLines out;
  int line = 1;
  int depth = 0;
  bool in_string = false, escaped = false;
  std::string current, pending_key;
  int which = 0;  // 1 = vertices, 2 = edges

  for (char c : text) {
    if (c == '\n') ++line;
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      } else {
        current.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_string = true;
        current.clear();
        break;
      case ':':
        if (depth == 1) pending_key = current;
        break;
      case '[':
        if (depth == 1 && which == 0) {
          if (pending_key == "vertices") which = 1;
          if (pending_key == "edges") which = 2;
        }
        ++depth;
        break;
      case '{':
        if (which == 1 && depth == 2) out.vertices.push_back(line);
        if (which == 2 && depth == 2) out.edges.push_back(line);
        ++depth;
        break;
      case ']':
        --depth;
        if (depth == 1) which = 0;
        break;
      case '}':
        --depth;
        break;
      default:
        break;
    }
  }
  return out;
}

int element_line(const std::vector<int>& lines, std::size_t k) {
  return k < lines.size() ? lines[k] : 0;
}

double require_number(const json& obj, const char* key, const std::string& name,
                      int line, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    throw GraphFormatError(name, line,
                           where + ": missing or non-numeric \"" + key + "\"");
  }
  return obj[key].get<double>();
}

VertexId require_id(const json& obj, const char* key, const std::string& name,
                    int line, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number_integer()) {
    throw GraphFormatError(name, line,
                           where + ": missing or non-integer \"" + key + "\"");
  }
  return obj[key].get<VertexId>();
}

LatticeMeta parse_lattice_meta(const json& j, const WeightedGraph& g,
                               const std::string& name) {
  LatticeMeta meta;
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer()) {
    throw GraphFormatError(name, 0, "lattice: missing integer \"n\"");
  }
  meta.n = j["n"].get<int>();
  if (meta.n < 1) throw GraphFormatError(name, 0, "lattice: n must be >= 1");
  meta.ghost = j.value("ghost", false);
  if (j.contains("coords")) {
    for (const auto& c : j["coords"]) {
      GridCoord gc;
      gc.id = require_id(c, "id", name, 0, "lattice coords");
      gc.i = static_cast<int>(require_id(c, "i", name, 0, "lattice coords"));
      gc.j = static_cast<int>(require_id(c, "j", name, 0, "lattice coords"));
      if (!g.contains(gc.id)) {
        throw GraphFormatError(name, 0,
                               "lattice coords: unknown vertex id " +
                                   std::to_string(gc.id));
      }
      meta.coords.push_back(gc);
    }
  }
  auto read_ids = [&](const char* key, std::vector<VertexId>& out) {
    if (!j.contains(key)) return;
    for (const auto& v : j[key]) {
      if (!v.is_number_integer()) {
        throw GraphFormatError(name, 0, std::string("lattice ") + key +
                                            ": entries must be integer ids");
      }
      VertexId id = v.get<VertexId>();
      if (!g.contains(id)) {
        throw GraphFormatError(name, 0, std::string("lattice ") + key +
                                            ": unknown vertex id " +
                                            std::to_string(id));
      }
      out.push_back(id);
    }
  };
  read_ids("interior", meta.interior);
  read_ids("boundary", meta.boundary);
  if (!meta.interior.empty() && !meta.boundary.empty()) {
    if (meta.interior.size() + meta.boundary.size() != g.vertex_count()) {
      throw GraphFormatError(
          name, 0, "lattice: interior and boundary must partition the vertices");
    }
    std::unordered_set<VertexId> seen(meta.interior.begin(), meta.interior.end());
    for (VertexId id : meta.boundary) {
      if (seen.count(id)) {
        throw GraphFormatError(name, 0,
                               "lattice: vertex " + std::to_string(id) +
                                   " is both interior and boundary");
      }
    }
  }
  return meta;
}

}  // namespace

LoadedGraph parse_graph_json(const std::string& text, const std::string& name) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw GraphFormatError(name, line_of_byte(text, e.byte), e.what());
  }
  if (!root.is_object()) {
    throw GraphFormatError(name, 1, "top level must be a JSON object");
  }
  if (!root.contains("vertices") || !root["vertices"].is_array()) {
    throw GraphFormatError(name, 1, "missing \"vertices\" array");
  }
  if (!root.contains("edges") || !root["edges"].is_array()) {
    throw GraphFormatError(name, 1, "missing \"edges\" array");
  }

  ElementLines lines = scan_element_lines(text);
  GraphBuilder builder;

  const auto& vertices = root["vertices"];
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    int line = element_line(lines.vertices, k);
    const std::string where = "vertices[" + std::to_string(k) + "]";
    if (!vertices[k].is_object()) {
      throw GraphFormatError(name, line, where + ": expected an object");
    }
    VertexId id = require_id(vertices[k], "id", name, line, where);
    double mu = require_number(vertices[k], "mu", name, line, where);
    try {
      builder.add_vertex(id, mu);
    } catch (const std::invalid_argument& e) {
      throw GraphFormatError(name, line, where + ": " + e.what());
    }
  }

  const auto& edges = root["edges"];
  for (std::size_t k = 0; k < edges.size(); ++k) {
    int line = element_line(lines.edges, k);
    const std::string where = "edges[" + std::to_string(k) + "]";
    if (!edges[k].is_object()) {
      throw GraphFormatError(name, line, where + ": expected an object");
    }
    VertexId a = require_id(edges[k], "a", name, line, where);
    VertexId b = require_id(edges[k], "b", name, line, where);
    double w = require_number(edges[k], "w", name, line, where);
    try {
      builder.add_edge(a, b, w);
    } catch (const std::invalid_argument& e) {
      throw GraphFormatError(name, line, where + ": " + e.what());
    }
  }

  LoadedGraph out{builder.build(), std::nullopt};
  if (root.contains("lattice")) {
    out.lattice = parse_lattice_meta(root["lattice"], out.graph, name);
  }
  return out;
}

LoadedGraph load_graph_file(const std::string& path) {
  return parse_graph_json(read_text_file(path), path);
}

std::string graph_to_json(const WeightedGraph& g, const LatticeMeta* meta) {
  ordered_json root;
  root["vertices"] = ordered_json::array();
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    root["vertices"].push_back({{"id", g.id_at(i)}, {"mu", g.mu_at(i)}});
  }
  root["edges"] = ordered_json::array();
  for (const Edge& e : g.edges()) {
    root["edges"].push_back({{"a", e.a}, {"b", e.b}, {"w", e.weight}});
  }
  if (meta != nullptr) {
    ordered_json lat;
    lat["n"] = meta->n;
    lat["ghost"] = meta->ghost;
    lat["coords"] = ordered_json::array();
    for (const auto& c : meta->coords) {
      lat["coords"].push_back({{"id", c.id}, {"i", c.i}, {"j", c.j}});
    }
    lat["interior"] = meta->interior;
    lat["boundary"] = meta->boundary;
    root["lattice"] = std::move(lat);
  }
  return root.dump(2) + "\n";
}

void save_graph_file(const std::string& path, const WeightedGraph& g,
                     const LatticeMeta* meta) {
  write_text_file(path, graph_to_json(g, meta));
}

std::string solution_to_csv(const ScalarField& u, const LatticeMeta* meta) {
  const WeightedGraph& g = u.host();
  std::unordered_map<VertexId, const GridCoord*> coord;
  if (meta != nullptr) {
    for (const auto& c : meta->coords) coord[c.id] = &c;
  }
  std::string out = "vertex_id,i,j,u\n";
  for (std::size_t idx = 0; idx < g.vertex_count(); ++idx) {
    VertexId id = g.id_at(idx);
    out += std::to_string(id);
    auto it = coord.find(id);
    if (it != coord.end()) {
      out += "," + std::to_string(it->second->i) + "," +
             std::to_string(it->second->j);
    } else {
      out += ",,";
    }
    out += "," + format_double(u[idx]) + "\n";
  }
  return out;
}

void save_solution_csv(const std::string& path, const ScalarField& u,
                       const LatticeMeta* meta) {
  write_text_file(path, solution_to_csv(u, meta));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  out.push_back(cell);
  return out;
}

struct CsvRows {
  std::vector<std::pair<VertexId, double>> values;  // (id, u)
};

CsvRows parse_value_rows(const std::string& text, const WeightedGraph& g,
                         const std::string& name) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::size_t id_col = 0, u_col = 0;
  CsvRows rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto cells = split_csv_line(line);
    if (lineno == 1) {
      if (cells.size() == 4 && cells[0] == "vertex_id" && cells[3] == "u") {
        id_col = 0;
        u_col = 3;
      } else if (cells.size() == 2 && cells[0] == "vertex_id" && cells[1] == "u") {
        id_col = 0;
        u_col = 1;
      } else {
        throw GraphFormatError(
            name, 1, "expected header \"vertex_id,i,j,u\" or \"vertex_id,u\"");
      }
      continue;
    }
    if (cells.size() <= u_col) {
      throw GraphFormatError(name, lineno, "too few columns");
    }
    VertexId id;
    double u;
    try {
      id = static_cast<VertexId>(parse_int(cells[id_col]));
      u = parse_double(cells[u_col]);
    } catch (const std::invalid_argument& e) {
      throw GraphFormatError(name, lineno, e.what());
    }
    if (!g.contains(id)) {
      throw GraphFormatError(name, lineno,
                             "unknown vertex id " + std::to_string(id));
    }
    if (!std::isfinite(u)) {
      throw GraphFormatError(name, lineno, "value must be finite");
    }
    rows.values.emplace_back(id, u);
  }
  return rows;
}

}  // namespace

ScalarField parse_solution_csv(const std::string& text, const WeightedGraph& g,
                               const std::string& name) {
  CsvRows rows = parse_value_rows(text, g, name);
  std::vector<double> values(g.vertex_count());
  std::vector<std::uint8_t> seen(g.vertex_count(), 0);
  for (const auto& [id, u] : rows.values) {
    std::size_t idx = g.index_of(id);
    if (seen[idx]) {
      throw GraphFormatError(name, 0,
                             "vertex " + std::to_string(id) + " appears twice");
    }
    seen[idx] = 1;
    values[idx] = u;
  }
  for (std::size_t idx = 0; idx < g.vertex_count(); ++idx) {
    if (!seen[idx]) {
      throw GraphFormatError(
          name, 0, "no value for vertex " + std::to_string(g.id_at(idx)));
    }
  }
  return ScalarField(g, std::move(values));
}

ScalarField load_solution_csv(const std::string& path, const WeightedGraph& g) {
  return parse_solution_csv(read_text_file(path), g, path);
}

std::vector<std::pair<VertexId, double>> load_vertex_values(
    const std::string& path, const WeightedGraph& g) {
  return parse_value_rows(read_text_file(path), g, path).values;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphFormatError(path, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GraphFormatError(path, 0, "cannot open file for writing");
  out << text;
  if (!out) throw GraphFormatError(path, 0, "write failed");
}

}  // namespace lvg
