#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lvg/graph.hpp"

namespace lvg {

/// Grid coordinates attached to a vertex of a lattice window.
struct GridCoord {
  VertexId id = 0;
  int i = 0;  ///< row
  int j = 0;  ///< column
};

/// Optional metadata block written by the lattice generator: window size,
/// ghost flag, per-vertex grid coordinates and the interior/boundary split.
/// Plain graph files (no "lattice" key) load fine without it.
struct LatticeMeta {
  int n = 0;
  bool ghost = false;
  std::vector<GridCoord> coords;
  std::vector<VertexId> interior;
  std::vector<VertexId> boundary;

  /// Coordinate lookup; returns nullptr when the id carries no coordinates.
  const GridCoord* find_coord(VertexId id) const;
};

/// Raised on malformed graph/solution files. line == 0 when the position is
/// unknown; otherwise 1-based within the named file.
class GraphFormatError : public std::runtime_error {
 public:
  GraphFormatError(std::string file, int line, const std::string& message);

  const std::string& file() const { return file_; }
  int line() const { return line_; }

 private:
  std::string file_;
  int line_;
};

struct LoadedGraph {
  WeightedGraph graph;
  std::optional<LatticeMeta> lattice;
};

/// Parses the graph JSON format:
///   {"vertices":[{"id":int,"mu":float},...],
///    "edges":[{"a":int,"b":int,"w":float},...]}
/// plus an optional "lattice" metadata object. Duplicate edges, self-loops and
/// non-positive mu/w are rejected with a GraphFormatError pointing at the
/// offending entry's line.
LoadedGraph parse_graph_json(const std::string& text,
                             const std::string& name = "<string>");
LoadedGraph load_graph_file(const std::string& path);

std::string graph_to_json(const WeightedGraph& g,
                          const LatticeMeta* meta = nullptr);
void save_graph_file(const std::string& path, const WeightedGraph& g,
                     const LatticeMeta* meta = nullptr);

// ---- solution / value CSV ---------------------------------------------------
//
// Solutions travel as CSV with header `vertex_id,i,j,u`; i and j are left
// empty when no grid coordinates are known. Rows are emitted in vertex index
// order with shortest round-trip float formatting, so output is
// byte-deterministic.

std::string solution_to_csv(const ScalarField& u,
                            const LatticeMeta* meta = nullptr);
void save_solution_csv(const std::string& path, const ScalarField& u,
                       const LatticeMeta* meta = nullptr);

/// Reads a solution covering every vertex of g exactly once.
ScalarField parse_solution_csv(const std::string& text, const WeightedGraph& g,
                               const std::string& name = "<string>");
ScalarField load_solution_csv(const std::string& path, const WeightedGraph& g);

/// Reads (vertex_id, value) pairs from a CSV with header `vertex_id,u` or
/// `vertex_id,i,j,u`; used for boundary data files. Ids must exist in g but
/// need not cover it.
std::vector<std::pair<VertexId, double>> load_vertex_values(
    const std::string& path, const WeightedGraph& g);

/// Reads an entire file into a string. Throws GraphFormatError on I/O failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace lvg
