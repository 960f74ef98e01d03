#pragma once

#include "lvg/graph.hpp"
#include "lvg/graph_io.hpp"

namespace lvg {

struct LatticeWindow {
  WeightedGraph graph;
  LatticeMeta meta;
};

/// Builds the n-by-n window of the standard square lattice with mu == 4 and
/// w == 1. With `with_ghost` the window carries one extra ring of boundary
/// vertices: the orthogonal lattice neighbors of the interior box (corners
/// excluded, they share no edge with it). The graph is the subgraph of the
/// lattice induced on the window vertex set, so ghost vertices adjacent along
/// a side are connected too.
///
/// Ids are deterministic: the interior cell in row i, column j gets id
/// i*n + j (row-major), and ghost vertices follow from id n*n, ordered by
/// (i, j).
LatticeWindow make_lattice_window(int n, bool with_ghost);

}  // namespace lvg
