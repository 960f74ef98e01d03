#include "lvg/lattice.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace lvg {

LatticeWindow make_lattice_window(int n, bool with_ghost) {
  if (n < 1) throw std::invalid_argument("lattice window size must be >= 1");

  // (i, j) -> id, interior first in row-major order, then ghosts by (i, j).
  std::map<std::pair<int, int>, VertexId> ids;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      ids[{i, j}] = static_cast<VertexId>(i) * n + j;
    }
  }
  LatticeMeta meta;
  meta.n = n;
  meta.ghost = with_ghost;
  if (with_ghost) {
    std::vector<std::pair<int, int>> ring;
    for (int j = 0; j < n; ++j) ring.push_back({-1, j});
    for (int i = 0; i < n; ++i) {
      ring.push_back({i, -1});
      ring.push_back({i, n});
    }
    for (int j = 0; j < n; ++j) ring.push_back({n, j});
    std::sort(ring.begin(), ring.end());
    VertexId next = static_cast<VertexId>(n) * n;
    for (auto& p : ring) ids[p] = next++;
  }

  // insert vertices by id so dense index order matches id order
  GraphBuilder builder;
  {
    std::vector<std::pair<VertexId, std::pair<int, int>>> by_id;
    by_id.reserve(ids.size());
    for (const auto& [p, id] : ids) by_id.push_back({id, p});
    std::sort(by_id.begin(), by_id.end());
    for (const auto& [id, p] : by_id) {
      builder.add_vertex(id, 4.0);
      meta.coords.push_back({id, p.first, p.second});
    }
  }
  for (const auto& [p, id] : ids) {
    for (auto [di, dj] : {std::pair{0, 1}, std::pair{1, 0}}) {
      auto q = std::pair{p.first + di, p.second + dj};
      auto it = ids.find(q);
      if (it != ids.end()) builder.add_edge(id, it->second, 1.0);
    }
  }

  for (const auto& [p, id] : ids) {
    bool interior =
        0 <= p.first && p.first < n && 0 <= p.second && p.second < n;
    (interior ? meta.interior : meta.boundary).push_back(id);
  }
  std::sort(meta.interior.begin(), meta.interior.end());
  std::sort(meta.boundary.begin(), meta.boundary.end());

  LatticeWindow out{builder.build(), std::move(meta)};
  return out;
}

}  // namespace lvg
