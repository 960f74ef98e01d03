#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace lvg {

using VertexId = std::int64_t;

/// Undirected edge with positive weight; endpoints are stored with a < b.
struct Edge {
  VertexId a = 0;
  VertexId b = 0;
  double weight = 0.0;
};

/// Finite weighted graph (V, E, mu, w): simple, undirected, with a positive
/// measure mu on vertices and positive weights w on edges. Immutable after
/// construction, so instances can be shared freely across threads.
///
/// Vertices carry opaque integer ids; internally they are mapped to dense
/// indices 0..vertex_count()-1 in insertion order. Hot loops work on indices,
/// id-based lookups go through index_of().
class WeightedGraph {
 public:
  struct Neighbor {
    std::size_t index;
    double weight;
  };

  std::size_t vertex_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  bool contains(VertexId id) const { return index_.find(id) != index_.end(); }

  /// Dense index of a vertex id. Throws std::invalid_argument for unknown ids.
  std::size_t index_of(VertexId id) const;
  VertexId id_at(std::size_t index) const { return ids_.at(index); }

  double mu(VertexId id) const { return mu_[index_of(id)]; }
  double mu_at(std::size_t index) const { return mu_[index]; }
  double total_measure() const { return total_measure_; }

  std::span<const Edge> edges() const { return edges_; }
  /// Endpoint indices of edge k, parallel to edges().
  std::pair<std::size_t, std::size_t> edge_endpoints(std::size_t k) const {
    return ends_[k];
  }

  std::span<const Neighbor> neighbors_at(std::size_t index) const {
    return adj_[index];
  }
  std::span<const VertexId> vertex_ids() const { return ids_; }

 private:
  friend class GraphBuilder;
  WeightedGraph() = default;

  std::vector<VertexId> ids_;
  std::vector<double> mu_;
  std::unordered_map<VertexId, std::size_t> index_;
  std::vector<Edge> edges_;
  std::vector<std::pair<std::size_t, std::size_t>> ends_;
  std::vector<std::vector<Neighbor>> adj_;
  double total_measure_ = 0.0;
};

/// Incremental construction with up-front validation: rejects duplicate
/// vertices/edges, self-loops, unknown endpoints and non-positive or
/// non-finite mu/w with std::invalid_argument.
class GraphBuilder {
 public:
  GraphBuilder& add_vertex(VertexId id, double mu);
  GraphBuilder& add_edge(VertexId a, VertexId b, double weight);

  std::size_t vertex_count() const { return g_.ids_.size(); }

  /// Finalizes the graph. The builder is left empty.
  WeightedGraph build();

 private:
  WeightedGraph g_;
  std::unordered_map<std::uint64_t, bool> edge_seen_;  // key on index pair
};

/// A subset of the vertices of a host graph. Stores sorted dense indices plus
/// a membership mask for O(1) queries. The host must outlive the set.
class VertexSet {
 public:
  VertexSet(const WeightedGraph& host, std::span<const VertexId> members);
  static VertexSet from_indices(const WeightedGraph& host,
                                std::vector<std::size_t> indices);

  const WeightedGraph& host() const { return *host_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }

  bool contains_index(std::size_t index) const { return mask_[index] != 0; }
  bool contains(VertexId id) const {
    return host_->contains(id) && contains_index(host_->index_of(id));
  }

  /// Sorted dense indices of the members.
  const std::vector<std::size_t>& indices() const { return indices_; }
  /// Member ids, sorted ascending.
  std::vector<VertexId> ids() const;

  VertexSet complement() const;

 private:
  VertexSet(const WeightedGraph& host) : host_(&host) {}

  const WeightedGraph* host_;
  std::vector<std::size_t> indices_;
  std::vector<std::uint8_t> mask_;
};

/// Real-valued function on the vertices of a host graph, stored densely by
/// vertex index. Values are validated to be finite at construction; the host
/// must outlive the field.
class ScalarField {
 public:
  explicit ScalarField(const WeightedGraph& host, double fill = 0.0);
  ScalarField(const WeightedGraph& host, std::vector<double> values);

  const WeightedGraph& host() const { return *host_; }
  std::size_t size() const { return values_.size(); }

  double operator[](std::size_t index) const { return values_[index]; }
  double& operator[](std::size_t index) { return values_[index]; }

  double at(VertexId id) const { return values_[host_->index_of(id)]; }
  void set(VertexId id, double v) { values_[host_->index_of(id)] = v; }

  std::span<const double> values() const { return values_; }

 private:
  const WeightedGraph* host_;
  std::vector<double> values_;
};

// ---- measures, degrees, Laplacian -----------------------------------------

/// Deg(x) = sum_{y~x} w_xy / mu_x.
double weighted_degree(const WeightedGraph& g, VertexId x);
double weighted_degree_at(const WeightedGraph& g, std::size_t index);

/// Deg(G) = max_x Deg(x). Zero on an empty graph.
double deg_sup(const WeightedGraph& g);

/// Delta u(x) = (1/mu_x) sum_{y~x} w_xy (u(y) - u(x)).
double laplacian(const ScalarField& u, VertexId x);
double laplacian_at(const ScalarField& u, std::size_t index);
ScalarField laplacian_field(const ScalarField& u);

/// int_V f = sum_x f(x) mu_x.
double integral(const ScalarField& f);

/// int_V e^u.
double energy(const ScalarField& u);
/// int_Omega e^u over a vertex subset.
double energy_on(const ScalarField& u, const VertexSet& omega);

/// mu(Omega) = sum_{x in Omega} mu_x.
double set_measure(const VertexSet& s);

struct EdgeBoundary {
  std::vector<Edge> edges;  ///< edges with exactly one endpoint in the set
  double weight = 0.0;      ///< w(boundary)
};

/// Edge boundary of a vertex set within its host graph.
EdgeBoundary edge_boundary(const VertexSet& s);

}  // namespace lvg
