#include "lvg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lvg {

namespace {

[[noreturn]] void throw_unknown_vertex(VertexId id) {
  throw std::invalid_argument("unknown vertex id " + std::to_string(id));
}

}  // namespace

std::size_t WeightedGraph::index_of(VertexId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw_unknown_vertex(id);
  return it->second;
}

GraphBuilder& GraphBuilder::add_vertex(VertexId id, double mu) {
  if (!std::isfinite(mu) || mu <= 0.0) {
    throw std::invalid_argument("vertex " + std::to_string(id) +
                                ": mu must be positive and finite");
  }
  auto [it, inserted] = g_.index_.emplace(id, g_.ids_.size());
  if (!inserted) {
    throw std::invalid_argument("duplicate vertex id " + std::to_string(id));
  }
  g_.ids_.push_back(id);
  g_.mu_.push_back(mu);
  g_.adj_.emplace_back();
  return *this;
}

GraphBuilder& GraphBuilder::add_edge(VertexId a, VertexId b, double weight) {
  if (a == b) {
    throw std::invalid_argument("self-loop at vertex " + std::to_string(a));
  }
  if (!std::isfinite(weight) || weight <= 0.0) {
    throw std::invalid_argument("edge {" + std::to_string(a) + "," +
                                std::to_string(b) +
                                "}: weight must be positive and finite");
  }
  auto ia = g_.index_.find(a);
  auto ib = g_.index_.find(b);
  if (ia == g_.index_.end()) throw_unknown_vertex(a);
  if (ib == g_.index_.end()) throw_unknown_vertex(b);

  std::size_t lo = std::min(ia->second, ib->second);
  std::size_t hi = std::max(ia->second, ib->second);
  std::uint64_t key = (static_cast<std::uint64_t>(lo) << 32) |
                      static_cast<std::uint64_t>(hi);
  if (!edge_seen_.emplace(key, true).second) {
    throw std::invalid_argument("duplicate edge {" + std::to_string(a) + "," +
                                std::to_string(b) + "}");
  }
  g_.edges_.push_back(Edge{std::min(a, b), std::max(a, b), weight});
  g_.ends_.emplace_back(ia->second, ib->second);
  g_.adj_[ia->second].push_back({ib->second, weight});
  g_.adj_[ib->second].push_back({ia->second, weight});
  return *this;
}

WeightedGraph GraphBuilder::build() {
  for (auto& nbrs : g_.adj_) {
    std::sort(nbrs.begin(), nbrs.end(),
              [](const WeightedGraph::Neighbor& x,
                 const WeightedGraph::Neighbor& y) { return x.index < y.index; });
  }
  g_.total_measure_ = 0.0;
  for (double m : g_.mu_) g_.total_measure_ += m;
  WeightedGraph out = std::move(g_);
  g_ = WeightedGraph();
  edge_seen_.clear();
  return out;
}

VertexSet::VertexSet(const WeightedGraph& host, std::span<const VertexId> members)
    : host_(&host) {
  indices_.reserve(members.size());
  for (VertexId id : members) indices_.push_back(host.index_of(id));
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
  mask_.assign(host.vertex_count(), 0);
  for (std::size_t i : indices_) mask_[i] = 1;
}

VertexSet VertexSet::from_indices(const WeightedGraph& host,
                                  std::vector<std::size_t> indices) {
  VertexSet s(host);
  for (std::size_t i : indices) {
    if (i >= host.vertex_count()) {
      throw std::invalid_argument("vertex index out of range: " +
                                  std::to_string(i));
    }
  }
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  s.indices_ = std::move(indices);
  s.mask_.assign(host.vertex_count(), 0);
  for (std::size_t i : s.indices_) s.mask_[i] = 1;
  return s;
}

std::vector<VertexId> VertexSet::ids() const {
  std::vector<VertexId> out;
  out.reserve(indices_.size());
  for (std::size_t i : indices_) out.push_back(host_->id_at(i));
  std::sort(out.begin(), out.end());
  return out;
}

VertexSet VertexSet::complement() const {
  std::vector<std::size_t> rest;
  rest.reserve(host_->vertex_count() - indices_.size());
  for (std::size_t i = 0; i < host_->vertex_count(); ++i) {
    if (!mask_[i]) rest.push_back(i);
  }
  return from_indices(*host_, std::move(rest));
}

ScalarField::ScalarField(const WeightedGraph& host, double fill)
    : host_(&host), values_(host.vertex_count(), fill) {
  if (!std::isfinite(fill)) {
    throw std::invalid_argument("scalar field values must be finite");
  }
}

ScalarField::ScalarField(const WeightedGraph& host, std::vector<double> values)
    : host_(&host), values_(std::move(values)) {
  if (values_.size() != host.vertex_count()) {
    throw std::invalid_argument("scalar field size does not match host graph");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("scalar field values must be finite");
    }
  }
}

double weighted_degree_at(const WeightedGraph& g, std::size_t index) {
  double sum = 0.0;
  for (const auto& nb : g.neighbors_at(index)) sum += nb.weight;
  return sum / g.mu_at(index);
}

double weighted_degree(const WeightedGraph& g, VertexId x) {
  return weighted_degree_at(g, g.index_of(x));
}

double deg_sup(const WeightedGraph& g) {
  double sup = 0.0;
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    sup = std::max(sup, weighted_degree_at(g, i));
  }
  return sup;
}

double laplacian_at(const ScalarField& u, std::size_t index) {
  const WeightedGraph& g = u.host();
  double sum = 0.0;
  for (const auto& nb : g.neighbors_at(index)) {
    sum += nb.weight * (u[nb.index] - u[index]);
  }
  return sum / g.mu_at(index);
}

double laplacian(const ScalarField& u, VertexId x) {
  return laplacian_at(u, u.host().index_of(x));
}

ScalarField laplacian_field(const ScalarField& u) {
  ScalarField out(u.host());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = laplacian_at(u, i);
  return out;
}

double integral(const ScalarField& f) {
  const WeightedGraph& g = f.host();
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += f[i] * g.mu_at(i);
  return sum;
}

double energy(const ScalarField& u) {
  const WeightedGraph& g = u.host();
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += std::exp(u[i]) * g.mu_at(i);
  return sum;
}

double energy_on(const ScalarField& u, const VertexSet& omega) {
  const WeightedGraph& g = u.host();
  double sum = 0.0;
  for (std::size_t i : omega.indices()) sum += std::exp(u[i]) * g.mu_at(i);
  return sum;
}

double set_measure(const VertexSet& s) {
  double sum = 0.0;
  for (std::size_t i : s.indices()) sum += s.host().mu_at(i);
  return sum;
}

EdgeBoundary edge_boundary(const VertexSet& s) {
  const WeightedGraph& g = s.host();
  EdgeBoundary out;
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    auto [ia, ib] = g.edge_endpoints(k);
    if (s.contains_index(ia) != s.contains_index(ib)) {
      out.edges.push_back(g.edges()[k]);
      out.weight += g.edges()[k].weight;
    }
  }
  return out;
}

}  // namespace lvg
