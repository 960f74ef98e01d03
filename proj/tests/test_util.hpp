#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "lvg/graph.hpp"

namespace lvg_test {

struct RandomGraphOptions {
  int min_vertices = 2;
  int max_vertices = 12;
  double edge_prob = 0.45;
  double weight_lo = 0.1;
  double weight_hi = 10.0;
};

/// Random weighted graph with ids 0..n-1 and independent edges.
inline lvg::WeightedGraph random_graph(std::mt19937_64& rng,
                                       const RandomGraphOptions& opt = {}) {
  std::uniform_int_distribution<int> nv(opt.min_vertices, opt.max_vertices);
  std::uniform_real_distribution<double> wdist(opt.weight_lo, opt.weight_hi);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  int n = nv(rng);
  lvg::GraphBuilder b;
  for (int i = 0; i < n; ++i) b.add_vertex(i, wdist(rng));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (coin(rng) < opt.edge_prob) b.add_edge(i, j, wdist(rng));
    }
  }
  return b.build();
}

inline lvg::ScalarField random_field(std::mt19937_64& rng,
                                     const lvg::WeightedGraph& g,
                                     double lo = -5.0, double hi = 5.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  lvg::ScalarField u(g, 0.0);
  for (std::size_t i = 0; i < g.vertex_count(); ++i) u[i] = dist(rng);
  return u;
}

/// Recursive adaptive Simpson quadrature; independent oracle for the exact
/// sigma-integrals.
inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol = 1e-12, int depth = 30) {
  auto simpson = [&f](double lo, double hi) {
    return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(0.5 * (lo + hi)) + f(hi));
  };
  std::function<double(double, double, double, int)> rec =
      [&](double lo, double hi, double whole, int d) -> double {
    double mid = 0.5 * (lo + hi);
    double left = simpson(lo, mid);
    double right = simpson(mid, hi);
    if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
      return left + right + (left + right - whole) / 15.0;
    }
    return rec(lo, mid, left, d - 1) + rec(mid, hi, right, d - 1);
  };
  return rec(a, b, simpson(a, b), depth);
}

/// Plain bisection to ~1e-15; requires a sign change on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo,
                     double hi) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) {
    throw std::invalid_argument("bisect: no sign change on the bracket");
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// -sum_edges w (u(b)-u(a)) (v(b)-v(a)), the edge-sum side of the discrete
/// Green identity, computed straight from the edge list.
inline double green_edge_sum(const lvg::WeightedGraph& g,
                             const lvg::ScalarField& u,
                             const lvg::ScalarField& v) {
  double s = 0.0;
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    auto [ia, ib] = g.edge_endpoints(k);
    s -= g.edges()[k].weight * (u[ib] - u[ia]) * (v[ib] - v[ia]);
  }
  return s;
}

}  // namespace lvg_test
