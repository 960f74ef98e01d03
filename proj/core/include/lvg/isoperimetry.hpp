#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lvg/graph.hpp"

namespace lvg {

/// Result of a brute-force scan for the 2-dimensional isoperimetric constant.
/// c_is_upper is only an upper bound on C_IS of any infinite host the
/// admissible window is cut from: `exhaustive` refers to the window, never to
/// the infimum over all finite subsets of an infinite graph.
struct IsoperimetricReport {
  double c_is_upper = 0.0;
  std::vector<VertexId> witness;  ///< sorted ids of the minimizing subset
  std::uint64_t enumerated_count = 0;
  bool exhaustive = false;
};

/// Raised when an enumeration request exceeds the subset limit.
class SubsetLimitError : public std::runtime_error {
 public:
  SubsetLimitError(std::size_t size, std::size_t limit);
  std::size_t size() const { return size_; }
  std::size_t limit() const { return limit_; }

 private:
  std::size_t size_;
  std::size_t limit_;
};

/// (w(boundary Omega))^2 / mu(Omega). Throws std::invalid_argument on the
/// empty set. Boundary edges are counted in the host graph, so edges leaving
/// an admissible window contribute to the cut.
double iso_ratio(const VertexSet& s);

/// Scans every nonempty subset of `admissible` (2^n - 1 of them) and returns
/// the minimum ratio with its witness. Ties keep the lexicographically
/// smallest sorted id list. Refuses with SubsetLimitError when the admissible
/// set exceeds `limit` (default 24). `workers` > 1 partitions the subset index
/// range; the reduction is deterministic regardless of worker count.
IsoperimetricReport brute_force_cis(const VertexSet& admissible,
                                    std::size_t limit = 24,
                                    unsigned workers = 1);

/// Ratios of the k-by-k squares of the standard lattice: exactly 4 for every
/// k, by the closed form (4k)^2 / (4k^2). Squares with k <= 4 are
/// cross-checked against an actual window build.
std::vector<std::pair<int, double>> square_family_scan(int k_max);

std::string isoperimetric_report_to_json(const IsoperimetricReport& r);

}  // namespace lvg
