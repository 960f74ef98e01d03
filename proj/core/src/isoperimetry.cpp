#include "lvg/isoperimetry.hpp"

#include <algorithm>
#include <future>
#include <limits>

#include <nlohmann/json.hpp>

#include "lvg/lattice.hpp"

namespace lvg {

SubsetLimitError::SubsetLimitError(std::size_t size, std::size_t limit)
    : std::runtime_error("admissible set has " + std::to_string(size) +
                         " vertices, over the enumeration limit of " +
                         std::to_string(limit) +
                         " (raise the limit explicitly to allow 2^" +
                         std::to_string(size) + " subsets)"),
      size_(size),
      limit_(limit) {}

double iso_ratio(const VertexSet& s) {
  if (s.empty()) {
    throw std::invalid_argument("iso_ratio: empty vertex set");
  }
  double cut = edge_boundary(s).weight;
  return cut * cut / set_measure(s);
}

namespace {

struct Best {
  double ratio = std::numeric_limits<double>::infinity();
  std::vector<VertexId> ids;  // sorted; empty means unset
};

bool better(double ratio, const std::vector<VertexId>& ids, const Best& best) {
  if (ratio < best.ratio) return true;
  if (ratio > best.ratio) return false;
  return best.ids.empty() ||
         std::lexicographical_compare(ids.begin(), ids.end(), best.ids.begin(),
                                      best.ids.end());
}

// Scans subset masks in [lo, hi). Bit p of a mask selects member p of the
// admissible index list.
Best scan_range(const VertexSet& admissible, std::uint64_t lo, std::uint64_t hi) {
  const WeightedGraph& g = admissible.host();
  const auto& members = admissible.indices();
  const std::size_t n = members.size();

  constexpr std::size_t kNoBit = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> bit_of(g.vertex_count(), kNoBit);
  for (std::size_t p = 0; p < n; ++p) bit_of[members[p]] = p;

  Best best;
  for (std::uint64_t mask = lo; mask < hi; ++mask) {
    double cut = 0.0;
    double mu = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      if (!((mask >> p) & 1)) continue;
      std::size_t x = members[p];
      mu += g.mu_at(x);
      for (const auto& nb : g.neighbors_at(x)) {
        std::size_t q = bit_of[nb.index];
        bool inside = q != kNoBit && ((mask >> q) & 1);
        if (!inside) cut += nb.weight;
      }
    }
    double ratio = cut * cut / mu;
    if (ratio > best.ratio) continue;
    std::vector<VertexId> ids;
    for (std::size_t p = 0; p < n; ++p) {
      if ((mask >> p) & 1) ids.push_back(g.id_at(members[p]));
    }
    std::sort(ids.begin(), ids.end());
    if (better(ratio, ids, best)) {
      best.ratio = ratio;
      best.ids = std::move(ids);
    }
  }
  return best;
}

}  // namespace

IsoperimetricReport brute_force_cis(const VertexSet& admissible,
                                    std::size_t limit, unsigned workers) {
  const std::size_t n = admissible.size();
  if (n == 0) {
    throw std::invalid_argument("brute_force_cis: empty admissible set");
  }
  if (n > limit) throw SubsetLimitError(n, limit);
  if (n > 62) throw SubsetLimitError(n, 62);

  const std::uint64_t total = (std::uint64_t{1} << n);  // masks 1 .. total-1
  if (workers < 1) workers = 1;

  Best best;
  if (workers == 1 || total < 1024) {
    best = scan_range(admissible, 1, total);
  } else {
    std::vector<std::future<Best>> parts;
    std::uint64_t chunk = (total - 1) / workers + 1;
    for (unsigned wkr = 0; wkr < workers; ++wkr) {
      std::uint64_t lo = std::max<std::uint64_t>(1, wkr * chunk);
      std::uint64_t hi = std::min<std::uint64_t>(total, (wkr + 1) * chunk);
      if (lo >= hi) continue;
      parts.push_back(std::async(std::launch::async, [&admissible, lo, hi] {
        return scan_range(admissible, lo, hi);
      }));
    }
    for (auto& f : parts) {
      Best b = f.get();
      if (!b.ids.empty() && better(b.ratio, b.ids, best)) best = std::move(b);
    }
  }

  IsoperimetricReport report;
  report.c_is_upper = best.ratio;
  report.witness = std::move(best.ids);
  report.enumerated_count = total - 1;
  report.exhaustive = true;
  return report;
}

std::vector<std::pair<int, double>> square_family_scan(int k_max) {
  if (k_max < 1) {
    throw std::invalid_argument("square_family_scan: k_max must be >= 1");
  }
  std::vector<std::pair<int, double>> out;
  out.reserve(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) {
    double ratio = (4.0 * k) * (4.0 * k) / (4.0 * k * k);
    if (k <= 4) {
      // cross-check the closed form against a real window build
      LatticeWindow win = make_lattice_window(k, true);
      VertexSet square(win.graph, win.meta.interior);
      double built = iso_ratio(square);
      if (built != ratio) {
        throw std::logic_error("square_family_scan: closed form mismatch at k=" +
                               std::to_string(k));
      }
    }
    out.emplace_back(k, ratio);
  }
  return out;
}

std::string isoperimetric_report_to_json(const IsoperimetricReport& r) {
  nlohmann::ordered_json j;
  j["c_is_upper"] = r.c_is_upper;
  j["witness"] = r.witness;
  j["enumerated_count"] = r.enumerated_count;
  j["exhaustive"] = r.exhaustive;
  return j.dump(2) + "\n";
}

}  // namespace lvg
