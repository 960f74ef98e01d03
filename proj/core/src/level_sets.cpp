#include "lvg/level_sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "lvg/format.hpp"

namespace lvg {

namespace {

struct CutStats {
  double weight = 0.0;
  double flux = 0.0;
  double g = 0.0;
};

CutStats cut_stats(const ScalarField& u, double sigma) {
  const WeightedGraph& g = u.host();
  CutStats s;
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    auto [ia, ib] = g.edge_endpoints(k);
    double lo = u[ia], hi = u[ib];
    if (lo > hi) std::swap(lo, hi);
    if (lo < sigma && sigma <= hi) {
      double w = g.edges()[k].weight;
      double gap = hi - lo;
      s.weight += w;
      s.flux += w * gap;
      s.g += w / gap;
    }
  }
  return s;
}

constexpr double kIdentityTol = 1e-10;    // relative, floating-point identities
constexpr double kInequalityTol = 1e-8;   // slack floor, audited inequalities

bool identity_ok(double gap, double magnitude) {
  return std::abs(gap) <= kIdentityTol * (1.0 + magnitude);
}

bool slack_ok(double slack, double magnitude) {
  return slack >= -kInequalityTol * (1.0 + magnitude);
}

}  // namespace

VertexSet superlevel_set(const ScalarField& u, double sigma) {
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] >= sigma) members.push_back(i);
  }
  return VertexSet::from_indices(u.host(), std::move(members));
}

std::vector<CutEdge> cut_edges(const ScalarField& u, double sigma) {
  const WeightedGraph& g = u.host();
  std::vector<CutEdge> out;
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    auto [ia, ib] = g.edge_endpoints(k);
    std::size_t lo = ia, hi = ib;
    if (u[lo] > u[hi]) std::swap(lo, hi);
    if (u[lo] < sigma && sigma <= u[hi]) {
      out.push_back({lo, hi, g.edges()[k].weight, u[hi] - u[lo]});
    }
  }
  return out;
}

double cut_weight(const ScalarField& u, double sigma) {
  return cut_stats(u, sigma).weight;
}

double level_flux(const ScalarField& u, double sigma) {
  return cut_stats(u, sigma).flux;
}

double g_sigma(const ScalarField& u, double sigma) {
  return cut_stats(u, sigma).g;
}

FluxIdentity flux_identity_check(const ScalarField& u, double sigma) {
  const WeightedGraph& g = u.host();
  FluxIdentity out;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] >= sigma) {
      out.neg_laplacian_integral -= g.mu_at(i) * laplacian_at(u, i);
    }
  }
  out.flux = cut_stats(u, sigma).flux;
  return out;
}

double interior_antisymmetry(const ScalarField& u, const VertexSet& s) {
  const WeightedGraph& g = u.host();
  double sum = 0.0;
  for (std::size_t x : s.indices()) {
    for (const auto& nb : g.neighbors_at(x)) {
      if (s.contains_index(nb.index)) {
        sum += nb.weight * (u[x] - u[nb.index]);
      }
    }
  }
  return sum;
}

double exact_exp_coarea(const ScalarField& u) {
  const WeightedGraph& g = u.host();
  double sum = 0.0;
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    auto [ia, ib] = g.edge_endpoints(k);
    double lo = u[ia], hi = u[ib];
    if (lo > hi) std::swap(lo, hi);
    if (lo < hi) {
      sum += g.edges()[k].weight * (std::exp(hi) - std::exp(lo)) / (hi - lo);
    }
  }
  return sum;
}

bool elementary_inequality_check(double a, double b) {
  if (!(a < b)) {
    throw std::invalid_argument("elementary_inequality_check requires a < b");
  }
  double secant = (std::exp(b) - std::exp(a)) / (b - a);
  return secant <= std::exp(b) * (1.0 + 1e-9);
}

CauchySchwarzStep cauchy_schwarz_step(const ScalarField& u, double sigma) {
  CutStats s = cut_stats(u, sigma);
  return {s.g * s.flux, s.weight * s.weight};
}

std::vector<double> breakpoints(const ScalarField& u) {
  std::vector<double> vals(u.values().begin(), u.values().end());
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

std::vector<double> audit_sigmas(const ScalarField& u) {
  std::vector<double> bps = breakpoints(u);
  std::vector<double> out;
  out.reserve(2 * bps.size());
  for (std::size_t k = 0; k < bps.size(); ++k) {
    out.push_back(bps[k]);
    if (k + 1 < bps.size()) out.push_back(0.5 * (bps[k] + bps[k + 1]));
  }
  return out;
}

LayerCake layer_cake(const ScalarField& u) {
  const WeightedGraph& g = u.host();
  // mu(Omega_sigma) is a right-continuous-from-the-left step function with
  // value M_k = mu({u >= v_k}) on (v_{k-1}, v_k]; integrating e^sigma piece by
  // piece gives M_0 e^{v_0} + sum_k M_k (e^{v_k} - e^{v_{k-1}}).
  std::vector<double> bps = breakpoints(u);
  LayerCake out;
  if (bps.empty()) return out;

  std::vector<double> suffix_measure(bps.size(), 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    auto it = std::lower_bound(bps.begin(), bps.end(), u[i]);
    suffix_measure[static_cast<std::size_t>(it - bps.begin())] += g.mu_at(i);
  }
  for (std::size_t k = bps.size(); k-- > 1;) {
    suffix_measure[k - 1] += suffix_measure[k];
  }

  out.breakpoint_integral = suffix_measure[0] * std::exp(bps[0]);
  for (std::size_t k = 1; k < bps.size(); ++k) {
    out.breakpoint_integral +=
        suffix_measure[k] * (std::exp(bps[k]) - std::exp(bps[k - 1]));
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    out.vertex_sum += g.mu_at(i) * std::exp(u[i]);
  }
  return out;
}

LevelSetProfile level_set_profile(const ScalarField& u,
                                  std::span<const double> sigmas) {
  LevelSetProfile out;
  out.breakpoints = breakpoints(u);
  out.entries.reserve(sigmas.size());
  for (double sigma : sigmas) {
    VertexSet omega = superlevel_set(u, sigma);
    std::vector<CutEdge> cuts = cut_edges(u, sigma);
    double w = 0.0, flux = 0.0, gval = 0.0;
    for (const CutEdge& c : cuts) {
      w += c.weight;
      flux += c.weight * c.gap;
      gval += c.weight / c.gap;
    }
    double mu = set_measure(omega);
    out.entries.push_back(LevelSetProfile::Entry{
        sigma, std::move(omega), std::move(cuts), w, flux, gval, mu});
  }
  return out;
}

ChainLedger chain_audit(const WeightedGraph& g, const ScalarField& u,
                        double c_is, double sigma_min) {
  if (!(c_is > 0.0)) {
    throw std::invalid_argument("chain_audit: c_is must be positive");
  }
  if (g.vertex_count() == 0) {
    throw std::invalid_argument("chain_audit: empty graph");
  }
  if (&u.host() != &g) {
    throw std::invalid_argument("chain_audit: field is not defined on g");
  }

  ChainLedger led;
  led.c_is = c_is;
  led.sigma_min = sigma_min;
  led.deg_sup = deg_sup(g);
  led.energy = energy(u);
  led.exact_sigma_integral = exact_exp_coarea(u);
  led.deg_bound = led.deg_sup * led.energy;
  led.final_lower_bound = led.deg_sup > 0.0 ? c_is / led.deg_sup : 0.0;

  auto fail = [&led](const std::string& what) {
    led.all_passed = false;
    led.failures.push_back(what);
  };

  // degree bound: int e^sigma G <= Deg(G) * int e^u, generic in u
  led.deg_bound_slack = led.deg_bound - led.exact_sigma_integral;
  led.deg_bound_ok = slack_ok(led.deg_bound_slack,
                              std::max(led.deg_bound, led.exact_sigma_integral));
  if (!led.deg_bound_ok) fail("degree-bound");

  // elementary inequality, edge by edge: secant <= e^high
  led.elementary_min_slack = 0.0;
  bool first_edge = true;
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    auto [ia, ib] = g.edge_endpoints(k);
    double lo = u[ia], hi = u[ib];
    if (lo > hi) std::swap(lo, hi);
    if (lo == hi) continue;
    double secant = (std::exp(hi) - std::exp(lo)) / (hi - lo);
    double rel_slack = 1.0 - secant / std::exp(hi);
    if (first_edge || rel_slack < led.elementary_min_slack) {
      led.elementary_min_slack = rel_slack;
      first_edge = false;
    }
  }
  led.elementary_ok = led.elementary_min_slack >= -1e-9;
  if (!led.elementary_ok) fail("elementary-inequality");

  // coarea closed form vs interval-by-interval constant-G integration
  std::vector<double> bps = breakpoints(u);
  double interval_sum = 0.0;
  for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
    double mid = 0.5 * (bps[k] + bps[k + 1]);
    interval_sum += g_sigma(u, mid) * (std::exp(bps[k + 1]) - std::exp(bps[k]));
  }
  led.coarea_breakpoint_gap = led.exact_sigma_integral - interval_sum;
  led.coarea_ok =
      identity_ok(led.coarea_breakpoint_gap,
                  std::max(std::abs(led.exact_sigma_integral), std::abs(interval_sum)));
  if (!led.coarea_ok) fail("coarea-closed-form");

  // layer cake
  LayerCake lc = layer_cake(u);
  led.layer_cake_lhs = lc.breakpoint_integral;
  led.layer_cake_gap = lc.breakpoint_integral - lc.vertex_sum;
  led.layer_cake_ok = identity_ok(
      led.layer_cake_gap,
      std::max(std::abs(lc.breakpoint_integral), std::abs(lc.vertex_sum)));
  if (!led.layer_cake_ok) fail("layer-cake");

  // per-level records
  for (double sigma : audit_sigmas(u)) {
    AuditRecord rec;
    rec.sigma = sigma;
    CutStats s = cut_stats(u, sigma);
    rec.cut_weight = s.weight;
    rec.flux = s.flux;
    rec.g_sigma = s.g;

    VertexSet omega = superlevel_set(u, sigma);
    rec.mu_omega = set_measure(omega);
    rec.omega_energy = energy_on(u, omega);

    double omega_min = std::numeric_limits<double>::infinity();
    for (std::size_t i : omega.indices()) omega_min = std::min(omega_min, u[i]);
    rec.solution_audited = sigma >= sigma_min && omega_min > sigma_min;

    rec.cs_slack = s.g * s.flux - s.weight * s.weight;
    rec.cs_ok = slack_ok(rec.cs_slack,
                         std::max(std::abs(s.g * s.flux), s.weight * s.weight));
    if (!rec.cs_ok) fail("cauchy-schwarz at sigma=" + format_double(sigma));

    if (rec.solution_audited) {
      rec.flux_gap = rec.flux - rec.omega_energy;
      double mag = std::max(std::abs(rec.flux), std::abs(rec.omega_energy));
      rec.flux_ok = slack_ok(-std::abs(rec.flux_gap), mag);
      if (!rec.flux_ok) fail("flux-identity at sigma=" + format_double(sigma));

      rec.iso_slack = s.weight * s.weight - c_is * rec.mu_omega;
      rec.iso_ok = slack_ok(rec.iso_slack,
                            std::max(s.weight * s.weight, c_is * rec.mu_omega));
      if (!rec.iso_ok) fail("isoperimetric at sigma=" + format_double(sigma));
    }
    led.records.push_back(rec);
  }
  return led;
}

std::string ledger_to_json(const ChainLedger& led) {
  nlohmann::ordered_json j;
  j["c_is"] = led.c_is;
  j["sigma_min"] = led.sigma_min;
  j["deg_sup"] = led.deg_sup;
  j["energy"] = led.energy;
  j["exact_sigma_integral"] = led.exact_sigma_integral;
  j["deg_bound"] = led.deg_bound;
  j["deg_bound_slack"] = led.deg_bound_slack;
  j["deg_bound_ok"] = led.deg_bound_ok;
  j["elementary_min_slack"] = led.elementary_min_slack;
  j["elementary_ok"] = led.elementary_ok;
  j["coarea_breakpoint_gap"] = led.coarea_breakpoint_gap;
  j["coarea_ok"] = led.coarea_ok;
  j["layer_cake_lhs"] = led.layer_cake_lhs;
  j["layer_cake_gap"] = led.layer_cake_gap;
  j["layer_cake_ok"] = led.layer_cake_ok;
  j["final_lower_bound"] = led.final_lower_bound;
  j["all_passed"] = led.all_passed;
  j["failures"] = led.failures;
  j["records"] = nlohmann::ordered_json::array();
  for (const AuditRecord& r : led.records) {
    nlohmann::ordered_json rec;
    rec["sigma"] = r.sigma;
    rec["mu_omega"] = r.mu_omega;
    rec["cut_weight"] = r.cut_weight;
    rec["flux"] = r.flux;
    rec["g_sigma"] = r.g_sigma;
    rec["omega_energy"] = r.omega_energy;
    rec["solution_audited"] = r.solution_audited;
    rec["cs_slack"] = r.cs_slack;
    rec["flux_gap"] = r.flux_gap;
    rec["iso_slack"] = r.iso_slack;
    rec["cs_ok"] = r.cs_ok;
    rec["flux_ok"] = r.flux_ok;
    rec["iso_ok"] = r.iso_ok;
    j["records"].push_back(std::move(rec));
  }
  return j.dump(2) + "\n";
}

std::string ledger_to_csv(const ChainLedger& led) {
  std::string out = "sigma,g_sigma,flux,cut_weight,mu_omega\n";
  for (const AuditRecord& r : led.records) {
    out += format_double(r.sigma) + "," + format_double(r.g_sigma) + "," +
           format_double(r.flux) + "," + format_double(r.cut_weight) + "," +
           format_double(r.mu_omega) + "\n";
  }
  return out;
}

}  // namespace lvg
