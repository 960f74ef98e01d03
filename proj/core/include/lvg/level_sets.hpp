#pragma once

#include <span>
#include <string>
#include <vector>

#include "lvg/graph.hpp"

namespace lvg {

/// Edge crossed by the level sigma: u(low) < sigma <= u(high). The gap is
/// strictly positive, so weight/gap sums are always finite.
struct CutEdge {
  std::size_t low = 0;   ///< vertex index with the smaller value
  std::size_t high = 0;  ///< vertex index with the larger value
  double weight = 0.0;
  double gap = 0.0;  ///< u(high) - u(low)
};

/// Superlevel set Omega_sigma = {x : u(x) >= sigma} (ties included).
VertexSet superlevel_set(const ScalarField& u, double sigma);

std::vector<CutEdge> cut_edges(const ScalarField& u, double sigma);

/// w(boundary Omega_sigma): total weight of the cut edges.
double cut_weight(const ScalarField& u, double sigma);

/// Flux through the level: sum over cut edges of w * (u(high) - u(low)).
double level_flux(const ScalarField& u, double sigma);

/// G(sigma) = sum over cut edges of w / (u(high) - u(low)). A step function
/// of sigma whose jumps sit at values of u; zero when nothing is cut.
double g_sigma(const ScalarField& u, double sigma);

/// Both sides of the discrete divergence identity on a superlevel set:
///   -int_{Omega_sigma} Delta u  ==  flux(sigma).
/// Holds for every field, not only solutions of an equation.
struct FluxIdentity {
  double neg_laplacian_integral = 0.0;
  double flux = 0.0;
};
FluxIdentity flux_identity_check(const ScalarField& u, double sigma);

/// The internal edge sum A = sum_{x,y in s, x~y} w_xy (u(x) - u(y)) over
/// ordered pairs. Antisymmetry forces A = 0; returned for auditing.
double interior_antisymmetry(const ScalarField& u, const VertexSet& s);

/// Closed form of int e^sigma G(sigma) dsigma over the whole line:
///   sum over edges with u(y) > u(x) of w * (e^u(y) - e^u(x)) / (u(y) - u(x)).
double exact_exp_coarea(const ScalarField& u);

/// (e^b - e^a)/(b - a) <= e^b for a < b. Exposed for property tests; allows a
/// 1e-9 relative rounding guard so vanishing gaps cannot flip the verdict.
/// Throws std::invalid_argument unless a < b.
bool elementary_inequality_check(double a, double b);

/// lhs = G(sigma) * flux(sigma), rhs = cut_weight(sigma)^2. Cauchy-Schwarz
/// over the cut edges gives lhs >= rhs for every field and level, with
/// equality exactly when all cut gaps agree.
struct CauchySchwarzStep {
  double lhs = 0.0;
  double rhs = 0.0;
};
CauchySchwarzStep cauchy_schwarz_step(const ScalarField& u, double sigma);

/// Layer-cake identity: int mu(Omega_sigma) e^sigma dsigma == int_V e^u.
/// The left side is evaluated by the exact breakpoint decomposition of the
/// step function mu(Omega_sigma), the right side by direct summation.
struct LayerCake {
  double breakpoint_integral = 0.0;
  double vertex_sum = 0.0;
};
LayerCake layer_cake(const ScalarField& u);

/// Sorted distinct values of u.
std::vector<double> breakpoints(const ScalarField& u);

/// Audit levels: every distinct value of u plus the midpoints between
/// consecutive ones.
std::vector<double> audit_sigmas(const ScalarField& u);

/// Per-level snapshot of the superlevel machinery for a query set of sigmas.
struct LevelSetProfile {
  struct Entry {
    double sigma = 0.0;
    VertexSet omega;
    std::vector<CutEdge> cuts;
    double cut_weight = 0.0;
    double flux = 0.0;
    double g_sigma = 0.0;
    double mu_omega = 0.0;
  };
  std::vector<double> breakpoints;
  std::vector<Entry> entries;
};
LevelSetProfile level_set_profile(const ScalarField& u,
                                  std::span<const double> sigmas);

// ---- the full inequality-chain audit ---------------------------------------

/// One audited level. Generic steps (Cauchy-Schwarz) apply to any field.
/// Solution-dependent steps (flux == int_{Omega} e^u, the isoperimetric lower
/// bound on the cut) are only asserted when every vertex of Omega_sigma has
/// u > sigma_min, i.e. when Omega_sigma stays inside the region where the
/// equation and honest cut counting hold.
struct AuditRecord {
  double sigma = 0.0;
  double mu_omega = 0.0;
  double cut_weight = 0.0;
  double flux = 0.0;
  double g_sigma = 0.0;
  double omega_energy = 0.0;  ///< int_{Omega_sigma} e^u
  bool solution_audited = false;
  double cs_slack = 0.0;    ///< G*flux - cut^2
  double flux_gap = 0.0;    ///< flux - omega_energy
  double iso_slack = 0.0;   ///< cut^2 - c_is * mu(Omega)
  bool cs_ok = true;
  bool flux_ok = true;  ///< meaningful only when solution_audited
  bool iso_ok = true;   ///< meaningful only when solution_audited
};

/// Ledger for the energy lower bound chain on a finite graph. Tolerances are
/// fixed: identities to 1e-10 relative, inequality slacks allowed down to
/// -1e-8 * (1 + magnitude).
struct ChainLedger {
  double c_is = 0.0;
  double sigma_min = 0.0;
  double deg_sup = 0.0;
  double energy = 0.0;                ///< int_V e^u
  double exact_sigma_integral = 0.0;  ///< closed-form int e^sigma G dsigma
  double deg_bound = 0.0;             ///< deg_sup * energy
  double deg_bound_slack = 0.0;
  bool deg_bound_ok = true;
  double elementary_min_slack = 0.0;  ///< min over rising edges of 1 - secant/e^hi
  bool elementary_ok = true;
  double coarea_breakpoint_gap = 0.0;  ///< closed form vs interval-wise integral
  bool coarea_ok = true;
  double layer_cake_lhs = 0.0;
  double layer_cake_gap = 0.0;
  bool layer_cake_ok = true;
  double final_lower_bound = 0.0;  ///< c_is / deg_sup
  std::vector<AuditRecord> records;
  bool all_passed = true;
  std::vector<std::string> failures;
};

/// Runs the whole chain on u with an externally supplied isoperimetric
/// constant. Levels are the audit_sigmas of u; solution-dependent steps are
/// restricted to sigma >= sigma_min as described on AuditRecord. Throws
/// std::invalid_argument when c_is <= 0.
ChainLedger chain_audit(const WeightedGraph& g, const ScalarField& u,
                        double c_is, double sigma_min);

std::string ledger_to_json(const ChainLedger& ledger);

/// CSV rows `sigma,g_sigma,flux,cut_weight,mu_omega`, one per audited level.
std::string ledger_to_csv(const ChainLedger& ledger);

}  // namespace lvg
