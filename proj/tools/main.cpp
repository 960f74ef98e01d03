// lvg: lattice generation, Dirichlet solves, level-set chain audits,
// isoperimetric scans and energy experiments on weighted graphs.
//
// Exit codes: 0 success (solve: converged; audit: all slacks pass),
// 2 solver non-convergence, 3 singular Jacobian, 4 malformed input,
// 5 violated audit slack, 6 isoperimetry size-limit refusal.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "lvg/format.hpp"
#include "lvg/graph.hpp"
#include "lvg/graph_io.hpp"
#include "lvg/isoperimetry.hpp"
#include "lvg/lattice.hpp"
#include "lvg/level_sets.hpp"
#include "lvg/solver.hpp"

namespace {

constexpr int kExitNonConvergence = 2;
constexpr int kExitSingular = 3;
constexpr int kExitInput = 4;
constexpr int kExitAuditFailure = 5;
constexpr int kExitSizeLimit = 6;

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
  } else {
    lvg::write_text_file(path, text);
  }
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::string cell;
  for (char c : csv + ",") {
    if (c == ',') {
      if (!cell.empty()) out.push_back(lvg::parse_double(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  return out;
}

std::vector<lvg::VertexId> parse_id_list(const std::string& csv) {
  std::vector<lvg::VertexId> out;
  std::string cell;
  for (char c : csv + ",") {
    if (c == ',') {
      if (!cell.empty()) out.push_back(lvg::parse_int(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  return out;
}

unsigned job_limit(std::size_t cells) {
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LVG_JOBS")) {
    jobs = static_cast<unsigned>(std::max(1ll, lvg::parse_int(env)));
  }
  return std::min<unsigned>(jobs, std::max<std::size_t>(1, cells));
}

// Boundary data: the ids defining the boundary set plus their values.
struct BoundaryData {
  std::vector<std::pair<lvg::VertexId, double>> values;
};

BoundaryData boundary_from_spec(const std::string& spec,
                                const lvg::LoadedGraph& loaded) {
  const auto& meta = loaded.lattice;
  BoundaryData out;
  if (spec.rfind("file:", 0) == 0) {
    out.values = lvg::load_vertex_values(spec.substr(5), loaded.graph);
    if (out.values.empty()) {
      throw std::invalid_argument("boundary file holds no values");
    }
    return out;
  }
  if (!meta || meta->boundary.empty()) {
    throw std::invalid_argument(
        "graph file carries no boundary set; use --boundary file:PATH or a "
        "ghost lattice window");
  }
  if (spec == "zero") {
    for (lvg::VertexId id : meta->boundary) out.values.push_back({id, 0.0});
    return out;
  }
  if (spec.rfind("bubble:", 0) == 0) {
    std::vector<double> args = parse_double_list(spec.substr(7));
    if (args.empty() || args.size() == 2 || args.size() > 3) {
      throw std::invalid_argument(
          "bubble boundary expects bubble:lambda or bubble:lambda,cx,cy");
    }
    double lambda = args[0];
    lvg::Point2 center{(meta->n - 1) / 2.0, (meta->n - 1) / 2.0};
    if (args.size() == 3) center = {args[1], args[2]};
    for (lvg::VertexId id : meta->boundary) {
      const lvg::GridCoord* c = meta->find_coord(id);
      if (c == nullptr) {
        throw std::invalid_argument("no grid coordinates for boundary vertex " +
                                    std::to_string(id));
      }
      double v = lvg::bubble({double(c->i), double(c->j)}, center, lambda);
      out.values.push_back({id, v});
    }
    return out;
  }
  throw std::invalid_argument("unknown boundary spec '" + spec +
                              "' (zero | bubble:lambda[,cx,cy] | file:PATH)");
}

lvg::DirichletProblem problem_from_boundary(const lvg::LoadedGraph& loaded,
                                            const BoundaryData& bd) {
  std::vector<lvg::VertexId> boundary_ids;
  boundary_ids.reserve(bd.values.size());
  for (const auto& [id, v] : bd.values) boundary_ids.push_back(id);
  lvg::VertexSet boundary(loaded.graph, boundary_ids);
  return lvg::make_dirichlet_problem(loaded.graph, boundary.complement(),
                                     bd.values, lvg::Nonlinearity::exponential());
}

struct SolveOutcome {
  lvg::SolveReport report;
  int exit_code = 0;
};

// Plain damped Newton from the harmonic extension, with a continuation
// fallback when it fails to converge.
SolveOutcome run_solve(const lvg::DirichletProblem& problem, double tol,
                       int max_iter, const std::vector<double>& fallback) {
  lvg::ScalarField initial = lvg::harmonic_extension(problem);
  try {
    return {lvg::newton_solve(problem, initial, tol, max_iter), 0};
  } catch (const lvg::NonConvergenceError&) {
    if (fallback.empty()) throw;
  }
  return {lvg::continuation_solve(problem, fallback, tol, max_iter), 0};
}

double max_boundary_value(const BoundaryData& bd) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& [id, v] : bd.values) m = std::max(m, v);
  return m;
}

// ---- subcommands -----------------------------------------------------------

int cmd_gen_lattice(int n, bool ghost, const std::string& out) {
  lvg::LatticeWindow window = lvg::make_lattice_window(n, ghost);
  write_output(out, lvg::graph_to_json(window.graph, &window.meta));
  return 0;
}

int cmd_solve(const std::string& graph_path, const std::string& boundary_spec,
              const std::string& nonlinearity, double tol, int max_iter,
              const std::string& schedule_csv, const std::string& out_solution,
              const std::string& out_report) {
  if (nonlinearity != "exp") {
    throw std::invalid_argument("only --nonlinearity exp is available");
  }
  lvg::LoadedGraph loaded = lvg::load_graph_file(graph_path);
  BoundaryData bd = boundary_from_spec(boundary_spec, loaded);
  lvg::DirichletProblem problem = problem_from_boundary(loaded, bd);

  std::vector<double> fallback = parse_double_list(schedule_csv);
  SolveOutcome outcome = run_solve(problem, tol, max_iter, fallback);

  const lvg::LatticeMeta* meta =
      loaded.lattice ? &loaded.lattice.value() : nullptr;
  write_output(out_solution, lvg::solution_to_csv(outcome.report.solution, meta));
  write_output(out_report, lvg::solve_report_to_json(outcome.report));
  std::cerr << "solve: converged in " << outcome.report.iterations
            << " iterations, residual sup "
            << lvg::format_double(outcome.report.residual_sup) << "\n";
  lvg::MaxPrincipleDiagnostic mp =
      lvg::max_principle_diagnostic(problem, outcome.report.solution);
  std::cerr << "solve: max-principle diagnostic at vertex " << mp.argmax
            << ": laplacian " << lvg::format_double(mp.laplacian_at_argmax)
            << " (expected <= 0), e^u_max " << lvg::format_double(mp.exp_u_max)
            << " <= degree bound " << lvg::format_double(mp.degree_bound)
            << "\n";
  return outcome.report.converged ? 0 : kExitNonConvergence;
}

int cmd_audit(const std::string& graph_path, const std::string& solution_path,
              double c_is, const std::string& sigma_min_spec,
              const std::string& out_ledger, const std::string& out_csv) {
  lvg::LoadedGraph loaded = lvg::load_graph_file(graph_path);
  lvg::ScalarField u = lvg::load_solution_csv(solution_path, loaded.graph);

  double sigma_min;
  if (sigma_min_spec == "auto") {
    if (!loaded.lattice || loaded.lattice->boundary.empty()) {
      throw std::invalid_argument(
          "--sigma-min auto needs a graph with a boundary set; pass a number "
          "or inf");
    }
    sigma_min = -std::numeric_limits<double>::infinity();
    for (lvg::VertexId id : loaded.lattice->boundary) {
      sigma_min = std::max(sigma_min, u.at(id));
    }
  } else if (sigma_min_spec == "inf") {
    sigma_min = std::numeric_limits<double>::infinity();
  } else {
    sigma_min = lvg::parse_double(sigma_min_spec);
  }

  lvg::ChainLedger ledger = lvg::chain_audit(loaded.graph, u, c_is, sigma_min);
  write_output(out_ledger, lvg::ledger_to_json(ledger));
  write_output(out_csv, lvg::ledger_to_csv(ledger));
  if (!ledger.all_passed) {
    std::cerr << "audit: FAILED steps:\n";
    for (const std::string& f : ledger.failures) std::cerr << "  " << f << "\n";
    return kExitAuditFailure;
  }
  std::cerr << "audit: all " << ledger.records.size()
            << " levels pass (final lower bound "
            << lvg::format_double(ledger.final_lower_bound) << ")\n";
  return 0;
}

int cmd_isoperimetry(const std::string& graph_path,
                     const std::string& admissible_csv, std::size_t limit,
                     const std::string& out) {
  lvg::LoadedGraph loaded = lvg::load_graph_file(graph_path);
  std::vector<lvg::VertexId> ids;
  if (!admissible_csv.empty()) {
    ids = parse_id_list(admissible_csv);
  } else if (loaded.lattice && !loaded.lattice->interior.empty()) {
    ids = loaded.lattice->interior;
  } else {
    ids.assign(loaded.graph.vertex_ids().begin(),
               loaded.graph.vertex_ids().end());
  }
  lvg::VertexSet admissible(loaded.graph, ids);
  lvg::IsoperimetricReport report =
      lvg::brute_force_cis(admissible, limit, job_limit(admissible.size()));
  write_output(out, lvg::isoperimetric_report_to_json(report));
  return 0;
}

struct EnergyCell {
  int n = 0;
  double lambda = 0.0;
  bool converged = false;
  double energy_interior = 0.0;
  double residual_sup = 0.0;
  double sigma_min_used = 0.0;
  bool audited_chain_ok = false;
  double final_lower_bound = 4.0;
};

int cmd_energy_scan(int n, const std::string& lambdas_csv,
                    const std::string& center_csv, double tol, int max_iter,
                    const std::string& out_dir) {
  if (n < 3 || n % 2 == 0) {
    throw std::invalid_argument("energy scan windows must be odd and >= 3");
  }
  std::vector<double> lambdas = parse_double_list(lambdas_csv);
  if (lambdas.empty()) {
    throw std::invalid_argument("energy scan needs at least one lambda");
  }
  for (double l : lambdas) {
    if (!(l > 0)) throw std::invalid_argument("lambdas must be positive");
  }
  lvg::Point2 center{(n - 1) / 2.0, (n - 1) / 2.0};
  if (!center_csv.empty()) {
    std::vector<double> c = parse_double_list(center_csv);
    if (c.size() != 2) throw std::invalid_argument("--center expects cx,cy");
    center = {c[0], c[1]};
  }

  lvg::LatticeWindow window = lvg::make_lattice_window(n, true);
  lvg::LoadedGraph loaded{std::move(window.graph), std::move(window.meta)};

  std::vector<EnergyCell> cells(lambdas.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t k = next.fetch_add(1);
      if (k >= lambdas.size()) return;
      EnergyCell& cell = cells[k];
      cell.n = n;
      cell.lambda = lambdas[k];
      std::string spec = "bubble:" + lvg::format_double(lambdas[k]) + "," +
                         lvg::format_double(center.x) + "," +
                         lvg::format_double(center.y);
      try {
        BoundaryData bd = boundary_from_spec(spec, loaded);
        lvg::DirichletProblem problem = problem_from_boundary(loaded, bd);
        cell.sigma_min_used = max_boundary_value(bd);
        SolveOutcome outcome =
            run_solve(problem, tol, max_iter, {0.25, 0.5, 1.0});
        cell.converged = outcome.report.converged;
        cell.energy_interior = outcome.report.energy_interior;
        cell.residual_sup = outcome.report.residual_sup;
        lvg::ChainLedger ledger = lvg::chain_audit(
            loaded.graph, outcome.report.solution, 4.0, cell.sigma_min_used);
        cell.audited_chain_ok = ledger.all_passed;
        cell.final_lower_bound = ledger.final_lower_bound;
      } catch (const lvg::SolveError& e) {
        // last iterate may hold non-finite values; report it raw
        cell.converged = false;
        cell.audited_chain_ok = false;
        const std::vector<double>& last = e.last_iterate;
        const lvg::WeightedGraph& g = loaded.graph;
        cell.residual_sup = 0.0;
        cell.energy_interior = 0.0;
        if (last.size() == g.vertex_count()) {
          for (lvg::VertexId id : loaded.lattice->interior) {
            std::size_t x = g.index_of(id);
            double lap = 0.0;
            for (const auto& nb : g.neighbors_at(x)) {
              lap += nb.weight * (last[nb.index] - last[x]);
            }
            lap /= g.mu_at(x);
            cell.residual_sup = std::max(cell.residual_sup,
                                         std::abs(lap + std::exp(last[x])));
            cell.energy_interior += g.mu_at(x) * std::exp(last[x]);
          }
        }
      } catch (const std::exception&) {
        cell.converged = false;
        cell.audited_chain_ok = false;
      }
    }
  };
  unsigned jobs = job_limit(lambdas.size());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::string csv =
      "n,lambda,converged,energy_interior,residual_sup,sigma_min_used,"
      "audited_chain_ok,final_lower_bound\n";
  for (const EnergyCell& c : cells) {
    csv += std::to_string(c.n) + "," + lvg::format_double(c.lambda) + "," +
           (c.converged ? "true" : "false") + "," +
           lvg::format_double(c.energy_interior) + "," +
           lvg::format_double(c.residual_sup) + "," +
           lvg::format_double(c.sigma_min_used) + "," +
           (c.audited_chain_ok ? "true" : "false") + "," +
           lvg::format_double(c.final_lower_bound) + "\n";
  }
  std::string path = out_dir == "-" ? "-" : out_dir + "/energy_scan.csv";
  write_output(path, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Liouville equation toolkit on weighted graphs"};
  app.require_subcommand(1);

  // gen-lattice
  auto* gen = app.add_subcommand("gen-lattice", "Write a lattice window graph");
  int gen_n = 0;
  bool gen_ghost = false;
  std::string gen_out = "-";
  gen->add_option("--n", gen_n, "Interior window size")->required();
  gen->add_flag("--ghost", gen_ghost, "Add the boundary ghost ring");
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve a Dirichlet problem");
  std::string solve_graph, solve_boundary, solve_nl = "exp";
  std::string solve_schedule = "0.25,0.5,1";
  std::string solve_out_solution = "solution.csv";
  std::string solve_out_report = "solve_report.json";
  double solve_tol = 1e-10;
  int solve_max_iter = 50;
  solve->add_option("--graph", solve_graph, "Graph JSON file")->required();
  solve->add_option("--boundary", solve_boundary,
                    "zero | bubble:lambda[,cx,cy] | file:PATH")->required();
  solve->add_option("--nonlinearity", solve_nl, "Nonlinearity (exp)");
  solve->add_option("--tol", solve_tol, "Residual sup-norm tolerance");
  solve->add_option("--max-iter", solve_max_iter, "Newton iteration cap");
  solve->add_option("--fallback-schedule", solve_schedule,
                    "Continuation schedule tried when plain Newton fails "
                    "(empty disables)");
  solve->add_option("--out-solution", solve_out_solution, "Solution CSV path");
  solve->add_option("--out-report", solve_out_report, "Report JSON path");

  // audit
  auto* audit = app.add_subcommand("audit", "Audit the energy bound chain");
  std::string audit_graph, audit_solution, audit_sigma = "auto";
  std::string audit_out_ledger = "ledger.json", audit_out_csv = "ledger.csv";
  double audit_cis = 0.0;
  audit->add_option("--graph", audit_graph, "Graph JSON file")->required();
  audit->add_option("--solution", audit_solution, "Solution CSV file")->required();
  audit->add_option("--cis", audit_cis, "Isoperimetric constant to audit with")
      ->required();
  audit->add_option("--sigma-min", audit_sigma,
                    "Number, 'auto' (max boundary value) or 'inf' "
                    "(generic steps only)");
  audit->add_option("--out-ledger", audit_out_ledger, "Ledger JSON path");
  audit->add_option("--out-csv", audit_out_csv, "Ledger CSV path");

  // isoperimetry
  auto* iso = app.add_subcommand("isoperimetry",
                                 "Brute-force isoperimetric ratio scan");
  std::string iso_graph, iso_admissible, iso_out = "-";
  std::size_t iso_limit = 24;
  iso->add_option("--graph", iso_graph, "Graph JSON file")->required();
  iso->add_option("--admissible", iso_admissible,
                  "Comma-separated vertex ids (default: lattice interior, "
                  "else all vertices)");
  iso->add_option("--limit", iso_limit, "Enumeration size limit");
  iso->add_option("--out", iso_out, "Report JSON path (default stdout)");

  // energy-scan
  auto* scan = app.add_subcommand("energy-scan",
                                  "Bubble-boundary energy experiment table");
  int scan_n = 0;
  std::string scan_lambdas, scan_center, scan_out = ".";
  double scan_tol = 1e-10;
  int scan_max_iter = 50;
  scan->add_option("--n", scan_n, "Odd window size >= 3")->required();
  scan->add_option("--lambdas", scan_lambdas, "Comma-separated lambdas")
      ->required();
  scan->add_option("--center", scan_center, "cx,cy (default window center)");
  scan->add_option("--tol", scan_tol, "Solver tolerance");
  scan->add_option("--max-iter", scan_max_iter, "Newton iteration cap");
  scan->add_option("--out", scan_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen_lattice(gen_n, gen_ghost, gen_out);
    if (solve->parsed()) {
      return cmd_solve(solve_graph, solve_boundary, solve_nl, solve_tol,
                       solve_max_iter, solve_schedule, solve_out_solution,
                       solve_out_report);
    }
    if (audit->parsed()) {
      return cmd_audit(audit_graph, audit_solution, audit_cis, audit_sigma,
                       audit_out_ledger, audit_out_csv);
    }
    if (iso->parsed()) {
      return cmd_isoperimetry(iso_graph, iso_admissible, iso_limit, iso_out);
    }
    if (scan->parsed()) {
      return cmd_energy_scan(scan_n, scan_lambdas, scan_center, scan_tol,
                             scan_max_iter, scan_out);
    }
  } catch (const lvg::SubsetLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSizeLimit;
  } catch (const lvg::SingularJacobianError& e) {
    std::cerr << "error: singular Jacobian (t=" << lvg::format_double(e.failed_t)
              << "): " << e.what() << "\n";
    return kExitSingular;
  } catch (const lvg::NonConvergenceError& e) {
    std::cerr << "error: no convergence (t=" << lvg::format_double(e.failed_t)
              << "): " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const lvg::GraphFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return 0;
}
