#include "lvg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "lvg/format.hpp"

namespace lvg {

Nonlinearity Nonlinearity::exponential() {
  return Nonlinearity(NonlinearityKind::Exponential, "exp",
                      [](double x) { return std::exp(x); },
                      [](double x) { return std::exp(x); });
}

Nonlinearity Nonlinearity::convex_custom(std::string name, Fn f, Fn df) {
  if (!f || !df) {
    throw std::invalid_argument("convex_custom: F and F' are required");
  }
  constexpr int kPoints = 101;
  constexpr double kLo = -20.0, kHi = 5.0;
  double prev_slope = -std::numeric_limits<double>::infinity();
  double prev_value = 0.0;
  for (int k = 0; k < kPoints; ++k) {
    double x = kLo + (kHi - kLo) * k / (kPoints - 1);
    double y = f(x);
    double dy = df(x);
    if (!std::isfinite(y) || !std::isfinite(dy)) {
      throw std::invalid_argument("convex_custom '" + name +
                                  "': non-finite value on the check grid");
    }
    if (y < -1e-12 * (1.0 + std::abs(y))) {
      throw std::invalid_argument("convex_custom '" + name +
                                  "': F must be nonnegative (F(" +
                                  format_double(x) + ") < 0)");
    }
    if (dy < -1e-12 * (1.0 + std::abs(dy))) {
      throw std::invalid_argument("convex_custom '" + name +
                                  "': F' must be nonnegative (F'(" +
                                  format_double(x) + ") < 0)");
    }
    if (k > 0) {
      double slope = (y - prev_value) / ((kHi - kLo) / (kPoints - 1));
      if (slope < prev_slope - 1e-10 * (1.0 + std::abs(prev_slope))) {
        throw std::invalid_argument("convex_custom '" + name +
                                    "': secant slopes decrease near x=" +
                                    format_double(x) + ", F is not convex");
      }
      prev_slope = slope;
    }
    prev_value = y;
  }
  return Nonlinearity(NonlinearityKind::ConvexCustom, std::move(name),
                      std::move(f), std::move(df));
}

Nonlinearity Nonlinearity::scaled(double t) const {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("Nonlinearity::scaled: t must be >= 0");
  }
  if (t == 1.0) return *this;
  Fn f = f_;
  Fn df = df_;
  return Nonlinearity(
      NonlinearityKind::ConvexCustom,
      name_ + "*" + format_double(t),
      [f, t](double x) { return t * f(x); },
      [df, t](double x) { return t * df(x); });
}

DirichletProblem make_dirichlet_problem(
    const WeightedGraph& g, const VertexSet& interior,
    std::span<const std::pair<VertexId, double>> values, Nonlinearity f) {
  if (&interior.host() != &g) {
    throw std::invalid_argument("interior set is not hosted by the graph");
  }
  VertexSet boundary = interior.complement();
  std::vector<double> bv(g.vertex_count(), 0.0);
  std::vector<std::uint8_t> seen(g.vertex_count(), 0);
  for (const auto& [id, v] : values) {
    std::size_t idx = g.index_of(id);
    if (!boundary.contains_index(idx)) {
      throw std::invalid_argument("boundary value given for interior vertex " +
                                  std::to_string(id));
    }
    if (seen[idx]) {
      throw std::invalid_argument("duplicate boundary value for vertex " +
                                  std::to_string(id));
    }
    if (!std::isfinite(v)) {
      throw std::invalid_argument("boundary value for vertex " +
                                  std::to_string(id) + " must be finite");
    }
    seen[idx] = 1;
    bv[idx] = v;
  }
  for (std::size_t idx : boundary.indices()) {
    if (!seen[idx]) {
      throw std::invalid_argument("missing boundary value for vertex " +
                                  std::to_string(g.id_at(idx)));
    }
  }
  return DirichletProblem{&g, interior, std::move(boundary), std::move(bv),
                          std::move(f)};
}

namespace {

void require_boundary_match(const DirichletProblem& p, const ScalarField& u) {
  for (std::size_t idx : p.boundary.indices()) {
    if (u[idx] != p.boundary_values[idx]) {
      throw std::invalid_argument(
          "field does not match the prescribed boundary values at vertex " +
          std::to_string(p.graph->id_at(idx)));
    }
  }
}

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double euclid_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// residual restricted to the interior unknowns, in interior index order
std::vector<double> interior_residual(const DirichletProblem& p,
                                      const ScalarField& u) {
  std::vector<double> r;
  r.reserve(p.interior.size());
  for (std::size_t idx : p.interior.indices()) {
    r.push_back(laplacian_at(u, idx) + p.nonlinearity.eval(u[idx]));
  }
  return r;
}

double interior_energy(const DirichletProblem& p, const ScalarField& u) {
  double e = 0.0;
  for (std::size_t idx : p.interior.indices()) {
    e += p.graph->mu_at(idx) * std::exp(u[idx]);
  }
  return e;
}

std::vector<double> field_values(const ScalarField& u) {
  return std::vector<double>(u.values().begin(), u.values().end());
}

}  // namespace

ScalarField residual(const DirichletProblem& p, const ScalarField& u) {
  if (&u.host() != p.graph) {
    throw std::invalid_argument("residual: field is not defined on the graph");
  }
  require_boundary_match(p, u);
  ScalarField r(*p.graph, 0.0);
  for (std::size_t idx : p.interior.indices()) {
    r[idx] = laplacian_at(u, idx) + p.nonlinearity.eval(u[idx]);
  }
  return r;
}

Matrix interior_jacobian(const DirichletProblem& p, const ScalarField& u) {
  const WeightedGraph& g = *p.graph;
  const auto& unknowns = p.interior.indices();
  const std::size_t m = unknowns.size();

  std::vector<std::size_t> row_of(g.vertex_count(),
                                  std::numeric_limits<std::size_t>::max());
  for (std::size_t r = 0; r < m; ++r) row_of[unknowns[r]] = r;

  Matrix jac(m, m);
  for (std::size_t r = 0; r < m; ++r) {
    std::size_t idx = unknowns[r];
    double wsum = 0.0;
    for (const auto& nb : g.neighbors_at(idx)) {
      wsum += nb.weight;
      std::size_t c = row_of[nb.index];
      if (c != std::numeric_limits<std::size_t>::max()) {
        jac(r, c) += nb.weight / g.mu_at(idx);
      }
    }
    jac(r, r) += -wsum / g.mu_at(idx) + p.nonlinearity.deriv(u[idx]);
  }
  return jac;
}

ScalarField harmonic_extension(const DirichletProblem& p) {
  const WeightedGraph& g = *p.graph;
  const auto& unknowns = p.interior.indices();
  const std::size_t m = unknowns.size();

  ScalarField u(g, 0.0);
  for (std::size_t idx : p.boundary.indices()) u[idx] = p.boundary_values[idx];
  if (m == 0) return u;

  std::vector<std::size_t> row_of(g.vertex_count(),
                                  std::numeric_limits<std::size_t>::max());
  for (std::size_t r = 0; r < m; ++r) row_of[unknowns[r]] = r;

  Matrix lap(m, m);
  std::vector<double> rhs(m, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    std::size_t idx = unknowns[r];
    double wsum = 0.0;
    for (const auto& nb : g.neighbors_at(idx)) {
      wsum += nb.weight;
      std::size_t c = row_of[nb.index];
      if (c != std::numeric_limits<std::size_t>::max()) {
        lap(r, c) += nb.weight / g.mu_at(idx);
      } else {
        rhs[r] -= nb.weight / g.mu_at(idx) * p.boundary_values[nb.index];
      }
    }
    lap(r, r) = -wsum / g.mu_at(idx);
  }

  std::vector<double> x;
  try {
    x = lu_solve(lu_factor(std::move(lap)), rhs);
  } catch (const SingularMatrixError& e) {
    throw SingularJacobianError(
        std::string("harmonic extension: ") + e.what() +
            " (is some interior component disconnected from the boundary?)",
        field_values(u), 1.0);
  }
  for (std::size_t r = 0; r < m; ++r) u[unknowns[r]] = x[r];
  return u;
}

SolveReport newton_solve(const DirichletProblem& p, const ScalarField& initial,
                         double tol, int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("newton_solve: tol must be > 0");
  if (max_iter < 1) {
    throw std::invalid_argument("newton_solve: max_iter must be >= 1");
  }
  if (&initial.host() != p.graph) {
    throw std::invalid_argument("newton_solve: initial field host mismatch");
  }
  require_boundary_match(p, initial);

  const auto& unknowns = p.interior.indices();
  const std::size_t m = unknowns.size();
  ScalarField u = initial;
  std::vector<double> r = interior_residual(p, u);
  int damping = 0;

  auto make_report = [&](int iterations, bool converged) {
    SolveReport rep{u,       sup_norm(r), iterations, damping, {},
                    0.0,     converged};
    rep.energy_interior = interior_energy(p, u);
    return rep;
  };

  if (sup_norm(r) <= tol) return make_report(0, true);

  for (int it = 1; it <= max_iter; ++it) {
    Matrix jac = interior_jacobian(p, u);
    std::vector<double> step;
    std::vector<double> neg_r(m);
    for (std::size_t k = 0; k < m; ++k) neg_r[k] = -r[k];
    try {
      step = lu_solve(lu_factor(std::move(jac)), neg_r);
    } catch (const SingularMatrixError& e) {
      throw SingularJacobianError(
          "newton iteration " + std::to_string(it) + ": " + e.what(),
          field_values(u), 1.0);
    }

    double r_norm = euclid_norm(r);
    double s = 1.0;
    ScalarField trial = u;
    std::vector<double> r_trial;
    for (int halvings = 0;; ++halvings) {
      for (std::size_t k = 0; k < m; ++k) {
        trial[unknowns[k]] = u[unknowns[k]] + s * step[k];
      }
      r_trial = interior_residual(p, trial);
      if (euclid_norm(r_trial) < r_norm || halvings >= 30) break;
      s *= 0.5;
      ++damping;
    }
    u = std::move(trial);
    r = std::move(r_trial);
    if (sup_norm(r) <= tol) return make_report(it, true);
  }
  throw NonConvergenceError(
      "newton did not reach tol=" + format_double(tol) + " within " +
          std::to_string(max_iter) + " iterations (residual sup " +
          format_double(sup_norm(r)) + ")",
      field_values(u), 1.0);
}

SolveReport continuation_solve(const DirichletProblem& p,
                               std::span<const double> t_schedule, double tol,
                               int max_iter) {
  if (t_schedule.empty()) {
    throw std::invalid_argument("continuation_solve: empty schedule");
  }
  double prev = 0.0;
  for (double t : t_schedule) {
    if (!(t > prev)) {
      throw std::invalid_argument(
          "continuation_solve: schedule must be strictly increasing and positive");
    }
    prev = t;
  }
  if (t_schedule.back() != 1.0) {
    throw std::invalid_argument("continuation_solve: schedule must end at 1");
  }

  ScalarField u = harmonic_extension(p);
  int total_iterations = 0;
  int total_damping = 0;
  SolveReport last{u, 0.0, 0, 0, {}, 0.0, false};
  for (double t : t_schedule) {
    DirichletProblem stage{p.graph, p.interior, p.boundary, p.boundary_values,
                           p.nonlinearity.scaled(t)};
    try {
      last = newton_solve(stage, u, tol, max_iter);
    } catch (SingularJacobianError& e) {
      e.failed_t = t;
      throw;
    } catch (NonConvergenceError& e) {
      e.failed_t = t;
      throw;
    }
    total_iterations += last.iterations;
    total_damping += last.damping_events;
    u = last.solution;
  }
  last.iterations = total_iterations;
  last.damping_events = total_damping;
  last.continuation_steps.assign(t_schedule.begin(), t_schedule.end());
  return last;
}

double bubble(Point2 p, Point2 center, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("bubble: lambda must be positive");
  }
  double dx = p.x - center.x;
  double dy = p.y - center.y;
  double r2 = dx * dx + dy * dy;
  return std::log(32.0 * lambda * lambda) - 2.0 * std::log(4.0 + lambda * lambda * r2);
}

MaxPrincipleDiagnostic max_principle_diagnostic(const DirichletProblem& p,
                                                const ScalarField& u) {
  if (p.interior.empty()) {
    throw std::invalid_argument("max_principle_diagnostic: empty interior");
  }
  const WeightedGraph& g = *p.graph;
  std::size_t arg = p.interior.indices().front();
  for (std::size_t idx : p.interior.indices()) {
    if (u[idx] > u[arg]) arg = idx;
  }
  double u_min = u[0];
  for (std::size_t i = 0; i < u.size(); ++i) u_min = std::min(u_min, u[i]);

  MaxPrincipleDiagnostic d;
  d.argmax = g.id_at(arg);
  d.u_max = u[arg];
  d.laplacian_at_argmax = laplacian_at(u, arg);
  d.exp_u_max = std::exp(u[arg]);
  d.degree_bound = weighted_degree_at(g, arg) * (u[arg] - u_min);
  return d;
}

ObstructionReport closed_graph_obstruction(const WeightedGraph& g,
                                           const ScalarField& u) {
  if (&u.host() != &g) {
    throw std::invalid_argument("closed_graph_obstruction: host mismatch");
  }
  ObstructionReport out;
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    out.laplacian_integral += g.mu_at(i) * laplacian_at(u, i);
    out.energy += g.mu_at(i) * std::exp(u[i]);
  }
  return out;
}

std::string solve_report_to_json(const SolveReport& report) {
  nlohmann::ordered_json j;
  j["converged"] = report.converged;
  j["residual_sup"] = report.residual_sup;
  j["iterations"] = report.iterations;
  j["damping_events"] = report.damping_events;
  j["continuation_steps"] = report.continuation_steps;
  j["energy_interior"] = report.energy_interior;
  return j.dump(2) + "\n";
}

}  // namespace lvg
