#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lvg/graph.hpp"
#include "lvg/linalg.hpp"

namespace lvg {

enum class NonlinearityKind { Exponential, ConvexCustom };

/// Nonlinearity F for Delta u + F(u) = 0. The exponential is built in;
/// custom F must come with F' and pass spot checks of F >= 0, F' >= 0 and
/// convexity (monotone secant slopes) on a 101-point grid over [-20, 5].
/// The checks are conservative: they can miss violations of wild F outside
/// the grid, but never reject a genuinely admissible one on it.
class Nonlinearity {
 public:
  using Fn = std::function<double(double)>;

  static Nonlinearity exponential();
  static Nonlinearity convex_custom(std::string name, Fn f, Fn df);

  double eval(double x) const { return f_(x); }
  double deriv(double x) const { return df_(x); }

  /// t*F for continuation, t >= 0. Positive scaling preserves all the
  /// admissibility conditions, so no revalidation happens.
  Nonlinearity scaled(double t) const;

  NonlinearityKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

 private:
  Nonlinearity(NonlinearityKind kind, std::string name, Fn f, Fn df)
      : kind_(kind), name_(std::move(name)), f_(std::move(f)), df_(std::move(df)) {}

  NonlinearityKind kind_;
  std::string name_;
  Fn f_;
  Fn df_;
};

/// Interior equation Delta u + F(u) = 0 with values prescribed on the
/// boundary set (the complement of the interior).
struct DirichletProblem {
  const WeightedGraph* graph;
  VertexSet interior;
  VertexSet boundary;
  std::vector<double> boundary_values;  ///< dense by vertex index; meaningful on boundary
  Nonlinearity nonlinearity;
};

/// Validates the interior/boundary split and the boundary data: `values`
/// must cover exactly the complement of `interior` with finite numbers.
DirichletProblem make_dirichlet_problem(
    const WeightedGraph& g, const VertexSet& interior,
    std::span<const std::pair<VertexId, double>> values, Nonlinearity f);

struct SolveReport {
  ScalarField solution;
  double residual_sup = 0.0;
  int iterations = 0;
  int damping_events = 0;  ///< total line-search halvings
  std::vector<double> continuation_steps;
  double energy_interior = 0.0;  ///< sum over interior of mu * e^u
  bool converged = false;
};

/// Base of the solver failure modes; carries the last iterate (dense by
/// vertex index) for diagnosis, and the continuation stage that failed
/// (1.0 for a plain solve).
class SolveError : public std::runtime_error {
 public:
  SolveError(const std::string& what, std::vector<double> last_iterate,
             double failed_t)
      : std::runtime_error(what),
        last_iterate(std::move(last_iterate)),
        failed_t(failed_t) {}

  std::vector<double> last_iterate;
  double failed_t;
};

class SingularJacobianError : public SolveError {
 public:
  using SolveError::SolveError;
};

class NonConvergenceError : public SolveError {
 public:
  using SolveError::SolveError;
};

/// r(x) = Delta u(x) + F(u(x)) on interior vertices, 0 on the boundary.
/// Requires u to match the prescribed boundary values exactly.
ScalarField residual(const DirichletProblem& p, const ScalarField& u);

/// Solution of the linear problem Delta u = 0 with the prescribed boundary
/// values; the default Newton initial guess.
ScalarField harmonic_extension(const DirichletProblem& p);

/// Jacobian of the interior residual with respect to the interior unknowns,
/// in the order p.interior.indices(). Exposed for finite-difference checks.
Matrix interior_jacobian(const DirichletProblem& p, const ScalarField& u);

/// Damped Newton on the interior unknowns: dense LU with partial pivoting,
/// backtracking line search that halves the step until the Euclidean residual
/// norm drops (at most 30 halvings per iteration), convergence when the
/// residual sup-norm reaches tol. Throws SingularJacobianError or
/// NonConvergenceError, both carrying the last iterate.
SolveReport newton_solve(const DirichletProblem& p, const ScalarField& initial,
                         double tol = 1e-10, int max_iter = 50);

/// Solves with nonlinearity t*F along an increasing schedule ending at 1,
/// warm-starting each stage from the previous solution (first stage from the
/// harmonic extension). Failures propagate with the failing t attached.
SolveReport continuation_solve(const DirichletProblem& p,
                               std::span<const double> t_schedule,
                               double tol = 1e-10, int max_iter = 50);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// The explicit planar solution family
///   ln(32 lambda^2 / (4 + lambda^2 |p - center|^2)^2),
/// radially symmetric about `center` with its maximum there. lambda > 0.
double bubble(Point2 p, Point2 center, double lambda);

/// Discrete maximum-principle sanity numbers for a converged exponential
/// solve: at the interior argmax, Delta u <= 0, so
/// e^{u_max} = -Delta u(argmax) <= Deg(argmax) * (u_max - min u).
/// Reported as a diagnostic for logs, never asserted by the solver.
struct MaxPrincipleDiagnostic {
  VertexId argmax = 0;
  double u_max = 0.0;
  double laplacian_at_argmax = 0.0;  ///< expected <= 0
  double exp_u_max = 0.0;
  double degree_bound = 0.0;  ///< Deg(argmax) * (u_max - min u)
};
MaxPrincipleDiagnostic max_principle_diagnostic(const DirichletProblem& p,
                                                const ScalarField& u);

/// Why no finite closed graph carries a global solution: the Laplacian
/// integrates to zero while the energy is positive, so the sup-norm of
/// Delta u + e^u is at least energy / total measure for every field u.
struct ObstructionReport {
  double laplacian_integral = 0.0;  ///< sum mu * Delta u; zero up to rounding
  double energy = 0.0;              ///< sum mu * e^u, strictly positive
};
ObstructionReport closed_graph_obstruction(const WeightedGraph& g,
                                           const ScalarField& u);

std::string solve_report_to_json(const SolveReport& report);

}  // namespace lvg
