#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace hyplant {

/// Smooth equality-constrained minimization over a box:
///
///   min f(z)   s.t.  c(z) = 0,  lower <= z <= upper.
///
/// The constraint Jacobian is sparse with a fixed pattern; only the values
/// callback runs per iteration. Optional per-variable / per-constraint /
/// objective scales define the scaled space the solver actually works in
/// (and the space the reported residuals live in).
struct NlpProblem {
  int num_vars = 0;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> initial;

  /// Returns f(z) and fills grad with df/dz (size num_vars).
  std::function<double(std::span<const double>, std::span<double>)> objective;

  int num_constraints = 0;
  std::function<void(std::span<const double>, std::span<double>)> constraints;
  std::vector<int> jacobian_rows;
  std::vector<int> jacobian_cols;
  std::function<void(std::span<const double>, std::span<double>)> jacobian_values;

  std::vector<double> variable_scale;    // empty = all 1
  std::vector<double> constraint_scale;  // empty = all 1
  double objective_scale = 1.0;

  void validate() const;
};

struct NlpOptions {
  double constraint_tol = 1e-6;  // scaled infinity norm of c
  double kkt_tol = 1e-5;         // scaled projected-gradient norm
  int max_outer_iterations = 60;
  int max_inner_iterations = 3000;      // per outer iteration
  long max_total_inner_iterations = 400000;
  double initial_penalty = 10.0;
  double penalty_growth = 10.0;
  double max_penalty = 1e8;
  int max_cg_iterations = 200;  // per Newton step inside the inner solve
  bool log_enabled = true;
};

enum class NlpStatus { converged, iteration_limit };

struct NlpSolution {
  std::vector<double> point;
  std::vector<double> multipliers;  // unscaled equality multipliers
  double objective = 0.0;           // unscaled f at the point
  double constraint_violation = 0.0;      // scaled ||c||_inf
  double constraint_violation_raw = 0.0;  // unscaled ||c||_inf
  double kkt_residual = 0.0;              // scaled projected-gradient norm
  int outer_iterations = 0;
  long inner_iterations = 0;
  NlpStatus status = NlpStatus::converged;
  std::string log;  // one line per outer iteration

  bool converged() const { return status == NlpStatus::converged; }
};

/// Augmented-Lagrangian method: bound-constrained subproblems minimized by
/// a projected L-BFGS iteration, first-order multiplier updates, penalty
/// growth when feasibility stalls. Deterministic given the initial point.
/// Throws on non-finite callback values.
NlpSolution solve_nlp(const NlpProblem& problem, const NlpOptions& options = {});

/// Central-difference check of the objective gradient and constraint
/// Jacobian at a point. Intended for tests on small problems (O(n m) work).
struct DerivativeCheck {
  double max_objective_gradient_error = 0.0;
  double max_jacobian_error = 0.0;
};
DerivativeCheck verify_derivatives(const NlpProblem& problem, std::span<const double> point,
                                   double step = 1e-6);

}  // namespace hyplant
