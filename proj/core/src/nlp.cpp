#include "hyplant/nlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace hyplant {

namespace {

using Vec = std::vector<double>;

double inf_norm(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// The problem mapped into scaled space: zh = z / xs, ch = c / cs, fh = f / fs.
class ScaledProblem {
 public:
  ScaledProblem(const NlpProblem& p) : p_(p) {
    xs_ = p.variable_scale.empty() ? Vec(p.num_vars, 1.0) : p.variable_scale;
    cs_ = p.constraint_scale.empty() ? Vec(p.num_constraints, 1.0) : p.constraint_scale;
    fs_ = p.objective_scale > 0.0 ? p.objective_scale : 1.0;
    for (double s : xs_) {
      if (!(s > 0.0)) throw std::invalid_argument("variable scales must be > 0");
    }
    for (double s : cs_) {
      if (!(s > 0.0)) throw std::invalid_argument("constraint scales must be > 0");
    }
    lower_.resize(p.num_vars);
    upper_.resize(p.num_vars);
    for (int i = 0; i < p.num_vars; ++i) {
      lower_[i] = p.lower[i] / xs_[i];
      upper_[i] = p.upper[i] / xs_[i];
    }
    z_raw_.resize(p.num_vars);
    grad_raw_.resize(p.num_vars);
    c_raw_.resize(p.num_constraints);
    jac_raw_.resize(p.jacobian_rows.size());
  }

  int n() const { return p_.num_vars; }
  int m() const { return p_.num_constraints; }
  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }
  double objective_scale() const { return fs_; }
  const Vec& variable_scale() const { return xs_; }
  const Vec& constraint_scale() const { return cs_; }

  Vec scale_point(const Vec& z) const {
    Vec out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] / xs_[i];
    return out;
  }
  Vec unscale_point(const Vec& zh) const {
    Vec out(zh.size());
    for (std::size_t i = 0; i < zh.size(); ++i) out[i] = zh[i] * xs_[i];
    return out;
  }

  /// fh and its gradient in scaled space. Returns false on non-finite values.
  bool eval_objective(const Vec& zh, double& fh, Vec& gh) {
    to_raw(zh);
    double f = p_.objective(z_raw_, grad_raw_);
    if (!std::isfinite(f)) return false;
    for (int i = 0; i < p_.num_vars; ++i) {
      if (!std::isfinite(grad_raw_[i])) return false;
      gh[i] = grad_raw_[i] * xs_[i] / fs_;
    }
    fh = f / fs_;
    return true;
  }

  bool eval_constraints(const Vec& zh, Vec& ch) {
    if (m() == 0) return true;
    to_raw(zh);
    p_.constraints(z_raw_, c_raw_);
    for (int i = 0; i < m(); ++i) {
      if (!std::isfinite(c_raw_[i])) return false;
      ch[i] = c_raw_[i] / cs_[i];
    }
    return true;
  }

  /// Scaled Jacobian values for the fixed pattern.
  bool eval_jacobian(const Vec& zh, Vec& vals) {
    if (m() == 0) return true;
    to_raw(zh);
    p_.jacobian_values(z_raw_, jac_raw_);
    for (std::size_t k = 0; k < jac_raw_.size(); ++k) {
      if (!std::isfinite(jac_raw_[k])) return false;
      vals[k] = jac_raw_[k] * xs_[static_cast<std::size_t>(p_.jacobian_cols[k])] /
                cs_[static_cast<std::size_t>(p_.jacobian_rows[k])];
    }
    return true;
  }

  /// out += J^T w with the scaled Jacobian values.
  void add_jacobian_transpose(const Vec& vals, const Vec& w, Vec& out) const {
    for (std::size_t k = 0; k < vals.size(); ++k) {
      out[static_cast<std::size_t>(p_.jacobian_cols[k])] +=
          vals[k] * w[static_cast<std::size_t>(p_.jacobian_rows[k])];
    }
  }

  /// out = J v with the scaled Jacobian values.
  void jacobian_product(const Vec& vals, const Vec& v, Vec& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t k = 0; k < vals.size(); ++k) {
      out[static_cast<std::size_t>(p_.jacobian_rows[k])] +=
          vals[k] * v[static_cast<std::size_t>(p_.jacobian_cols[k])];
    }
  }

  double raw_violation(const Vec& ch) const {
    double m = 0.0;
    for (std::size_t i = 0; i < ch.size(); ++i) m = std::max(m, std::abs(ch[i] * cs_[i]));
    return m;
  }

 private:
  void to_raw(const Vec& zh) {
    for (int i = 0; i < p_.num_vars; ++i) z_raw_[i] = zh[i] * xs_[i];
  }

  const NlpProblem& p_;
  Vec xs_, cs_;
  double fs_ = 1.0;
  Vec lower_, upper_;
  Vec z_raw_, grad_raw_, c_raw_, jac_raw_;
};

}  // namespace

void NlpProblem::validate() const {
  if (num_vars <= 0) throw std::invalid_argument("nlp: need at least one variable");
  if (static_cast<int>(lower.size()) != num_vars || static_cast<int>(upper.size()) != num_vars ||
      static_cast<int>(initial.size()) != num_vars) {
    throw std::invalid_argument("nlp: bounds/initial size mismatch");
  }
  for (int i = 0; i < num_vars; ++i) {
    if (!(lower[i] <= upper[i])) throw std::invalid_argument("nlp: infeasible bounds");
  }
  if (!objective) throw std::invalid_argument("nlp: missing objective");
  if (num_constraints > 0) {
    if (!constraints || !jacobian_values) {
      throw std::invalid_argument("nlp: missing constraint callbacks");
    }
    if (jacobian_rows.size() != jacobian_cols.size()) {
      throw std::invalid_argument("nlp: jacobian pattern size mismatch");
    }
    for (std::size_t k = 0; k < jacobian_rows.size(); ++k) {
      if (jacobian_rows[k] < 0 || jacobian_rows[k] >= num_constraints ||
          jacobian_cols[k] < 0 || jacobian_cols[k] >= num_vars) {
        throw std::invalid_argument("nlp: jacobian pattern out of range");
      }
    }
  }
}

NlpSolution solve_nlp(const NlpProblem& problem, const NlpOptions& options) {
  problem.validate();
  ScaledProblem sp(problem);
  const int n = sp.n();
  const int m = sp.m();

  const Vec& lo = sp.lower();
  const Vec& hi = sp.upper();
  auto project = [&](Vec& z) {
    for (int i = 0; i < n; ++i) z[i] = std::clamp(z[i], lo[i], hi[i]);
  };

  Vec z = sp.scale_point(problem.initial);
  project(z);

  Vec y(m, 0.0);           // multiplier estimates, scaled space
  double rho = options.initial_penalty;

  Vec c(m), jac(problem.jacobian_rows.size());
  Vec grad_f(n), grad_al(n);
  double f_hat = 0.0;

  // Augmented Lagrangian value and gradient at z; gradient uses the
  // first-order multiplier estimate y + rho c.
  auto eval_al = [&](const Vec& zz, double& value, Vec& grad, Vec& cc) -> bool {
    if (!sp.eval_objective(zz, f_hat, grad_f)) return false;
    if (!sp.eval_constraints(zz, cc)) return false;
    value = f_hat;
    for (int i = 0; i < m; ++i) value += y[i] * cc[i] + 0.5 * rho * cc[i] * cc[i];
    grad = grad_f;
    if (m > 0) {
      if (!sp.eval_jacobian(zz, jac)) return false;
      Vec w(m);
      for (int i = 0; i < m; ++i) w[i] = y[i] + rho * cc[i];
      sp.add_jacobian_transpose(jac, w, grad);
    }
    return true;
  };

  auto projected_gradient_norm = [&](const Vec& zz, const Vec& grad) {
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
      double step = std::clamp(zz[i] - grad[i], lo[i], hi[i]) - zz[i];
      norm = std::max(norm, std::abs(step));
    }
    return norm;
  };

  NlpSolution sol;
  std::ostringstream log;
  if (options.log_enabled) {
    log << "outer  inner    objective      ||c||       kkt        rho\n";
  }

  double al_value = 0.0;
  if (!eval_al(z, al_value, grad_al, c)) {
    throw std::runtime_error("nlp: non-finite objective/constraints at the initial point");
  }

  double prev_viol = inf_norm(c);
  long total_inner = 0;
  bool converged = false;
  int outer = 0;

  for (outer = 0; outer < options.max_outer_iterations && !converged; ++outer) {
    // Inner tolerance: loose early, tight once feasibility is in sight.
    double omega = std::max(options.kkt_tol * 0.5,
                            std::min(1e-2, 0.1 * std::max(prev_viol, options.kkt_tol)));

    int inner = 0;
    bool inner_converged = false;
    double bb_step = 1.0;  // secant estimate of the smooth curvature scale
    double pg = projected_gradient_norm(z, grad_al);
    std::vector<unsigned char> is_free(static_cast<std::size_t>(n), 1);
    Vec g_free(n), d(n), cg_r(n), cg_p(n), cg_hp(n), jv(m);
    Vec z_trial(n), grad_trial(n), c_trial(m);
    double al_trial = 0.0;

    while (inner < options.max_inner_iterations &&
           total_inner < options.max_total_inner_iterations) {
      if (pg <= omega) {
        inner_converged = true;
        break;
      }
      // Active face: bound-active coordinates whose gradient pushes
      // outward stay put; the Newton step lives on the rest.
      for (int i = 0; i < n; ++i) {
        bool at_lo = z[i] <= lo[i] + 1e-12 && grad_al[i] > 0.0;
        bool at_hi = z[i] >= hi[i] - 1e-12 && grad_al[i] < 0.0;
        is_free[static_cast<std::size_t>(i)] = !(at_lo || at_hi);
        g_free[i] = is_free[static_cast<std::size_t>(i)] ? grad_al[i] : 0.0;
      }

      // Inexact Newton on the free face by conjugate gradients, with the
      // Gauss-Newton AL Hessian rho J^T J plus a secant diagonal. The
      // diagonal models the smooth curvature the GN term misses and
      // regularizes the flat directions, along which the step then runs
      // until the box clips it. With constraints present it is capped well
      // below the penalty curvature: the secant estimate absorbs penalty
      // stiffness from the last step and would otherwise smother the GN
      // term and degrade the step to steepest descent.
      double sigma;
      if (m == 0) {
        sigma = std::clamp(1.0 / bb_step, 1e-8, 1e12);
      } else {
        double diag_mean = 0.0;
        for (double v : jac) diag_mean += v * v;
        diag_mean = rho * diag_mean / static_cast<double>(n);
        sigma = std::clamp(std::min(1.0 / bb_step, 1e-3 * diag_mean), 1e-10, 1e12);
      }
      auto hessian_product = [&](const Vec& v, Vec& out) {
        sp.jacobian_product(jac, v, jv);
        std::fill(out.begin(), out.end(), 0.0);
        sp.add_jacobian_transpose(jac, jv, out);
        for (int i = 0; i < n; ++i) {
          out[i] = is_free[static_cast<std::size_t>(i)] ? rho * out[i] + sigma * v[i] : 0.0;
        }
      };
      std::fill(d.begin(), d.end(), 0.0);
      cg_r = g_free;  // residual of H d + g at d = 0
      for (double& v : cg_p) v = 0.0;
      for (int i = 0; i < n; ++i) cg_p[i] = -cg_r[i];
      double r_dot = dot(cg_r, cg_r);
      double r_stop = std::max(1e-24, 0.01 * r_dot);
      for (int cg = 0; cg < options.max_cg_iterations && r_dot > r_stop; ++cg) {
        hessian_product(cg_p, cg_hp);
        double curvature = dot(cg_p, cg_hp);
        if (curvature <= 0.0) break;
        double alpha_cg = r_dot / curvature;
        for (int i = 0; i < n; ++i) {
          d[i] += alpha_cg * cg_p[i];
          cg_r[i] += alpha_cg * cg_hp[i];
        }
        double r_next = dot(cg_r, cg_r);
        double beta = r_next / r_dot;
        for (int i = 0; i < n; ++i) cg_p[i] = -cg_r[i] + beta * cg_p[i];
        r_dot = r_next;
      }

      // Backtracking Armijo along the projected arc.
      auto search = [&](const Vec& dir) {
        double alpha = 1.0;
        for (int ls = 0; ls < 60; ++ls) {
          for (int i = 0; i < n; ++i) z_trial[i] = std::clamp(z[i] + alpha * dir[i], lo[i], hi[i]);
          if (eval_al(z_trial, al_trial, grad_trial, c_trial)) {
            double directional = 0.0;
            for (int i = 0; i < n; ++i) directional += grad_al[i] * (z_trial[i] - z[i]);
            if (directional < 0.0 && al_trial <= al_value + 1e-4 * directional) return alpha;
          }
          alpha *= 0.5;
        }
        return 0.0;
      };

      double alpha = dot(d, g_free) < 0.0 ? search(d) : 0.0;
      if (alpha == 0.0) {
        // Newton direction rejected; fall back to a spectral gradient step.
        double scale = std::clamp(bb_step, 1e-12, 1e12);
        for (int i = 0; i < n; ++i) d[i] = -scale * g_free[i];
        alpha = search(d);
      }
      if (alpha == 0.0) break;  // stalled; let the outer loop take over

      double ss = 0.0, sy = 0.0;
      for (int i = 0; i < n; ++i) {
        double si = z_trial[i] - z[i];
        ss += si * si;
        sy += si * (grad_trial[i] - grad_al[i]);
      }
      if (sy > 1e-14 * ss && ss > 0.0) bb_step = std::clamp(ss / sy, 1e-12, 1e12);

      z = z_trial;
      al_value = al_trial;
      grad_al = grad_trial;
      c = c_trial;
      ++inner;
      ++total_inner;
      pg = projected_gradient_norm(z, grad_al);

      static const bool trace = std::getenv("HYPLANT_NLP_TRACE") != nullptr;
      if (trace && inner % 200 == 0) {
        std::fprintf(stderr, "    inner %d: pg=%.3e al=%.6e alpha=%.2e\n", inner, pg, al_value,
                     alpha);
      }
    }
    if (pg <= omega) inner_converged = true;

    // First-order multiplier update with the residuals the inner solve
    // equilibrated against. Updating from a point that is not yet
    // stationary only moves the target under the next subproblem, so an
    // unfinished inner solve skips the update and keeps going.
    Vec c_equilibrium = c;
    if (inner_converged) {
      for (int i = 0; i < m; ++i) {
        y[i] = std::clamp(y[i] + rho * c_equilibrium[i], -1e10, 1e10);
      }
    }

    // Snap variables sitting within rounding distance of a bound exactly
    // onto it; vertex solutions then satisfy bound-driven equalities
    // exactly instead of to the inner solve's resolution. This happens
    // after the multiplier update, which needs the pre-snap residuals.
    for (int i = 0; i < n; ++i) {
      double tol_i = 1e-9 * (1.0 + std::abs(z[i]));
      if (z[i] != lo[i] && z[i] - lo[i] <= tol_i) {
        z[i] = lo[i];
      } else if (z[i] != hi[i] && hi[i] - z[i] <= tol_i) {
        z[i] = hi[i];
      }
    }
    if (!eval_al(z, al_value, grad_al, c)) {
      throw std::runtime_error("nlp: non-finite callback while updating multipliers");
    }
    double viol = inf_norm(c);
    pg = projected_gradient_norm(z, grad_al);

    if (options.log_enabled) {
      log << outer << "  " << inner << "  " << f_hat * sp.objective_scale() << "  " << viol
          << "  " << pg << "  " << rho << "\n";
    }

    if (viol <= options.constraint_tol && pg <= options.kkt_tol) {
      converged = true;
      break;
    }

    // Grow the penalty only when a fully solved subproblem still stalls on
    // feasibility; growing it after an unfinished inner solve would only
    // make the next subproblem harder.
    if (inner_converged && inf_norm(c_equilibrium) > 0.25 * prev_viol &&
        viol > options.constraint_tol) {
      rho = std::min(rho * options.penalty_growth, options.max_penalty);
      if (!eval_al(z, al_value, grad_al, c)) {
        throw std::runtime_error("nlp: non-finite callback while updating the penalty");
      }
    }
    prev_viol = inf_norm(c_equilibrium);

    if (total_inner >= options.max_total_inner_iterations) break;
  }

  // Final diagnostics at the returned point, with the settled multipliers.
  if (!sp.eval_objective(z, f_hat, grad_f)) {
    throw std::runtime_error("nlp: non-finite objective at the final point");
  }
  sp.eval_constraints(z, c);
  Vec grad_lag = grad_f;
  if (m > 0) {
    sp.eval_jacobian(z, jac);
    sp.add_jacobian_transpose(jac, y, grad_lag);
  }

  sol.point = sp.unscale_point(z);
  sol.objective = f_hat * sp.objective_scale();
  sol.constraint_violation = inf_norm(c);
  sol.constraint_violation_raw = sp.raw_violation(c);
  sol.kkt_residual = projected_gradient_norm(z, grad_lag);
  sol.outer_iterations = outer;
  sol.inner_iterations = total_inner;
  sol.status = converged ? NlpStatus::converged : NlpStatus::iteration_limit;
  sol.multipliers.resize(m);
  for (int i = 0; i < m; ++i) {
    sol.multipliers[i] = y[i] * sp.objective_scale() / sp.constraint_scale()[i];
  }
  sol.log = log.str();
  return sol;
}

DerivativeCheck verify_derivatives(const NlpProblem& problem, std::span<const double> point,
                                   double step) {
  problem.validate();
  const int n = problem.num_vars;
  const int m = problem.num_constraints;
  Vec z(point.begin(), point.end());
  Vec grad(n);
  problem.objective(z, grad);

  DerivativeCheck check;
  Vec zp = z, zm = z, dummy(n);
  for (int j = 0; j < n; ++j) {
    double h = step * std::max(1.0, std::abs(z[j]));
    zp[j] = z[j] + h;
    zm[j] = z[j] - h;
    double fp = problem.objective(zp, dummy);
    double fm = problem.objective(zm, dummy);
    double fd = (fp - fm) / (2.0 * h);
    double scale = std::max({1.0, std::abs(fd), std::abs(grad[j])});
    check.max_objective_gradient_error =
        std::max(check.max_objective_gradient_error, std::abs(fd - grad[j]) / scale);
    zp[j] = z[j];
    zm[j] = z[j];
  }

  if (m > 0) {
    Vec vals(problem.jacobian_rows.size());
    problem.jacobian_values(z, vals);
    // Dense copy of the sparse pattern, then column-by-column differencing.
    std::vector<Vec> dense(m, Vec(n, 0.0));
    for (std::size_t k = 0; k < vals.size(); ++k) {
      dense[static_cast<std::size_t>(problem.jacobian_rows[k])]
           [static_cast<std::size_t>(problem.jacobian_cols[k])] += vals[k];
    }
    Vec cp(m), cm(m);
    for (int j = 0; j < n; ++j) {
      double h = step * std::max(1.0, std::abs(z[j]));
      zp[j] = z[j] + h;
      zm[j] = z[j] - h;
      problem.constraints(zp, cp);
      problem.constraints(zm, cm);
      for (int i = 0; i < m; ++i) {
        double fd = (cp[i] - cm[i]) / (2.0 * h);
        double scale = std::max({1.0, std::abs(fd), std::abs(dense[i][j])});
        check.max_jacobian_error =
            std::max(check.max_jacobian_error, std::abs(fd - dense[i][j]) / scale);
      }
      zp[j] = z[j];
      zm[j] = z[j];
    }
  }
  return check;
}

}  // namespace hyplant
