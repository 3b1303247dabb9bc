#include "ccuc/simplex.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

namespace ccuc::milp {

namespace {

constexpr double kPivotTol = 1e-9;  // minimum |pivot element|
constexpr double kDualTol = 1e-9;   // reduced-cost optimality tolerance
constexpr double kBoundTol = 1e-9;  // ratio-test tie tolerance
constexpr int kRefreshInterval = 512;

enum class VarState : unsigned char { Basic, AtLower, AtUpper, FreeZero };

class SimplexTableau {
 public:
  SimplexTableau(const LinearProgram& program,
                 const std::vector<double>& lo_s,
                 const std::vector<double>& hi_s)
      : program_(program),
        m_(program.num_constraints()),
        n_(program.num_variables()) {
    // Nonbasic structurals start at a finite bound (or 0 when free); the
    // residual of each row then decides slack vs artificial basis.
    auto start_value = [&](int j) {
      const bool upper_pref = program.variable(j).prefer_upper_start;
      if (upper_pref && std::isfinite(hi_s[j])) return hi_s[j];
      if (std::isfinite(lo_s[j])) return lo_s[j];
      if (std::isfinite(hi_s[j])) return hi_s[j];
      return 0.0;
    };
    std::vector<double> residual(m_);
    std::vector<char> needs_art(m_, 0);
    int n_art = 0;
    for (int i = 0; i < m_; ++i) {
      const LinearConstraint& c = program.constraint(i);
      double ax = 0.0;
      for (const Term& t : c.terms) ax += t.coeff * start_value(t.var);
      residual[i] = c.rhs - ax;
      bool slack_ok = false;
      switch (c.sense) {
        case Sense::LessEqual: slack_ok = residual[i] >= 0.0; break;
        case Sense::GreaterEqual: slack_ok = residual[i] <= 0.0; break;
        case Sense::Equal: slack_ok = residual[i] == 0.0; break;
      }
      if (!slack_ok) {
        needs_art[i] = 1;
        ++n_art;
      }
    }

    // columns appearing in exactly one row can serve as crash basics
    std::vector<int> row_count(n_, 0), only_row(n_, -1);
    std::vector<double> only_coeff(n_, 0.0);
    for (int i = 0; i < m_; ++i) {
      for (const Term& t : program.constraint(i).terms) {
        ++row_count[t.var];
        only_row[t.var] = i;
        only_coeff[t.var] = t.coeff;
      }
    }
    std::vector<int> crash_col(m_, -1);
    for (int j = 0; j < n_; ++j) {
      if (row_count[j] != 1) continue;
      int i = only_row[j];
      if (!needs_art[i] || crash_col[i] >= 0) continue;
      if (std::abs(only_coeff[j]) < 1e-9) continue;
      double v = start_value(j) + residual[i] / only_coeff[j];
      if (v >= lo_s[j] - 1e-12 && v <= hi_s[j] + 1e-12) {
        crash_col[i] = j;
        needs_art[i] = 0;
        --n_art;
      }
    }

    ncols_ = n_ + m_ + n_art;
    tab_.setZero(m_, ncols_);
    xB_.setZero(m_);
    lo_.setConstant(ncols_, 0.0);
    hi_.setConstant(ncols_, kInf);
    cost_.setZero(ncols_);
    basis_.assign(m_, -1);
    state_.assign(ncols_, VarState::AtLower);

    for (int j = 0; j < n_; ++j) {
      lo_[j] = lo_s[j];
      hi_[j] = hi_s[j];
      const bool upper_pref = program.variable(j).prefer_upper_start;
      if (upper_pref && std::isfinite(hi_[j])) state_[j] = VarState::AtUpper;
      else if (std::isfinite(lo_[j])) state_[j] = VarState::AtLower;
      else if (std::isfinite(hi_[j])) state_[j] = VarState::AtUpper;
      else state_[j] = VarState::FreeZero;
    }
    for (int i = 0; i < m_; ++i) {
      const LinearConstraint& c = program.constraint(i);
      for (const Term& t : c.terms) tab_(i, t.var) += t.coeff;
      int s = n_ + i;
      tab_(i, s) = 1.0;
      switch (c.sense) {
        case Sense::LessEqual: lo_[s] = 0.0; hi_[s] = kInf; break;
        case Sense::GreaterEqual: lo_[s] = -kInf; hi_[s] = 0.0; break;
        case Sense::Equal: lo_[s] = 0.0; hi_[s] = 0.0; break;
      }
      state_[s] = (c.sense == Sense::GreaterEqual) ? VarState::AtUpper
                                                   : VarState::AtLower;
    }
    int next_art = n_ + m_;
    for (int i = 0; i < m_; ++i) {
      if (crash_col[i] >= 0) {
        int j = crash_col[i];
        // row scaled so the crash basic's column is +1; its value absorbs
        // the residual and the slack stays nonbasic at zero
        double coeff = tab_(i, j);
        tab_.row(i) /= coeff;
        basis_[i] = j;
        xB_[i] = start_value(j) + residual[i] / coeff;
        state_[j] = VarState::Basic;
      } else if (!needs_art[i]) {
        basis_[i] = n_ + i;
        state_[n_ + i] = VarState::Basic;
        xB_[i] = residual[i];
      } else {
        int a = next_art++;
        // keep the basic (artificial) column at +e_i so the tableau starts
        // in reduced form: rows with negative residual are negated outright
        if (residual[i] < 0) tab_.row(i) = -tab_.row(i);
        tab_(i, a) = 1.0;
        basis_[i] = a;
        state_[a] = VarState::Basic;
        xB_[i] = std::abs(residual[i]);
        cost_[a] = 1.0;  // phase-1 objective
      }
    }
    has_artificials_ = n_art > 0;
  }

  bool has_artificials() const { return has_artificials_; }

  double artificial_infeasibility() const {
    double v = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= n_ + m_) v += std::max(0.0, xB_[i]);
    }
    return v;
  }

  void pin_artificials() {
    for (int a = n_ + m_; a < ncols_; ++a) {
      lo_[a] = 0.0;
      hi_[a] = 0.0;
    }
  }

  void set_phase2_costs(double sign) {
    cost_.setZero();
    for (int j = 0; j < n_; ++j) cost_[j] = sign * program_.objective()[j];
  }

  void recompute_reduced_costs() {
    Eigen::VectorXd cB(m_);
    for (int i = 0; i < m_; ++i) cB[i] = cost_[basis_[i]];
    zrow_ = cost_ - tab_.transpose() * cB;
  }

  // Recomputes xB = B^{-1}(b - A_N x_N) from original data; the slack block
  // of the tableau is exactly B^{-1}.
  void refresh_basic_values() {
    Eigen::VectorXd r(m_);
    for (int i = 0; i < m_; ++i) {
      const LinearConstraint& c = program_.constraint(i);
      double ax = 0.0;
      for (const Term& t : c.terms) {
        if (state_[t.var] != VarState::Basic) ax += t.coeff * value(t.var);
      }
      int s = n_ + i;
      if (state_[s] != VarState::Basic) ax += value(s);
      // nonbasic artificials are pinned at 0 and contribute nothing
      r[i] = c.rhs - ax;
    }
    xB_ = tab_.middleCols(n_, m_) * r;
  }

  // Returns true at optimum, false if unbounded.
  bool iterate(long max_iters, const char* phase, bool bland_from_start) {
    long stall = 0;
    bool bland = bland_from_start;
    double last_obj = kInf;
    for (long it = 0; it < max_iters; ++it) {
      int enter = -1, dir = 0;
      if (bland) {
        for (int j = 0; j < ncols_; ++j) {
          int d;
          if (eligible(j, d)) { enter = j; dir = d; break; }
        }
      } else {
        double best = kDualTol;
        for (int j = 0; j < ncols_; ++j) {
          int d;
          if (eligible(j, d) && std::abs(zrow_[j]) > best) {
            best = std::abs(zrow_[j]);
            enter = j;
            dir = d;
          }
        }
      }
      if (enter < 0) return true;

      Ratio r = ratio_test(enter, dir, bland);
      if (!std::isfinite(r.step)) return false;
      pivot(enter, dir, r);

      if ((it + 1) % kRefreshInterval == 0) {
        refresh_basic_values();
        recompute_reduced_costs();
      }
      double obj = current_objective();
      if (obj < last_obj - 1e-12 * (1.0 + std::abs(last_obj))) {
        stall = 0;
        last_obj = obj;
      } else if (!bland && ++stall > 2L * (m_ + ncols_) + 50) {
        bland = true;
        stall = 0;
      }
    }
    throw SolveError(std::string("simplex iteration limit reached in ") +
                     phase);
  }

  Eigen::VectorXd primal() const {
    Eigen::VectorXd x(n_);
    for (int j = 0; j < n_; ++j) x[j] = value(j);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = xB_[i];
    }
    return x;
  }

  Eigen::VectorXd duals(double sign) const {
    // Initial slack column of row i is e_i, so its reduced cost is -y_i.
    Eigen::VectorXd y(m_);
    for (int i = 0; i < m_; ++i) y[i] = -sign * zrow_[n_ + i];
    return y;
  }

 private:
  struct Ratio {
    double step = kInf;
    int row = -1;  // -1: blocked by the entering variable's own bound span
    bool to_upper = false;
  };

  double value(int j) const {
    switch (state_[j]) {
      case VarState::AtLower: return lo_[j];
      case VarState::AtUpper: return hi_[j];
      case VarState::FreeZero: return 0.0;
      case VarState::Basic: break;
    }
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] == j) return xB_[i];
    }
    return 0.0;
  }

  bool eligible(int j, int& dir) const {
    if (state_[j] == VarState::Basic) return false;
    if (hi_[j] - lo_[j] <= 0.0) return false;  // fixed column
    double z = zrow_[j];
    switch (state_[j]) {
      case VarState::AtLower:
        if (z < -kDualTol) { dir = +1; return true; }
        return false;
      case VarState::AtUpper:
        if (z > kDualTol) { dir = -1; return true; }
        return false;
      case VarState::FreeZero:
        if (z < -kDualTol) { dir = +1; return true; }
        if (z > kDualTol) { dir = -1; return true; }
        return false;
      case VarState::Basic: break;
    }
    return false;
  }

  Ratio ratio_test(int enter, int dir, bool bland) const {
    Ratio best;
    double span = hi_[enter] - lo_[enter];
    if (std::isfinite(span)) best.step = span;
    for (int i = 0; i < m_; ++i) {
      double w = dir * tab_(i, enter);
      if (std::abs(w) < kPivotTol) continue;
      int b = basis_[i];
      double step;
      bool to_upper;
      if (w > 0) {  // basic decreases toward its lower bound
        if (lo_[b] == -kInf) continue;
        step = (xB_[i] - lo_[b]) / w;
        to_upper = false;
      } else {  // basic increases toward its upper bound
        if (hi_[b] == kInf) continue;
        step = (hi_[b] - xB_[i]) / (-w);
        to_upper = true;
      }
      if (step < 0.0) step = 0.0;
      bool better;
      if (best.row < 0) {
        better = step <= best.step + kBoundTol;
      } else if (step < best.step - kBoundTol) {
        better = true;
      } else if (step <= best.step + kBoundTol) {
        better = bland ? b < basis_[best.row]
                       : std::abs(tab_(i, enter)) >
                             std::abs(tab_(best.row, enter));
      } else {
        better = false;
      }
      if (better) {
        best.step = step;
        best.row = i;
        best.to_upper = to_upper;
      }
    }
    return best;
  }

  void pivot(int enter, int dir, const Ratio& r) {
    double step = r.step;
    double enter_val = value(enter) + dir * step;
    if (step != 0.0) {
      xB_ -= (dir * step) * tab_.col(enter);
    }
    if (r.row < 0) {  // bound flip
      state_[enter] = (state_[enter] == VarState::AtLower)
                          ? VarState::AtUpper
                          : VarState::AtLower;
      return;
    }
    int leave = basis_[r.row];
    state_[leave] = r.to_upper ? VarState::AtUpper : VarState::AtLower;
    basis_[r.row] = enter;
    state_[enter] = VarState::Basic;
    xB_[r.row] = enter_val;

    double piv = tab_(r.row, enter);
    tab_.row(r.row) /= piv;
    Eigen::RowVectorXd prow = tab_.row(r.row);
    for (int i = 0; i < m_; ++i) {
      if (i == r.row) continue;
      double f = tab_(i, enter);
      if (f != 0.0) tab_.row(i) -= f * prow;
    }
    double zf = zrow_[enter];
    if (zf != 0.0) zrow_ -= zf * prow.transpose();
  }

  double current_objective() const {
    double obj = 0.0;
    for (int i = 0; i < m_; ++i) obj += cost_[basis_[i]] * xB_[i];
    for (int j = 0; j < ncols_; ++j) {
      if (cost_[j] == 0.0 || state_[j] == VarState::Basic) continue;
      if (state_[j] == VarState::AtLower) obj += cost_[j] * lo_[j];
      else if (state_[j] == VarState::AtUpper) obj += cost_[j] * hi_[j];
    }
    return obj;
  }

  const LinearProgram& program_;
  int m_, n_, ncols_ = 0;
  Eigen::MatrixXd tab_;
  Eigen::VectorXd xB_, zrow_, lo_, hi_, cost_;
  std::vector<int> basis_;
  std::vector<VarState> state_;
  bool has_artificials_ = false;
};

}  // namespace

SolveResult solve_lp_relaxation(const LinearProgram& program,
                                const SolverOptions& options,
                                const std::vector<double>& lower_override,
                                const std::vector<double>& upper_override) {
  options.validate();
  const int n = program.num_variables();
  const int m = program.num_constraints();

  std::vector<double> lo_s(n), hi_s(n);
  for (int j = 0; j < n; ++j) {
    const VariableRef& v = program.variable(j);
    lo_s[j] = lower_override.empty() ? v.lower : lower_override[j];
    hi_s[j] = upper_override.empty() ? v.upper : upper_override[j];
    if (lo_s[j] > hi_s[j]) {
      SolveResult r;
      r.status = SolveStatus::Infeasible;
      return r;
    }
  }

  SimplexTableau t(program, lo_s, hi_s);
  const long max_iters = 20000L + 60L * (m + n);

  if (t.has_artificials()) {
    t.recompute_reduced_costs();
    if (!t.iterate(max_iters, "phase 1", options.bland_pricing)) {
      throw SolveError("phase-1 objective unbounded (internal error)");
    }
    double infeas = t.artificial_infeasibility();
    if (infeas > options.feasibility_tol) {
      SolveResult r;
      r.status = SolveStatus::Infeasible;
      r.objective = infeas;
      return r;
    }
    t.pin_artificials();
  }

  double sign = program.maximize() ? -1.0 : 1.0;
  t.set_phase2_costs(sign);
  t.recompute_reduced_costs();
  if (!t.iterate(max_iters, "phase 2", options.bland_pricing)) {
    SolveResult r;
    r.status = SolveStatus::Unbounded;
    return r;
  }
  t.refresh_basic_values();

  SolveResult res;
  res.status = SolveStatus::Optimal;
  res.primal = t.primal();
  res.objective = program.eval_objective(res.primal);
  res.bound = res.objective;
  res.gap = 0.0;
  res.duals = t.duals(sign);

  double worst = 0.0;
  for (int i = 0; i < m; ++i) {
    worst = std::max(worst, program.constraint_violation(i, res.primal));
  }
  for (int j = 0; j < n; ++j) {
    worst = std::max(worst, lo_s[j] - res.primal[j]);
    worst = std::max(worst, res.primal[j] - hi_s[j]);
  }
  if (worst > std::max(1e-6, options.feasibility_tol * 100)) {
    throw SolveError("simplex returned an infeasible point (violation " +
                     std::to_string(worst) + ")");
  }
  return res;
}

SolveResult solve_lp(const LinearProgram& program,
                     const SolverOptions& options) {
  if (program.has_binaries()) {
    throw std::invalid_argument(
        "solve_lp: program has binary variables; use solve_milp");
  }
  return solve_lp_relaxation(program, options, {}, {});
}

}  // namespace ccuc::milp
