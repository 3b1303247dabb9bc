#include "ccuc/milp.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace ccuc::milp {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::GapLimit: return "gap_limit";
    case SolveStatus::TimeLimit: return "time_limit";
  }
  return "unknown";
}

void SolverOptions::validate() const {
  if (rel_gap <= 0 || time_limit <= 0 || feasibility_tol <= 0 ||
      integrality_tol <= 0) {
    throw std::invalid_argument("solver tolerances must be positive");
  }
}

int LinearProgram::add_variable(const std::string& name, double lower,
                                double upper, VarKind kind) {
  if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
    throw std::invalid_argument("variable '" + name + "': bad bounds");
  }
  if (kind == VarKind::Binary) {
    if (lower < 0.0 || upper > 1.0) {
      throw std::invalid_argument("binary variable '" + name +
                                  "': bounds outside [0,1]");
    }
    ++num_binaries_;
  }
  VariableRef v;
  v.id = static_cast<int>(vars_.size());
  v.kind = kind;
  v.lower = lower;
  v.upper = upper;
  v.name = name;
  vars_.push_back(std::move(v));
  obj_.push_back(0.0);
  return vars_.back().id;
}

void LinearProgram::add_objective(int var, double coeff) {
  if (var < 0 || var >= num_variables()) {
    throw std::invalid_argument("objective term: unknown variable");
  }
  if (!std::isfinite(coeff)) {
    throw std::invalid_argument("objective term: non-finite coefficient");
  }
  obj_[var] += coeff;
}

int LinearProgram::add_constraint(const std::string& name,
                                  std::vector<Term> terms, Sense sense,
                                  double rhs) {
  std::set<int> seen;
  for (const Term& t : terms) {
    if (t.var < 0 || t.var >= num_variables()) {
      throw std::invalid_argument("constraint '" + name +
                                  "': unknown variable");
    }
    if (!std::isfinite(t.coeff)) {
      throw std::invalid_argument("constraint '" + name +
                                  "': non-finite coefficient");
    }
    if (!seen.insert(t.var).second) {
      throw std::invalid_argument("constraint '" + name +
                                  "': duplicate variable " +
                                  vars_[t.var].name);
    }
  }
  if (!std::isfinite(rhs)) {
    throw std::invalid_argument("constraint '" + name + "': non-finite rhs");
  }
  LinearConstraint c;
  c.name = name;
  c.terms = std::move(terms);
  c.sense = sense;
  c.rhs = rhs;
  cons_.push_back(std::move(c));
  return num_constraints() - 1;
}

double LinearProgram::eval_objective(const Eigen::VectorXd& x) const {
  double v = 0.0;
  for (int j = 0; j < num_variables(); ++j) v += obj_[j] * x[j];
  return v;
}

double LinearProgram::constraint_violation(int row,
                                           const Eigen::VectorXd& x) const {
  const LinearConstraint& c = cons_.at(row);
  double lhs = 0.0;
  for (const Term& t : c.terms) lhs += t.coeff * x[t.var];
  switch (c.sense) {
    case Sense::LessEqual: return lhs - c.rhs;
    case Sense::GreaterEqual: return c.rhs - lhs;
    case Sense::Equal: return std::abs(lhs - c.rhs);
  }
  return 0.0;
}

double LinearProgram::max_violation(const Eigen::VectorXd& x) const {
  double worst = 0.0;
  for (int i = 0; i < num_constraints(); ++i) {
    worst = std::max(worst, constraint_violation(i, x));
  }
  for (int j = 0; j < num_variables(); ++j) {
    worst = std::max(worst, vars_[j].lower - x[j]);
    worst = std::max(worst, x[j] - vars_[j].upper);
  }
  return worst;
}

namespace {

void append_terms(std::ostringstream& out, const std::vector<Term>& terms,
                  const std::vector<VariableRef>& vars) {
  bool first = true;
  for (const Term& t : terms) {
    double c = t.coeff;
    if (first) {
      if (c < 0) out << "- ";
      first = false;
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    out << std::abs(c) << ' ' << vars[t.var].name;
  }
  if (first) out << "0";
}

}  // namespace

std::string LinearProgram::dump() const {
  std::ostringstream out;
  out.precision(12);
  out << (maximize_ ? "Maximize\n obj: " : "Minimize\n obj: ");
  std::vector<Term> objterms;
  for (int j = 0; j < num_variables(); ++j) {
    if (obj_[j] != 0.0) objterms.push_back({j, obj_[j]});
  }
  append_terms(out, objterms, vars_);
  out << "\nSubject To\n";
  for (const LinearConstraint& c : cons_) {
    out << ' ' << c.name << ": ";
    append_terms(out, c.terms, vars_);
    switch (c.sense) {
      case Sense::LessEqual: out << " <= "; break;
      case Sense::Equal: out << " = "; break;
      case Sense::GreaterEqual: out << " >= "; break;
    }
    out << c.rhs << '\n';
  }
  out << "Bounds\n";
  for (const VariableRef& v : vars_) {
    if (v.lower == -kInf && v.upper == kInf) {
      out << ' ' << v.name << " free\n";
    } else if (v.lower == -kInf) {
      out << ' ' << v.name << " <= " << v.upper << '\n';
    } else if (v.upper == kInf) {
      out << ' ' << v.name << " >= " << v.lower << '\n';
    } else {
      out << ' ' << v.lower << " <= " << v.name << " <= " << v.upper << '\n';
    }
  }
  bool any_bin = false;
  for (const VariableRef& v : vars_) {
    if (v.kind == VarKind::Binary) {
      if (!any_bin) {
        out << "Binaries\n";
        any_bin = true;
      }
      out << ' ' << v.name << '\n';
    }
  }
  out << "End\n";
  return out.str();
}

}  // namespace ccuc::milp
