#include "ccuc/buc.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace ccuc::buc {

using milp::Sense;
using milp::Term;

std::set<int> CommitmentSolution::committed_units(int t) const {
  std::set<int> s;
  for (int g = 0; g < x.rows(); ++g) {
    if (x(g, t) != 0) s.insert(g);
  }
  return s;
}

std::set<int> CommitmentSolution::committed_units_any_period() const {
  std::set<int> s;
  for (int g = 0; g < x.rows(); ++g) {
    for (int t = 0; t < x.cols(); ++t) {
      if (x(g, t) != 0) {
        s.insert(g);
        break;
      }
    }
  }
  return s;
}

double CommitmentSolution::energy_cost(const Instance& instance) const {
  double c = 0.0;
  for (int g = 0; g < dispatch.rows(); ++g) {
    c += instance.system.generators[g].cost_marginal * dispatch.row(g).sum();
  }
  return c;
}

bool CutPool::add(contingency::FeasibilityCut cut) {
  std::ostringstream key;
  for (int g : cut.contingency.failed_gens) key << 'g' << g;
  for (int e : cut.contingency.failed_lines) key << 'e' << e;
  key << 't' << cut.period;
  key.precision(12);
  key << 'c' << cut.constant;
  for (int g = 0; g < cut.coef_x.size(); ++g) {
    key << 'x' << cut.coef_x[g] << 'p' << cut.coef_p[g];
  }
  if (!keys_.insert(key.str()).second) return false;
  cuts_.push_back(std::move(cut));
  return true;
}

namespace {

// accumulates coefficients so overlapping windows collapse into one term
class TermBuilder {
 public:
  void add(int var, double coeff) { coeffs_[var] += coeff; }
  std::vector<Term> take() const {
    std::vector<Term> out;
    out.reserve(coeffs_.size());
    for (const auto& [var, coeff] : coeffs_) {
      if (coeff != 0.0) out.push_back({var, coeff});
    }
    return out;
  }

 private:
  std::map<int, double> coeffs_;
};

}  // namespace

MasterProblem build_master(const Instance& instance, const CutPool& pool) {
  const PowerSystem& sys = instance.system;
  const int G = sys.num_generators();
  const int E = sys.num_lines();
  const int I = sys.num_buses();
  const int T = instance.periods();

  for (const Generator& g : sys.generators) {
    if (g.init_up > T || g.init_down > T) {
      throw ValidationError("generator " + g.name +
                            ": initial-condition obligation exceeds the "
                            "horizon");
    }
  }

  MasterProblem mp;
  MasterLayout& L = mp.layout;
  L.G = G;
  L.E = E;
  L.I = I;
  L.T = T;
  milp::MilpProgram& lp = mp.program;

  auto tname = [](const std::string& base, const std::string& who, int t) {
    return base + "_" + who + "_t" + std::to_string(t + 1);
  };

  L.x0 = lp.num_variables();
  for (int g = 0; g < G; ++g) {
    const Generator& gen = sys.generators[g];
    for (int t = 0; t < T; ++t) {
      // initial online/offline obligations pin the variable outright
      double lo = 0.0, hi = 1.0;
      if (t < gen.init_up) lo = 1.0;
      if (t < gen.init_down) hi = 0.0;
      lp.add_variable(tname("x", gen.name, t), lo, hi, milp::VarKind::Binary);
    }
  }
  L.cu0 = lp.num_variables();
  for (int g = 0; g < G; ++g) {
    for (int t = 0; t < T; ++t) {
      lp.add_variable(tname("cu", sys.generators[g].name, t), 0.0, milp::kInf);
      lp.add_objective(L.cu(g, t), 1.0);
    }
  }
  L.cd0 = lp.num_variables();
  for (int g = 0; g < G; ++g) {
    for (int t = 0; t < T; ++t) {
      lp.add_variable(tname("cd", sys.generators[g].name, t), 0.0, milp::kInf);
      lp.add_objective(L.cd(g, t), 1.0);
    }
  }
  L.p0 = lp.num_variables();
  for (int g = 0; g < G; ++g) {
    const Generator& gen = sys.generators[g];
    for (int t = 0; t < T; ++t) {
      lp.add_variable(tname("p", gen.name, t), 0.0, gen.p_max);
      lp.add_objective(L.p(g, t), gen.cost_marginal);
    }
  }
  L.f0 = lp.num_variables();
  for (int e = 0; e < E; ++e) {
    const TransmissionLine& ln = sys.lines[e];
    for (int t = 0; t < T; ++t) {
      lp.add_variable(tname("f", ln.name, t), -ln.flow_limit, ln.flow_limit);
    }
  }
  L.theta0 = lp.num_variables();
  for (int i = 0; i < I; ++i) {
    for (int t = 0; t < T; ++t) {
      // reference-bus angle is fixed to zero in every period
      bool ref = (i == sys.reference_bus);
      lp.add_variable(tname("th", sys.buses[i].name, t),
                      ref ? 0.0 : -milp::kInf, ref ? 0.0 : milp::kInf);
    }
  }

  // commitment coupling: minimum up/down in nominal and end-of-horizon
  // windows, with x^0 from the initial condition
  for (int g = 0; g < G; ++g) {
    const Generator& gen = sys.generators[g];
    const double x_init = gen.init_up > 0 ? 1.0 : 0.0;
    const int Tu = std::max(1, gen.min_up);
    const int Td = std::max(1, gen.min_down);

    for (int t = gen.init_up; Tu > 1 && t <= T - Tu; ++t) {
      // t is 0-based; covers printed range T^{u0}+1 .. T-T^u+1; the window
      // of a one-period minimum is trivially satisfied and skipped
      TermBuilder terms;
      for (int tp = t; tp < t + Tu; ++tp) terms.add(L.x(g, tp), 1.0);
      double rhs = 0.0;
      terms.add(L.x(g, t), -static_cast<double>(Tu));
      if (t == 0) {
        rhs = -static_cast<double>(Tu) * x_init;
      } else {
        terms.add(L.x(g, t - 1), static_cast<double>(Tu));
      }
      lp.add_constraint(tname("minup", gen.name, t), terms.take(),
                        Sense::GreaterEqual, rhs);
    }
    for (int t = std::max(gen.init_up, T - Tu + 1); t < T; ++t) {
      // end window: every remaining period must stay on after a start
      TermBuilder terms;
      const double w = static_cast<double>(T - t);
      for (int tp = t; tp < T; ++tp) terms.add(L.x(g, tp), 1.0);
      double rhs = 0.0;
      terms.add(L.x(g, t), -w);
      if (t == 0) {
        rhs = -w * x_init;
      } else {
        terms.add(L.x(g, t - 1), w);
      }
      lp.add_constraint(tname("minup_end", gen.name, t), terms.take(),
                        Sense::GreaterEqual, rhs);
    }
    for (int t = gen.init_down; Td > 1 && t <= T - Td; ++t) {
      TermBuilder terms;
      for (int tp = t; tp < t + Td; ++tp) terms.add(L.x(g, tp), -1.0);
      double rhs = -static_cast<double>(Td);
      terms.add(L.x(g, t), static_cast<double>(Td));
      if (t == 0) {
        rhs += static_cast<double>(Td) * x_init;
      } else {
        terms.add(L.x(g, t - 1), -static_cast<double>(Td));
      }
      lp.add_constraint(tname("mindn", gen.name, t), terms.take(),
                        Sense::GreaterEqual, rhs);
    }
    for (int t = std::max(gen.init_down, T - Td + 1); t < T; ++t) {
      TermBuilder terms;
      const double w = static_cast<double>(T - t);
      for (int tp = t; tp < T; ++tp) terms.add(L.x(g, tp), -1.0);
      double rhs = -w;
      terms.add(L.x(g, t), w);
      if (t == 0) {
        rhs += w * x_init;
      } else {
        terms.add(L.x(g, t - 1), -w);
      }
      lp.add_constraint(tname("mindn_end", gen.name, t), terms.take(),
                        Sense::GreaterEqual, rhs);
    }

    // startup / shutdown cost triggers; zero-cost sides need no row, the
    // variable's lower bound and objective pin them at zero
    for (int t = 0; t < T && gen.cost_startup > 0.0; ++t) {
      std::vector<Term> up = {{L.cu(g, t), 1.0},
                              {L.x(g, t), -gen.cost_startup}};
      double up_rhs = 0.0;
      if (t == 0) {
        up_rhs = -gen.cost_startup * x_init;
      } else {
        up.push_back({L.x(g, t - 1), gen.cost_startup});
      }
      lp.add_constraint(tname("startup", gen.name, t), std::move(up),
                        Sense::GreaterEqual, up_rhs);
    }
    for (int t = 0; t < T && gen.cost_shutdown > 0.0; ++t) {
      std::vector<Term> dn = {{L.cd(g, t), 1.0},
                              {L.x(g, t), gen.cost_shutdown}};
      double dn_rhs = 0.0;
      if (t == 0) {
        dn_rhs = gen.cost_shutdown * x_init;
      } else {
        dn.push_back({L.x(g, t - 1), -gen.cost_shutdown});
      }
      lp.add_constraint(tname("shutdown", gen.name, t), std::move(dn),
                        Sense::GreaterEqual, dn_rhs);
    }
  }

  // dispatch: bus balance, flow definition, output window, ramping
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < I; ++i) {
      std::vector<Term> terms;
      for (int g : sys.gens_at_bus[i]) terms.push_back({L.p(g, t), 1.0});
      for (int e : sys.lines_in[i]) terms.push_back({L.f(e, t), 1.0});
      for (int e : sys.lines_out[i]) terms.push_back({L.f(e, t), -1.0});
      lp.add_constraint(tname("bal", sys.buses[i].name, t), std::move(terms),
                        Sense::Equal, instance.demand.at(i, t));
    }
    for (int e = 0; e < E; ++e) {
      const TransmissionLine& ln = sys.lines[e];
      lp.add_constraint(tname("flow", ln.name, t),
                        {{L.theta(ln.from_bus, t), ln.susceptance},
                         {L.theta(ln.to_bus, t), -ln.susceptance},
                         {L.f(e, t), -1.0}},
                        Sense::Equal, 0.0);
    }
    for (int g = 0; g < G; ++g) {
      const Generator& gen = sys.generators[g];
      lp.add_constraint(tname("pmax", gen.name, t),
                        {{L.p(g, t), 1.0}, {L.x(g, t), -gen.p_max}},
                        Sense::LessEqual, 0.0);
      if (gen.p_min > 0.0) {
        lp.add_constraint(tname("pmin", gen.name, t),
                          {{L.p(g, t), -1.0}, {L.x(g, t), gen.p_min}},
                          Sense::LessEqual, 0.0);
      }
    }
    for (int g = 0; g < G; ++g) {
      const Generator& gen = sys.generators[g];
      // p^t - p^{t-1} <= Ru x^{t-1} + SRu (x^t - x^{t-1}) + Pmax (1 - x^t)
      std::vector<Term> up = {{L.p(g, t), 1.0},
                              {L.x(g, t), gen.p_max - gen.startup_ramp}};
      double up_rhs = gen.p_max;
      // p^{t-1} - p^t <= Rd x^t + SRd (x^{t-1} - x^t) + Pmax (1 - x^{t-1})
      std::vector<Term> dn = {{L.p(g, t), -1.0},
                              {L.x(g, t), gen.shutdown_ramp - gen.ramp_down}};
      double dn_rhs = gen.p_max;
      if (t == 0) {
        const double x_init = gen.init_up > 0 ? 1.0 : 0.0;
        up_rhs += gen.init_power +
                  (gen.ramp_up - gen.startup_ramp) * x_init;
        dn_rhs += -gen.init_power + (gen.shutdown_ramp - gen.p_max) * x_init;
      } else {
        up.push_back({L.p(g, t - 1), -1.0});
        up.push_back({L.x(g, t - 1), gen.startup_ramp - gen.ramp_up});
        dn.push_back({L.p(g, t - 1), 1.0});
        dn.push_back({L.x(g, t - 1), gen.p_max - gen.shutdown_ramp});
      }
      lp.add_constraint(tname("rampup", gen.name, t), std::move(up),
                        Sense::LessEqual, up_rhs);
      lp.add_constraint(tname("rampdn", gen.name, t), std::move(dn),
                        Sense::LessEqual, dn_rhs);
    }
  }

  L.first_cut_row = lp.num_constraints();
  int cut_no = 0;
  for (const contingency::FeasibilityCut& cut : pool.cuts()) {
    std::vector<Term> terms;
    for (int g = 0; g < G; ++g) {
      if (cut.coef_x[g] != 0.0) terms.push_back({L.x(g, cut.period), cut.coef_x[g]});
      if (cut.coef_p[g] != 0.0) terms.push_back({L.p(g, cut.period), cut.coef_p[g]});
    }
    lp.add_constraint("fcut_" + std::to_string(cut_no++), std::move(terms),
                      Sense::LessEqual, -cut.constant);
  }
  return mp;
}

namespace {

void push_violation(CommitmentReport& rep, const std::string& family, int g,
                    int i, int e, int t, double amount,
                    const std::string& detail) {
  ConstraintViolation v;
  v.family = family;
  v.generator = g;
  v.bus = i;
  v.line = e;
  v.period = t;
  v.amount = amount;
  v.detail = detail;
  rep.violations.push_back(std::move(v));
}

}  // namespace

std::string CommitmentReport::summary() const {
  if (violations.empty()) return "ok";
  std::ostringstream out;
  out << violations.size() << " violation(s):";
  for (const auto& v : violations) {
    out << "\n  [" << v.family << "]";
    if (v.generator >= 0) out << " g=" << v.generator;
    if (v.bus >= 0) out << " bus=" << v.bus;
    if (v.line >= 0) out << " line=" << v.line;
    if (v.period >= 0) out << " t=" << v.period + 1;
    out << " amount=" << v.amount;
    if (!v.detail.empty()) out << " (" << v.detail << ")";
  }
  return out.str();
}

CommitmentReport verify_commitment_constraints(const Eigen::MatrixXi& x,
                                               const Instance& instance) {
  CommitmentReport rep;
  const PowerSystem& sys = instance.system;
  const int G = sys.num_generators();
  const int T = static_cast<int>(x.cols());
  if (x.rows() != G) {
    push_violation(rep, "shape", -1, -1, -1, -1, 0.0,
                   "commitment matrix has wrong generator dimension");
    return rep;
  }
  for (int g = 0; g < G; ++g) {
    const Generator& gen = sys.generators[g];
    const int x_init = gen.init_up > 0 ? 1 : 0;
    for (int t = 0; t < std::min(T, gen.init_up); ++t) {
      if (x(g, t) != 1) {
        push_violation(rep, "initial_online", g, -1, -1, t, 1.0,
                       gen.name + " must stay online through t=" +
                           std::to_string(gen.init_up));
      }
    }
    for (int t = 0; t < std::min(T, gen.init_down); ++t) {
      if (x(g, t) != 0) {
        push_violation(rep, "initial_offline", g, -1, -1, t, 1.0,
                       gen.name + " must stay offline through t=" +
                           std::to_string(gen.init_down));
      }
    }
    const int Tu = std::max(1, gen.min_up);
    const int Td = std::max(1, gen.min_down);
    for (int t = gen.init_up; t < T; ++t) {
      int prev = t == 0 ? x_init : x(g, t - 1);
      if (x(g, t) == 1 && prev == 0) {  // startup at t
        int window = std::min(T, t + Tu);
        for (int tp = t; tp < window; ++tp) {
          if (x(g, tp) != 1) {
            push_violation(rep, "min_up", g, -1, -1, tp,
                           static_cast<double>(Tu),
                           gen.name + " started at t=" + std::to_string(t + 1) +
                               " but went down before " + std::to_string(Tu) +
                               " periods");
          }
        }
      }
    }
    for (int t = gen.init_down; t < T; ++t) {
      int prev = t == 0 ? x_init : x(g, t - 1);
      if (x(g, t) == 0 && prev == 1) {  // shutdown at t
        int window = std::min(T, t + Td);
        for (int tp = t; tp < window; ++tp) {
          if (x(g, tp) != 0) {
            push_violation(rep, "min_down", g, -1, -1, tp,
                           static_cast<double>(Td),
                           gen.name + " stopped at t=" + std::to_string(t + 1) +
                               " but restarted before " + std::to_string(Td) +
                               " periods");
          }
        }
      }
    }
  }
  return rep;
}

CommitmentReport verify_solution(const CommitmentSolution& sol,
                                 const Instance& instance,
                                 const milp::SolverOptions& options) {
  CommitmentReport rep = verify_commitment_constraints(sol.x, instance);
  const PowerSystem& sys = instance.system;
  const int G = sys.num_generators();
  const int E = sys.num_lines();
  const int I = sys.num_buses();
  const int T = sol.periods();

  double scale = 1.0;
  for (const Generator& g : sys.generators) scale = std::max(scale, g.p_max);
  for (int t = 0; t < T; ++t) scale = std::max(scale, instance.demand.total(t));
  const double tol =
      std::max(options.feasibility_tol, options.integrality_tol * scale);

  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < I; ++i) {
      double net = 0.0;
      for (int g : sys.gens_at_bus[i]) net += sol.dispatch(g, t);
      for (int e : sys.lines_in[i]) net += sol.flows(e, t);
      for (int e : sys.lines_out[i]) net -= sol.flows(e, t);
      double resid = net - instance.demand.at(i, t);
      if (std::abs(resid) > tol) {
        push_violation(rep, "bus_balance", -1, i, -1, t, resid,
                       "no-contingency balance must hold exactly");
      }
    }
    for (int e = 0; e < E; ++e) {
      const TransmissionLine& ln = sys.lines[e];
      double resid = ln.susceptance *
                         (sol.angles(ln.from_bus, t) - sol.angles(ln.to_bus, t)) -
                     sol.flows(e, t);
      if (std::abs(resid) > tol) {
        push_violation(rep, "flow_definition", -1, -1, e, t, resid, "");
      }
      if (std::abs(sol.flows(e, t)) > ln.flow_limit + tol) {
        push_violation(rep, "flow_limit", -1, -1, e, t, sol.flows(e, t), "");
      }
    }
    if (std::abs(sol.angles(sys.reference_bus, t)) > tol) {
      push_violation(rep, "reference_angle", -1, sys.reference_bus, -1, t,
                     sol.angles(sys.reference_bus, t), "");
    }
    for (int g = 0; g < G; ++g) {
      const Generator& gen = sys.generators[g];
      double p = sol.dispatch(g, t);
      double lo = gen.p_min * sol.x(g, t);
      double hi = gen.p_max * sol.x(g, t);
      if (p < lo - tol || p > hi + tol) {
        push_violation(rep, "output_window", g, -1, -1, t, p,
                       "p must lie in [Pmin x, Pmax x]");
      }
      double p_prev = t == 0 ? gen.init_power : sol.dispatch(g, t - 1);
      int x_prev = t == 0 ? (gen.init_up > 0 ? 1 : 0) : sol.x(g, t - 1);
      double up_cap = gen.ramp_up * x_prev +
                      gen.startup_ramp * (sol.x(g, t) - x_prev) +
                      gen.p_max * (1 - sol.x(g, t));
      if (sol.dispatch(g, t) - p_prev > up_cap + tol) {
        push_violation(rep, "ramp_up", g, -1, -1, t,
                       sol.dispatch(g, t) - p_prev, "");
      }
      double dn_cap = gen.ramp_down * sol.x(g, t) +
                      gen.shutdown_ramp * (x_prev - sol.x(g, t)) +
                      gen.p_max * (1 - x_prev);
      if (p_prev - sol.dispatch(g, t) > dn_cap + tol) {
        push_violation(rep, "ramp_down", g, -1, -1, t,
                       p_prev - sol.dispatch(g, t), "");
      }
      double cu_needed =
          std::max(0.0, gen.cost_startup * (sol.x(g, t) - x_prev));
      if (sol.startup_cost(g, t) < cu_needed - tol) {
        push_violation(rep, "startup_cost", g, -1, -1, t,
                       sol.startup_cost(g, t), "");
      }
      double cd_needed =
          std::max(0.0, gen.cost_shutdown * (x_prev - sol.x(g, t)));
      if (sol.shutdown_cost(g, t) < cd_needed - tol) {
        push_violation(rep, "shutdown_cost", g, -1, -1, t,
                       sol.shutdown_cost(g, t), "");
      }
    }
  }

  double cost = sol.startup_total() + sol.shutdown_total() +
                sol.energy_cost(instance);
  if (std::abs(cost - sol.objective) >
      1e-6 * (1.0 + std::abs(sol.objective)) + tol) {
    push_violation(rep, "objective", -1, -1, -1, -1, cost - sol.objective,
                   "stored objective does not match its decomposition");
  }
  return rep;
}

CommitmentSolution extract_solution(const milp::SolveResult& result,
                                    const Instance& instance,
                                    const MasterLayout& L,
                                    const milp::SolverOptions& options) {
  if (!result.has_incumbent()) {
    throw std::invalid_argument(
        "extract_solution: result carries no incumbent");
  }
  CommitmentSolution sol;
  sol.x.setZero(L.G, L.T);
  sol.startup_cost.setZero(L.G, L.T);
  sol.shutdown_cost.setZero(L.G, L.T);
  sol.dispatch.setZero(L.G, L.T);
  sol.flows.setZero(L.E, L.T);
  sol.angles.setZero(L.I, L.T);
  const Eigen::VectorXd& v = result.primal;
  for (int g = 0; g < L.G; ++g) {
    for (int t = 0; t < L.T; ++t) {
      double xv = v[L.x(g, t)];
      if (std::abs(xv - std::round(xv)) > options.integrality_tol) {
        throw InternalConsistencyError(
            "incumbent commitment is not integral within tolerance");
      }
      sol.x(g, t) = static_cast<int>(std::round(xv));
      sol.startup_cost(g, t) = v[L.cu(g, t)];
      sol.shutdown_cost(g, t) = v[L.cd(g, t)];
      sol.dispatch(g, t) = v[L.p(g, t)];
    }
  }
  for (int e = 0; e < L.E; ++e) {
    for (int t = 0; t < L.T; ++t) sol.flows(e, t) = v[L.f(e, t)];
  }
  for (int i = 0; i < L.I; ++i) {
    for (int t = 0; t < L.T; ++t) sol.angles(i, t) = v[L.theta(i, t)];
  }
  sol.objective = result.objective;

  CommitmentReport rep = verify_solution(sol, instance, options);
  if (!rep.ok()) {
    throw InternalConsistencyError(
        "incumbent failed independent re-verification: " + rep.summary());
  }
  return sol;
}

std::string solution_to_json(const CommitmentSolution& sol,
                             const Instance& instance) {
  nlohmann::json j;
  j["objective"] = sol.objective;
  j["objective_breakdown"] = {{"startup", sol.startup_total()},
                              {"shutdown", sol.shutdown_total()},
                              {"energy", sol.energy_cost(instance)}};
  j["periods"] = sol.periods();
  auto matrix = [](const Eigen::MatrixXd& m) {
    std::vector<std::vector<double>> rows;
    for (int r = 0; r < m.rows(); ++r) {
      rows.emplace_back(m.row(r).begin(), m.row(r).end());
    }
    return rows;
  };
  std::vector<std::vector<int>> xr;
  for (int g = 0; g < sol.x.rows(); ++g) {
    xr.emplace_back(sol.x.row(g).begin(), sol.x.row(g).end());
  }
  j["commitment"] = xr;
  j["dispatch"] = matrix(sol.dispatch);
  j["flows"] = matrix(sol.flows);
  j["angles"] = matrix(sol.angles);
  j["startup_cost"] = matrix(sol.startup_cost);
  j["shutdown_cost"] = matrix(sol.shutdown_cost);
  j["generators"] = nlohmann::json::array();
  for (const Generator& g : instance.system.generators) {
    j["generators"].push_back(g.name);
  }
  return j.dump(2) + "\n";
}

CommitmentSolution solution_from_json(const std::string& text,
                                      const Instance& instance) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("solution JSON: ") + e.what());
  }
  try {
    CommitmentSolution sol;
    const int G = instance.system.num_generators();
    const int E = instance.system.num_lines();
    const int I = instance.system.num_buses();
    const int T = j.at("periods").get<int>();
    auto read = [&](const char* key, int rows, Eigen::MatrixXd& out) {
      out.setZero(rows, T);
      if (!j.contains(key)) return;
      auto m = j.at(key).get<std::vector<std::vector<double>>>();
      if (static_cast<int>(m.size()) != rows) {
        throw ParseError(std::string("solution JSON: ") + key +
                         " has wrong row count");
      }
      for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(m[r].size()) != T) {
          throw ParseError(std::string("solution JSON: ") + key +
                           " has wrong period count");
        }
        for (int t = 0; t < T; ++t) out(r, t) = m[r][t];
      }
    };
    auto xm = j.at("commitment").get<std::vector<std::vector<int>>>();
    if (static_cast<int>(xm.size()) != G) {
      throw ParseError("solution JSON: commitment has wrong row count");
    }
    sol.x.setZero(G, T);
    for (int g = 0; g < G; ++g) {
      for (int t = 0; t < T; ++t) sol.x(g, t) = xm[g][t];
    }
    read("dispatch", G, sol.dispatch);
    read("flows", E, sol.flows);
    read("angles", I, sol.angles);
    read("startup_cost", G, sol.startup_cost);
    read("shutdown_cost", G, sol.shutdown_cost);
    sol.objective = j.value("objective", 0.0);
    return sol;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("solution JSON: ") + e.what());
  }
}

}  // namespace ccuc::buc
