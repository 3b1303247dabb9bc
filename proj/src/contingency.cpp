#include "ccuc/contingency.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ccuc/backend.hpp"
#include "ccuc/parallel.hpp"
#include "ccuc/simplex.hpp"

namespace ccuc::contingency {

bool Contingency::involves_gen(int g) const {
  return std::binary_search(failed_gens.begin(), failed_gens.end(), g);
}

bool Contingency::involves_line(int e) const {
  return std::binary_search(failed_lines.begin(), failed_lines.end(), e);
}

std::vector<int> Contingency::key(int num_generators) const {
  std::vector<int> k = failed_gens;
  for (int e : failed_lines) k.push_back(num_generators + e);
  return k;
}

std::string Contingency::describe(const Instance& instance) const {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (int g : failed_gens) {
    out << (first ? "" : ", ") << instance.system.generators[g].name;
    first = false;
  }
  for (int e : failed_lines) {
    out << (first ? "" : ", ") << instance.system.lines[e].name;
    first = false;
  }
  out << '}';
  return out.str();
}

bool operator==(const Contingency& a, const Contingency& b) {
  return a.failed_gens == b.failed_gens && a.failed_lines == b.failed_lines;
}

long long count_exact_size(int g_eff, int e_eff, int j) {
  if (g_eff < 0 || e_eff < 0 || j < 0) {
    throw std::invalid_argument("count_exact_size: negative argument");
  }
  long long n = g_eff + e_eff;
  if (j > n) return 0;
  unsigned __int128 c = 1;
  for (int i = 0; i < j; ++i) {
    c = c * static_cast<unsigned __int128>(n - i);
    c /= static_cast<unsigned __int128>(i + 1);
    if (c > (static_cast<unsigned __int128>(1) << 62)) {
      throw std::overflow_error("contingency count exceeds 2^62");
    }
  }
  return static_cast<long long>(c);
}

long long count_contingencies(int g_eff, int e_eff, int k) {
  long long total = 0;
  for (int j = 1; j <= k; ++j) {
    total += count_exact_size(g_eff, e_eff, j);
    if (total < 0) throw std::overflow_error("contingency count overflow");
  }
  // Remark-6 bound (G+E+1)^k - 1, checked when it is computable.
  long double bound = std::pow(static_cast<long double>(g_eff + e_eff + 1),
                               static_cast<long double>(k)) -
                      1.0L;
  if (bound < static_cast<long double>(1ULL << 62) &&
      static_cast<long double>(total) > bound + 0.5L) {
    throw std::logic_error("count_contingencies exceeded its upper bound");
  }
  return total;
}

ContingencyEnumerator::ContingencyEnumerator(const Instance& instance, int j)
    : num_generators_(instance.system.num_generators()), j_(j) {
  if (j < 1) {
    throw std::invalid_argument("contingency size j must be >= 1");
  }
  for (const Generator& g : instance.system.generators) {
    if (!g.fail_immune) elements_.push_back(g.id);
  }
  for (const TransmissionLine& e : instance.system.lines) {
    if (!e.fail_immune) elements_.push_back(num_generators_ + e.id);
  }
  int n = static_cast<int>(elements_.size());
  if (j > n) {
    done_ = true;
    total_ = 0;
    return;
  }
  total_ = count_exact_size(n, 0, j);
  odometer_.resize(j);
  for (int i = 0; i < j; ++i) odometer_[i] = i;
}

std::optional<Contingency> ContingencyEnumerator::next() {
  if (done_) return std::nullopt;
  Contingency c;
  for (int idx : odometer_) {
    int el = elements_[idx];
    if (el < num_generators_) {
      c.failed_gens.push_back(el);
    } else {
      c.failed_lines.push_back(el - num_generators_);
    }
  }
  // advance the combination odometer
  int n = static_cast<int>(elements_.size());
  int i = j_ - 1;
  while (i >= 0 && odometer_[i] == n - j_ + i) --i;
  if (i < 0) {
    done_ = true;
  } else {
    ++odometer_[i];
    for (int l = i + 1; l < j_; ++l) odometer_[l] = odometer_[l - 1] + 1;
  }
  return c;
}

std::vector<Contingency> enumerate_contingencies(const Instance& instance,
                                                 int j) {
  ContingencyEnumerator en(instance, j);
  std::vector<Contingency> out;
  out.reserve(static_cast<size_t>(std::min<long long>(en.total(), 1 << 20)));
  while (auto c = en.next()) out.push_back(std::move(*c));
  return out;
}

bool DynamicContingencyList::add(const Contingency& c, int num_generators) {
  auto key = c.key(num_generators);
  if (!keys_.insert(key).second) return false;
  items_.push_back(c);
  return true;
}

bool DynamicContingencyList::contains(const Contingency& c,
                                      int num_generators) const {
  return keys_.count(c.key(num_generators)) > 0;
}

RelaxedCf build_relaxed_cf(const Instance& instance,
                           const Eigen::VectorXi& x_t,
                           const Eigen::VectorXd& p_t, const Contingency& c,
                           int t) {
  const PowerSystem& sys = instance.system;
  const int I = sys.num_buses();
  const int G = sys.num_generators();
  const int E = sys.num_lines();
  if (x_t.size() != G || p_t.size() != G) {
    throw std::invalid_argument("build_relaxed_cf: dimension mismatch");
  }
  const int size = c.size();
  const double eps = instance.reliability.eps(size);
  const double total_demand = instance.demand.total(t);

  RelaxedCf cf;
  milp::LinearProgram& lp = cf.lp;
  auto label = [&](const char* base, const std::string& suffix) {
    return std::string(base) + "_" + suffix;
  };

  cf.p0 = lp.num_variables();
  for (int g = 0; g < G; ++g) {
    lp.add_variable(label("p", sys.generators[g].name), 0.0, milp::kInf);
  }
  cf.f0 = lp.num_variables();
  for (int e = 0; e < E; ++e) {
    lp.add_variable(label("f", sys.lines[e].name), -milp::kInf, milp::kInf);
  }
  cf.theta0 = lp.num_variables();
  for (int i = 0; i < I; ++i) {
    lp.add_variable(label("th", sys.buses[i].name), -milp::kInf, milp::kInf);
  }
  cf.q0 = lp.num_variables();
  for (int i = 0; i < I; ++i) {
    lp.add_variable(label("q", sys.buses[i].name), 0.0, milp::kInf);
    lp.set_start_hint_upper(cf.q0 + i);
  }
  cf.r0 = lp.num_variables();
  for (int g = 0; g < G; ++g) {
    lp.add_variable(label("r", sys.generators[g].name), 0.0, milp::kInf);
    lp.add_objective(cf.r0 + g, 1.0);
  }
  cf.s0 = lp.add_variable("s", 0.0, milp::kInf);
  lp.add_objective(cf.s0, 1.0);

  cf.row_balance = lp.num_constraints();
  for (int i = 0; i < I; ++i) {
    std::vector<milp::Term> terms;
    for (int g : sys.gens_at_bus[i]) {
      terms.push_back({cf.p0 + g, 1.0});
      terms.push_back({cf.r0 + g, -1.0});
    }
    for (int e : sys.lines_in[i]) terms.push_back({cf.f0 + e, 1.0});
    for (int e : sys.lines_out[i]) terms.push_back({cf.f0 + e, -1.0});
    terms.push_back({cf.q0 + i, 1.0});
    lp.add_constraint(label("bal", sys.buses[i].name), std::move(terms),
                      milp::Sense::Equal, instance.demand.at(i, t));
  }
  cf.row_flow = lp.num_constraints();
  for (int e = 0; e < E; ++e) {
    const TransmissionLine& ln = sys.lines[e];
    double live = c.involves_line(e) ? 0.0 : 1.0;
    lp.add_constraint(label("flow", ln.name),
                      {{cf.theta0 + ln.from_bus, ln.susceptance * live},
                       {cf.theta0 + ln.to_bus, -ln.susceptance * live},
                       {cf.f0 + e, -1.0}},
                      milp::Sense::Equal, 0.0);
  }
  cf.row_f_ub = lp.num_constraints();
  for (int e = 0; e < E; ++e) {
    const TransmissionLine& ln = sys.lines[e];
    double live = c.involves_line(e) ? 0.0 : 1.0;
    double cap = ln.flow_limit * instance.reliability.line_delta(e, size) * live;
    lp.add_constraint(label("fub", ln.name), {{cf.f0 + e, 1.0}},
                      milp::Sense::LessEqual, cap);
  }
  cf.row_f_lb = lp.num_constraints();
  for (int e = 0; e < E; ++e) {
    const TransmissionLine& ln = sys.lines[e];
    double live = c.involves_line(e) ? 0.0 : 1.0;
    double cap = ln.flow_limit * instance.reliability.line_delta(e, size) * live;
    lp.add_constraint(label("flb", ln.name), {{cf.f0 + e, -1.0}},
                      milp::Sense::LessEqual, cap);
  }
  cf.row_p_ub = lp.num_constraints();
  for (int g = 0; g < G; ++g) {
    const Generator& gen = sys.generators[g];
    double live = c.involves_gen(g) ? 0.0 : 1.0;
    lp.add_constraint(label("cap", gen.name), {{cf.p0 + g, 1.0}},
                      milp::Sense::LessEqual,
                      gen.p_max * static_cast<double>(x_t[g]) * live);
  }
  cf.row_ramp_up = lp.num_constraints();
  for (int g = 0; g < G; ++g) {
    const Generator& gen = sys.generators[g];
    double delta = instance.reliability.gen_delta(g, size);
    lp.add_constraint(label("rup", gen.name), {{cf.p0 + g, 1.0}},
                      milp::Sense::LessEqual,
                      gen.ramp_up * delta + p_t[g]);
  }
  cf.row_ramp_down = lp.num_constraints();
  for (int g = 0; g < G; ++g) {
    const Generator& gen = sys.generators[g];
    double live = c.involves_gen(g) ? 0.0 : 1.0;
    double delta = instance.reliability.gen_delta(g, size);
    lp.add_constraint(label("rdn", gen.name), {{cf.p0 + g, -1.0}},
                      milp::Sense::LessEqual,
                      (gen.ramp_down * delta - p_t[g]) * live);
  }
  cf.row_q_ub = lp.num_constraints();
  for (int i = 0; i < I; ++i) {
    lp.add_constraint(label("shed", sys.buses[i].name), {{cf.q0 + i, 1.0}},
                      milp::Sense::LessEqual, instance.demand.at(i, t));
  }
  cf.row_r_le_p = lp.num_constraints();
  for (int g = 0; g < G; ++g) {
    lp.add_constraint(label("rle", sys.generators[g].name),
                      {{cf.r0 + g, 1.0}, {cf.p0 + g, -1.0}},
                      milp::Sense::LessEqual, 0.0);
  }
  {
    std::vector<milp::Term> terms;
    for (int i = 0; i < I; ++i) terms.push_back({cf.q0 + i, 1.0});
    terms.push_back({cf.s0, -1.0});
    cf.row_aggregate = lp.add_constraint("agg_shed", std::move(terms),
                                         milp::Sense::LessEqual,
                                         eps * total_demand);
  }
  return cf;
}

CfCheck check_feasibility(const Instance& instance, const Eigen::VectorXi& x_t,
                          const Eigen::VectorXd& p_t, const Contingency& c,
                          int t, const milp::SolverOptions& options,
                          const milp::SolverBackend* backend) {
  RelaxedCf cf = build_relaxed_cf(instance, x_t, p_t, c, t);
  milp::SolveResult res = backend ? backend->solve_lp(cf.lp, options)
                                  : milp::solve_lp(cf.lp, options);
  if (res.status != milp::SolveStatus::Optimal) {
    throw milp::SolveError(
        "relaxed contingency feasibility LP did not solve to optimal "
        "(status " +
        milp::to_string(res.status) + ")");
  }
  const PowerSystem& sys = instance.system;
  const int I = sys.num_buses();
  const int G = sys.num_generators();
  const int E = sys.num_lines();

  CfCheck out;
  out.violation = res.objective;
  out.feasible = res.objective <= options.feasibility_tol;
  CfDuals& d = out.duals;
  d.alpha = res.duals.segment(cf.row_balance, I);
  d.beta = res.duals.segment(cf.row_flow, E);
  d.delta_hat = res.duals.segment(cf.row_f_ub, E);
  d.delta_check = res.duals.segment(cf.row_f_lb, E);
  d.gamma = res.duals.segment(cf.row_p_ub, G);
  d.lambda_hat = res.duals.segment(cf.row_ramp_up, G);
  d.lambda_check = res.duals.segment(cf.row_ramp_down, G);
  d.zeta = res.duals.segment(cf.row_q_ub, I);
  d.eta = res.duals.segment(cf.row_r_le_p, G);
  d.pi = res.duals[cf.row_aggregate];
  return out;
}

double FeasibilityCut::evaluate(const Eigen::VectorXi& x_t,
                                const Eigen::VectorXd& p_t) const {
  return evaluate(x_t.cast<double>().eval(), p_t);
}

double FeasibilityCut::evaluate(const Eigen::VectorXd& x_t,
                                const Eigen::VectorXd& p_t) const {
  return constant + coef_x.dot(x_t) + coef_p.dot(p_t);
}

FeasibilityCut make_cut(const CfCheck& check, const Instance& instance,
                        const Contingency& c, int t) {
  if (check.feasible) {
    throw std::invalid_argument(
        "make_cut: check was feasible, no cut to generate");
  }
  const CfDuals& d = check.duals;
  const double sign_tol = 1e-7;
  auto require_nonpositive = [&](const Eigen::VectorXd& v, const char* name) {
    if (v.size() > 0 && v.maxCoeff() > sign_tol) {
      throw milp::SolveError(std::string("make_cut: dual ") + name +
                             " violates its sign condition");
    }
  };
  require_nonpositive(d.delta_hat, "delta_hat");
  require_nonpositive(d.delta_check, "delta_check");
  require_nonpositive(d.gamma, "gamma");
  require_nonpositive(d.lambda_hat, "lambda_hat");
  require_nonpositive(d.lambda_check, "lambda_check");
  require_nonpositive(d.zeta, "zeta");
  if (d.pi > sign_tol) {
    throw milp::SolveError("make_cut: dual pi violates its sign condition");
  }

  const PowerSystem& sys = instance.system;
  const int G = sys.num_generators();
  const int size = c.size();

  FeasibilityCut cut;
  cut.contingency = c;
  cut.period = t;
  cut.duals = d;
  cut.violation_at_creation = check.violation;
  cut.coef_x.setZero(G);
  cut.coef_p.setZero(G);

  double constant = 0.0;
  for (int i = 0; i < sys.num_buses(); ++i) {
    constant += instance.demand.at(i, t) * (d.alpha[i] + d.zeta[i]);
  }
  for (int e = 0; e < sys.num_lines(); ++e) {
    if (c.involves_line(e)) continue;
    double cap =
        sys.lines[e].flow_limit * instance.reliability.line_delta(e, size);
    constant += cap * (d.delta_hat[e] + d.delta_check[e]);
  }
  for (int g = 0; g < G; ++g) {
    const Generator& gen = sys.generators[g];
    double live = c.involves_gen(g) ? 0.0 : 1.0;
    double delta = instance.reliability.gen_delta(g, size);
    constant += gen.ramp_up * delta * d.lambda_hat[g];
    constant += gen.ramp_down * delta * live * d.lambda_check[g];
    cut.coef_x[g] = gen.p_max * live * d.gamma[g];
    cut.coef_p[g] = d.lambda_hat[g] - live * d.lambda_check[g];
  }
  constant +=
      instance.reliability.eps(size) * instance.demand.total(t) * d.pi;
  cut.constant = constant;
  return cut;
}

std::vector<ScreenViolation> screen_list(
    const Instance& instance, const Eigen::MatrixXi& x,
    const Eigen::MatrixXd& p, const DynamicContingencyList& list,
    const milp::SolverOptions& options, int workers,
    const milp::SolverBackend* backend) {
  const int T = instance.periods();
  const int n = list.size() * T;
  std::vector<std::optional<ScreenViolation>> slots(n);
  parallel_for_index(n, workers, [&](int idx) {
    int ci = idx / T;
    int t = idx % T;
    const Contingency& c = list.items()[ci];
    CfCheck check = check_feasibility(instance, x.col(t), p.col(t), c, t,
                                      options, backend);
    if (!check.feasible) {
      ScreenViolation v;
      v.contingency = c;
      v.period = t;
      v.violation = check.violation;
      v.threshold = instance.reliability.eps(c.size()) *
                    instance.demand.total(t);
      v.check = std::move(check);
      slots[idx] = std::move(v);
    }
  });
  std::vector<ScreenViolation> out;
  for (auto& s : slots) {
    if (s) out.push_back(std::move(*s));
  }
  return out;
}

}  // namespace ccuc::contingency
