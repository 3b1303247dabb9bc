// ccuc: contingency-constrained unit commitment solver CLI.
//
// Subcommands: solve, verify, enumerate, psip, fixtures.
// Exit codes: 0 success / compliant, 1 verification found violations,
// 2 infeasible, 3 time limit without proven compliance, 4 enumeration cap
// exceeded (verify), 64 usage errors, 65 instance/solution file errors,
// 70 internal solver failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ccuc/backend.hpp"
#include "ccuc/engine.hpp"
#include "ccuc/model.hpp"
#include "json.hpp"

namespace {

struct CommonArgs {
  std::string instance_path;
  std::string fixture;
  int k = -1;
  std::string epsilon;
  std::string backend;
  double gap = 1e-3;
  double time_limit = 10800.0;
  int workers = 1;
  bool verbose = false;
  std::string output;
};

void add_instance_flags(CLI::App* cmd, CommonArgs& args) {
  auto* inst = cmd->add_option("--instance", args.instance_path,
                               "instance JSON file");
  auto* fix = cmd->add_option("--fixture", args.fixture,
                              "built-in fixture name");
  inst->excludes(fix);
  cmd->add_option("--k", args.k, "override the maximum contingency size");
  cmd->add_option("--epsilon", args.epsilon,
                  "override the load-shed fractions (comma list, length k)");
}

void add_solver_flags(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--gap", args.gap, "relative MILP optimality gap")
      ->default_val(1e-3);
  cmd->add_option("--time-limit", args.time_limit, "wall-clock limit, seconds")
      ->default_val(10800.0);
  cmd->add_option("--workers", args.workers, "subproblem worker threads")
      ->default_val(1);
  cmd->add_option("--backend", args.backend,
                  "solver backend (default: CCUC_BACKEND or 'reference')");
  cmd->add_flag("--verbose", args.verbose, "iteration trace on stderr");
  cmd->add_option("--output", args.output, "write the JSON report here");
}

std::string backend_or_default(const std::string& flag) {
  if (!flag.empty()) return flag;
  const char* env = std::getenv("CCUC_BACKEND");
  return env && *env ? env : "reference";
}

std::vector<double> parse_epsilon(const std::string& text) {
  std::vector<double> eps;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    eps.push_back(std::stod(item));
  }
  return eps;
}

ccuc::Instance load_target(const CommonArgs& args) {
  if (args.instance_path.empty() == args.fixture.empty()) {
    throw CLI::ValidationError(
        "exactly one of --instance or --fixture is required");
  }
  ccuc::Instance inst = args.instance_path.empty()
                            ? ccuc::builtin_fixture(args.fixture)
                            : ccuc::load_instance(args.instance_path);
  if (args.k >= 0) {
    inst.reliability.k = args.k;
    inst.reliability.epsilon.resize(args.k, 0.0);
  }
  if (!args.epsilon.empty()) {
    inst.reliability.epsilon = parse_epsilon(args.epsilon);
    if (args.k < 0) {
      inst.reliability.k =
          static_cast<int>(inst.reliability.epsilon.size());
    }
  }
  inst.validate();
  return inst;
}

void write_or_print(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ccuc::ParseError("cannot open output file: " + path);
  out << text;
}

int run_solve(const CommonArgs& args, const std::string& algorithm) {
  ccuc::Instance inst = load_target(args);
  ccuc::engine::RunConfig config;
  config.algorithm = ccuc::engine::algorithm_from_string(algorithm);
  config.solver.rel_gap = args.gap;
  config.time_limit = args.time_limit;
  config.workers = args.workers;
  config.backend = backend_or_default(args.backend);
  config.verbose = args.verbose;
  ccuc::engine::RunReport report = ccuc::engine::solve(inst, config);
  std::cout << report.table(inst);
  write_or_print(report.to_json(inst), args.output);
  switch (report.status) {
    case ccuc::engine::RunStatus::Optimal:
    case ccuc::engine::RunStatus::CompliantAtLimit: return 0;
    case ccuc::engine::RunStatus::Infeasible: return 2;
    case ccuc::engine::RunStatus::TimeLimit: return 3;
  }
  return 70;
}

ccuc::buc::CommitmentSolution load_solution(const std::string& path,
                                            const ccuc::Instance& inst) {
  std::ifstream in(path);
  if (!in) throw ccuc::ParseError("cannot open solution file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  // accept either a bare solution or a full run report
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (!j.is_discarded() && j.contains("solution")) {
    text = j.at("solution").dump();
  }
  return ccuc::buc::solution_from_json(text, inst);
}

int run_verify(const CommonArgs& args, const std::string& solution_path,
               long long cap) {
  ccuc::Instance inst = load_target(args);
  ccuc::buc::CommitmentSolution sol = load_solution(solution_path, inst);
  ccuc::milp::SolverOptions options;
  const ccuc::milp::SolverBackend& be =
      ccuc::milp::backend(backend_or_default(args.backend));
  ccuc::engine::ComplianceReport report = ccuc::engine::verify_compliance(
      inst, sol, options, cap, args.workers, &be);
  std::cout << "checked " << report.checks << " (contingency, period) pairs: "
            << (report.compliant() ? "compliant" : "NOT compliant") << "\n";
  for (const auto& v : report.violations) {
    std::cout << "violation: " << v.contingency.describe(inst) << " t="
              << v.period + 1 << " shed " << v.violation << " MW above "
              << v.threshold << " MW allowance\n";
  }
  return report.compliant() ? 0 : 1;
}

int run_enumerate(const CommonArgs& args) {
  ccuc::Instance inst = load_target(args);
  long long cumulative = 0;
  std::cout << "effective elements: " << inst.effective_generators()
            << " generators + " << inst.effective_lines() << " lines\n";
  for (int j = 1; j <= inst.reliability.k; ++j) {
    long long nj = ccuc::contingency::count_exact_size(
        inst.effective_generators(), inst.effective_lines(), j);
    cumulative += nj;
    std::cout << "size " << j << ": " << nj << " (cumulative " << cumulative
              << ")\n";
  }
  if (inst.reliability.k == 0) std::cout << "k=0: 0 contingencies\n";
  return 0;
}

int run_psip(const CommonArgs& args, const std::string& solution_path,
             int j) {
  ccuc::Instance inst = load_target(args);
  ccuc::buc::CommitmentSolution sol = load_solution(solution_path, inst);
  ccuc::milp::SolverOptions options;
  options.rel_gap = args.gap;
  ccuc::psip::BigMPolicy policy;
  const ccuc::milp::SolverBackend& be =
      ccuc::milp::backend(backend_or_default(args.backend));
  for (int t = 0; t < inst.periods(); ++t) {
    ccuc::psip::PsipQuery q;
    q.x_t = sol.x.col(t);
    q.p_t = sol.dispatch.col(t);
    q.j = j;
    q.t = t;
    ccuc::psip::PsipResult r =
        ccuc::psip::solve_psip(inst, q, policy, options, &be);
    std::cout << "j=" << j << " t=" << t + 1 << ": w*=" << r.objective
              << " MW, worst " << r.worst.describe(inst) << "\n";
    if (args.verbose) std::cerr << r.diagnostic_dump(inst);
  }
  return 0;
}

int run_fixtures(const std::string& emit, const std::string& output) {
  if (emit.empty()) {
    for (const std::string& name : ccuc::builtin_fixture_names()) {
      ccuc::Instance inst = ccuc::builtin_fixture(name);
      std::cout << name << ": " << inst.system.num_buses() << " buses, "
                << inst.system.num_generators() << " generators, "
                << inst.system.num_lines() << " lines, " << inst.periods()
                << " periods\n";
    }
    return 0;
  }
  ccuc::Instance inst = ccuc::builtin_fixture(emit);
  write_or_print(ccuc::write_instance(inst), output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contingency-constrained unit commitment solver"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string algorithm = "csa2";
  std::string solution_path;
  int psip_j = 1;
  long long verify_cap = 200000;
  std::string emit_fixture;

  CLI::App* solve = app.add_subcommand("solve", "solve an instance");
  add_instance_flags(solve, args);
  add_solver_flags(solve, args);
  solve->add_option("--algorithm", algorithm, "ef | bd | csa1 | csa2")
      ->default_val("csa2");

  CLI::App* verify =
      app.add_subcommand("verify", "exhaustively verify a solution report");
  add_instance_flags(verify, args);
  add_solver_flags(verify, args);
  verify->add_option("--solution", solution_path, "solution/report JSON file")
      ->required();
  verify->add_option("--cap", verify_cap, "enumeration cap")
      ->default_val(200000);

  CLI::App* enumerate =
      app.add_subcommand("enumerate", "count contingencies per size");
  add_instance_flags(enumerate, args);

  CLI::App* psip = app.add_subcommand(
      "psip", "worst-case contingency for a stored solution");
  add_instance_flags(psip, args);
  add_solver_flags(psip, args);
  psip->add_option("--solution", solution_path, "solution/report JSON file")
      ->required();
  psip->add_option("--j", psip_j, "exact contingency size")->required();

  CLI::App* fixtures =
      app.add_subcommand("fixtures", "list or emit built-in instances");
  fixtures->add_option("--emit", emit_fixture, "fixture name to write out");
  fixtures->add_option("--output", args.output, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 64;
  }

  try {
    if (solve->parsed()) return run_solve(args, algorithm);
    if (verify->parsed()) return run_verify(args, solution_path, verify_cap);
    if (enumerate->parsed()) return run_enumerate(args);
    if (psip->parsed()) return run_psip(args, solution_path, psip_j);
    if (fixtures->parsed()) return run_fixtures(emit_fixture, args.output);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 64;
  } catch (const ccuc::engine::CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return verify->parsed() ? 4 : 65;
  } catch (const ccuc::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 65;
  } catch (const ccuc::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 65;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 65;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 65;
  } catch (const ccuc::milp::SolveError& e) {
    std::cerr << "internal solver error: " << e.what() << "\n";
    return 70;
  }
  return 64;
}
