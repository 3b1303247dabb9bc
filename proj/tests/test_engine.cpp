#include "ccuc/engine.hpp"

#include "doctest.h"
#include "json.hpp"
#include "test_support.hpp"

using namespace ccuc;
using namespace ccuc::engine;

namespace {

RunConfig fast_config(Algorithm alg) {
  RunConfig cfg;
  cfg.algorithm = alg;
  cfg.solver.rel_gap = 1e-6;
  return cfg;
}

Instance n1_instance() {
  Instance inst = builtin_fixture("six_bus_single_period");
  inst.reliability.k = 1;
  inst.reliability.epsilon = {0.0};
  return inst;
}

Instance k0_instance() {
  Instance inst = builtin_fixture("six_bus_single_period");
  inst.reliability.k = 0;
  inst.reliability.epsilon = {};
  return inst;
}

const std::set<int> kFiveUnits = {0, 2, 3, 4, 5};

}  // namespace

TEST_CASE("k=0 run is a single master solve with no cuts") {
  for (Algorithm alg :
       {Algorithm::EF, Algorithm::BD, Algorithm::CSA1, Algorithm::CSA2}) {
    CAPTURE(to_string(alg));
    RunReport rep = solve(k0_instance(), fast_config(alg));
    REQUIRE(rep.status == RunStatus::Optimal);
    CHECK(rep.iterations == 1);
    CHECK(rep.cuts_generated == 0);
    CHECK(rep.solution->committed_units(0) == std::set<int>{0});
    CHECK(rep.objective == doctest::Approx(125.0 + 13.51 * 196.4));
  }
}

TEST_CASE("BD commits five units under the N-1 criterion") {
  RunReport rep = solve_bd(n1_instance(), fast_config(Algorithm::BD));
  REQUIRE(rep.status == RunStatus::Optimal);
  CHECK(rep.solution->committed_units(0) == kFiveUnits);
  CHECK(rep.cuts_generated > 0);
  CHECK(rep.iterations >= 2);
}

TEST_CASE("CSA1 reaches the same committed set and accounts its PSIP solves") {
  Instance inst = n1_instance();
  RunReport rep = solve_csa1(inst, fast_config(Algorithm::CSA1));
  REQUIRE(rep.status == RunStatus::Optimal);
  CHECK(rep.solution->committed_units(0) == kFiveUnits);
  int total_psip = 0;
  for (const auto& r : rep.trace) total_psip += r.psip_solves;
  // one PSIP per (j, t) pair per iteration, never skipped
  CHECK(total_psip == rep.iterations * inst.reliability.k * inst.periods());
}

TEST_CASE("CSA2 keeps a short list and never mixes screen and psip phases") {
  RunReport rep = solve_csa2(n1_instance(), fast_config(Algorithm::CSA2));
  REQUIRE(rep.status == RunStatus::Optimal);
  CHECK(rep.solution->committed_units(0) == kFiveUnits);
  CHECK(rep.list_size() <= 2);  // two contingency states suffice
  for (const auto& r : rep.trace) {
    if (r.screen_cuts > 0) CHECK(r.psip_solves == 0);
  }
  // list entries are unique
  std::set<std::vector<int>> keys;
  for (const auto& c : rep.final_list) CHECK(keys.insert(c.key(6)).second);
  CHECK(rep.cuts_generated >= rep.list_size());
}

TEST_CASE("EF matches BD on the N-1 instance within twice the gap") {
  RunReport ef = solve_ef(n1_instance(), fast_config(Algorithm::EF));
  RunReport bd = solve_bd(n1_instance(), fast_config(Algorithm::BD));
  REQUIRE(ef.status == RunStatus::Optimal);
  REQUIRE(bd.status == RunStatus::Optimal);
  CHECK(std::abs(ef.objective - bd.objective) <=
        0.002 * std::max(ef.objective, bd.objective));
  CHECK(ef.solution->committed_units(0) == kFiveUnits);
}

TEST_CASE("iteration objectives never decrease (Benders monotonicity)") {
  for (Algorithm alg : {Algorithm::BD, Algorithm::CSA1, Algorithm::CSA2}) {
    CAPTURE(to_string(alg));
    RunReport rep = solve(n1_instance(), fast_config(alg));
    for (size_t i = 1; i < rep.trace.size(); ++i) {
      double prev = rep.trace[i - 1].objective;
      double slack = 1e-6 * (1.0 + std::abs(prev)) +
                     fast_config(alg).solver.rel_gap * std::abs(prev);
      CHECK(rep.trace[i].objective >= prev - slack);
    }
  }
}

TEST_CASE("verify_compliance accepts solver output and rejects the bare point") {
  Instance inst = n1_instance();
  RunReport rep = solve_csa2(inst, fast_config(Algorithm::CSA2));
  milp::SolverOptions opts;
  ComplianceReport ok = verify_compliance(inst, *rep.solution, opts);
  CHECK(ok.compliant());
  CHECK(ok.checks == 13);

  RunReport bare = solve(k0_instance(), fast_config(Algorithm::CSA2));
  ComplianceReport bad = verify_compliance(inst, *bare.solution, opts);
  CHECK_FALSE(bad.compliant());
  CHECK(bad.violations.size() >= 2);  // at least losing G1 and line L1
}

TEST_CASE("zero demand is compliant under any commitment") {
  Instance inst = n1_instance();
  for (int i = 0; i < 6; ++i) inst.demand.set(i, 0, 0.0);
  RunReport rep = solve_csa2(inst, fast_config(Algorithm::CSA2));
  REQUIRE(rep.status == RunStatus::Optimal);
  milp::SolverOptions opts;
  CHECK(verify_compliance(inst, *rep.solution, opts).compliant());
}

TEST_CASE("unservable demand reports an infeasible run") {
  Instance inst = n1_instance();
  inst.demand.set(3, 0, 5000.0);
  for (Algorithm alg : {Algorithm::BD, Algorithm::CSA1, Algorithm::CSA2}) {
    RunReport rep = solve(inst, fast_config(alg));
    CHECK(rep.status == RunStatus::Infeasible);
  }
}

TEST_CASE("a too-small time limit surfaces as time_limit status") {
  Instance inst = n1_instance();
  RunConfig cfg = fast_config(Algorithm::BD);
  cfg.time_limit = 1e-6;
  RunReport rep = solve_bd(inst, cfg);
  CHECK(rep.status == RunStatus::TimeLimit);  // first incumbent is bare BUC
}

TEST_CASE("EF build cap mirrors out-of-memory failures") {
  Instance inst = builtin_fixture("six_bus_experiment");
  inst.reliability.k = 3;
  inst.reliability.epsilon = {0.0, 0.29, 0.77};
  RunConfig cfg = fast_config(Algorithm::EF);
  CHECK_THROWS_AS(solve_ef(inst, cfg), CapExceeded);  // 696 x 24 blocks
}

TEST_CASE("parallel workers reproduce the serial objective") {
  Instance inst = n1_instance();
  RunConfig serial = fast_config(Algorithm::CSA2);
  RunConfig parallel = fast_config(Algorithm::CSA2);
  parallel.workers = 4;
  RunReport a = solve_csa2(inst, serial);
  RunReport b = solve_csa2(inst, parallel);
  REQUIRE(a.status == RunStatus::Optimal);
  REQUIRE(b.status == RunStatus::Optimal);
  CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-6));
  CHECK(a.solution->committed_units(0) == b.solution->committed_units(0));
}

TEST_CASE("bland backend reproduces the reference run") {
  Instance inst = n1_instance();
  RunConfig cfg = fast_config(Algorithm::BD);
  cfg.backend = "bland";
  RunReport rep = solve_bd(inst, cfg);
  REQUIRE(rep.status == RunStatus::Optimal);
  CHECK(rep.solution->committed_units(0) == kFiveUnits);
}

TEST_CASE("run report serializes with schema version and all sections") {
  Instance inst = n1_instance();
  RunReport rep = solve_csa2(inst, fast_config(Algorithm::CSA2));
  nlohmann::json j = nlohmann::json::parse(rep.to_json(inst));
  CHECK(j.at("report_version") == 1);
  CHECK(j.at("algorithm") == "csa2");
  CHECK(j.at("status") == "optimal");
  CHECK(j.contains("objective"));
  CHECK(j.contains("time"));
  CHECK(j.at("time").contains("rmp"));
  CHECK(j.at("time").contains("psip"));
  CHECK(j.at("time").contains("dcf"));
  CHECK(j.contains("trace"));
  CHECK(j.contains("final_list"));
  CHECK(j.contains("solution"));
  CHECK(j.at("solution").contains("commitment"));

  std::string table = rep.table(inst);
  CHECK(table.find("RMP") != std::string::npos);
  CHECK(table.find("PSIP") != std::string::npos);
  CHECK(table.find("DCF") != std::string::npos);
  CHECK(table.find("|L|") != std::string::npos);
  CHECK(table.find("cuts") != std::string::npos);
}

TEST_CASE("solver results are reproducible across identical runs") {
  Instance inst = n1_instance();
  RunReport a = solve_csa2(inst, fast_config(Algorithm::CSA2));
  RunReport b = solve_csa2(inst, fast_config(Algorithm::CSA2));
  CHECK(a.objective == b.objective);
  CHECK(a.iterations == b.iterations);
  CHECK(a.cuts_generated == b.cuts_generated);
  CHECK(a.solution->x == b.solution->x);
  CHECK((a.solution->dispatch - b.solution->dispatch).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("multi-period run honours time-coupled recourse") {
  // two periods with a load swing; the same contingency list must hold in
  // both periods
  Instance inst = builtin_fixture("six_bus_single_period");
  DemandProfile d(6, 2);
  for (int i = 0; i < 6; ++i) {
    d.set(i, 0, inst.demand.at(i, 0));
    d.set(i, 1, inst.demand.at(i, 0) * 0.8);
  }
  inst.demand = d;
  inst.reliability.k = 1;
  inst.reliability.epsilon = {0.0};
  RunReport rep = solve_csa2(inst, fast_config(Algorithm::CSA2));
  REQUIRE(rep.status == RunStatus::Optimal);
  milp::SolverOptions opts;
  CHECK(verify_compliance(inst, *rep.solution, opts).compliant());
  RunReport bd = solve_bd(inst, fast_config(Algorithm::BD));
  CHECK(rep.objective ==
        doctest::Approx(bd.objective).epsilon(2e-3).scale(bd.objective));
}
