#include <random>

#include "ccuc/backend.hpp"
#include "ccuc/branch_bound.hpp"
#include "ccuc/milp.hpp"
#include "ccuc/simplex.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace ccuc;
using ccuc_test::milp_enumeration_oracle;
using ccuc_test::random_lp;
using ccuc_test::random_milp;

namespace {
const milp::SolverOptions kOpts;
}

TEST_CASE("lp: binding >= constraint has unit dual") {
  milp::LinearProgram lp;
  int x = lp.add_variable("x", 0.0, milp::kInf);
  lp.add_objective(x, 1.0);
  lp.add_constraint("floor", {{x, 1.0}}, milp::Sense::GreaterEqual, 3.0);
  milp::SolveResult r = milp::solve_lp(lp, kOpts);
  REQUIRE(r.status == milp::SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(3.0));
  CHECK(r.primal[x] == doctest::Approx(3.0));
  CHECK(r.duals[0] == doctest::Approx(1.0));
}

TEST_CASE("lp: maximization without an upper bound is unbounded") {
  milp::LinearProgram lp;
  int x = lp.add_variable("x", 0.0, milp::kInf);
  lp.add_objective(x, 1.0);
  lp.set_maximize(true);
  milp::SolveResult r = milp::solve_lp(lp, kOpts);
  CHECK(r.status == milp::SolveStatus::Unbounded);
}

TEST_CASE("lp: contradictory rows are infeasible") {
  milp::LinearProgram lp;
  int x = lp.add_variable("x", 0.0, milp::kInf);
  lp.add_constraint("hi", {{x, 1.0}}, milp::Sense::LessEqual, 1.0);
  lp.add_constraint("lo", {{x, 1.0}}, milp::Sense::GreaterEqual, 2.0);
  milp::SolveResult r = milp::solve_lp(lp, kOpts);
  CHECK(r.status == milp::SolveStatus::Infeasible);
}

TEST_CASE("lp: free variables and equality rows") {
  milp::LinearProgram lp;
  int x = lp.add_variable("x", -milp::kInf, milp::kInf);
  int y = lp.add_variable("y", -milp::kInf, milp::kInf);
  lp.add_objective(x, 1.0);
  lp.add_objective(y, 2.0);
  lp.add_constraint("sum", {{x, 1.0}, {y, 1.0}}, milp::Sense::Equal, 4.0);
  lp.add_constraint("gap", {{x, 1.0}, {y, -1.0}}, milp::Sense::Equal, -2.0);
  milp::SolveResult r = milp::solve_lp(lp, kOpts);
  REQUIRE(r.status == milp::SolveStatus::Optimal);
  CHECK(r.primal[x] == doctest::Approx(1.0));
  CHECK(r.primal[y] == doctest::Approx(3.0));
}

TEST_CASE("lp: rejects binary variables") {
  milp::MilpProgram lp;
  lp.add_variable("b", 0.0, 1.0, milp::VarKind::Binary);
  CHECK_THROWS_AS(milp::solve_lp(lp, kOpts), std::invalid_argument);
}

TEST_CASE("lp: duplicate variable in a constraint is rejected") {
  milp::LinearProgram lp;
  int x = lp.add_variable("x", 0.0, 1.0);
  CHECK_THROWS_AS(
      lp.add_constraint("dup", {{x, 1.0}, {x, 2.0}}, milp::Sense::Equal, 1.0),
      std::invalid_argument);
}

TEST_CASE("lp: strong duality and complementary slackness on random LPs") {
  std::mt19937 rng(1234);
  int solved = 0;
  for (int trial = 0; trial < 150; ++trial) {
    milp::LinearProgram lp = random_lp(rng);
    milp::SolveResult r = milp::solve_lp(lp, kOpts);
    REQUIRE(r.status == milp::SolveStatus::Optimal);  // feasible + boxed
    ++solved;
    double primal_obj = r.objective;
    double dual_obj = 0.0;
    for (int i = 0; i < lp.num_constraints(); ++i) {
      dual_obj += r.duals[i] * lp.constraint(i).rhs;
    }
    CHECK(std::abs(primal_obj - dual_obj) <=
          1e-8 * (1.0 + std::abs(primal_obj)));

    // complementary slackness and dual feasibility
    std::vector<double> reduced(lp.num_variables());
    for (int j = 0; j < lp.num_variables(); ++j) {
      reduced[j] = lp.objective()[j];
    }
    for (int i = 0; i < lp.num_constraints(); ++i) {
      const auto& c = lp.constraint(i);
      double lhs = 0.0;
      for (const auto& t : c.terms) {
        lhs += t.coeff * r.primal[t.var];
        reduced[t.var] -= r.duals[i] * t.coeff;
      }
      double slack = c.rhs - lhs;
      CHECK(std::abs(r.duals[i] * slack) <= 1e-6);
      if (c.sense == milp::Sense::LessEqual) CHECK(r.duals[i] <= 1e-9);
      if (c.sense == milp::Sense::GreaterEqual) CHECK(r.duals[i] >= -1e-9);
    }
    for (int j = 0; j < lp.num_variables(); ++j) {
      CHECK(reduced[j] >= -1e-7);                        // dual feasibility
      CHECK(std::abs(reduced[j] * r.primal[j]) <= 1e-6);  // slackness
    }
  }
  CHECK(solved == 150);
}

TEST_CASE("milp: two-variable packing") {
  milp::MilpProgram lp;
  int a = lp.add_variable("a", 0.0, 1.0, milp::VarKind::Binary);
  int b = lp.add_variable("b", 0.0, 1.0, milp::VarKind::Binary);
  lp.add_objective(a, -1.0);
  lp.add_objective(b, -1.0);
  lp.add_constraint("cap", {{a, 1.0}, {b, 1.0}}, milp::Sense::LessEqual, 1.0);
  milp::SolveResult r = milp::solve_milp(lp, kOpts);
  REQUIRE(r.status == milp::SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-1.0));
}

TEST_CASE("milp: knapsack maximization") {
  milp::MilpProgram lp;
  int a = lp.add_variable("a", 0.0, 1.0, milp::VarKind::Binary);
  int b = lp.add_variable("b", 0.0, 1.0, milp::VarKind::Binary);
  lp.set_maximize(true);
  lp.add_objective(a, 3.0);
  lp.add_objective(b, 2.0);
  lp.add_constraint("w", {{a, 2.0}, {b, 2.0}}, milp::Sense::LessEqual, 2.0);
  milp::SolveResult r = milp::solve_milp(lp, kOpts);
  REQUIRE(r.status == milp::SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(3.0));
  CHECK(r.primal[a] == doctest::Approx(1.0));
  CHECK(r.primal[b] == doctest::Approx(0.0));
}

TEST_CASE("milp: infeasible binaries") {
  milp::MilpProgram lp;
  int a = lp.add_variable("a", 0.0, 1.0, milp::VarKind::Binary);
  lp.add_constraint("need2", {{a, 1.0}}, milp::Sense::GreaterEqual, 2.0);
  milp::SolveResult r = milp::solve_milp(lp, kOpts);
  CHECK(r.status == milp::SolveStatus::Infeasible);
}

TEST_CASE("milp: random programs match the enumeration oracle") {
  std::mt19937 rng(99);
  milp::SolverOptions tight = kOpts;
  tight.rel_gap = 1e-9;
  for (int trial = 0; trial < 40; ++trial) {
    milp::MilpProgram p = random_milp(rng, 7);
    auto oracle = milp_enumeration_oracle(p, kOpts);
    milp::SolveResult r = milp::solve_milp(p, tight);
    if (!oracle.has_value()) {
      CHECK(r.status == milp::SolveStatus::Infeasible);
      continue;
    }
    REQUIRE(r.has_incumbent());
    CHECK(r.objective ==
          doctest::Approx(*oracle).epsilon(1e-6).scale(1.0 + std::abs(*oracle)));
    // bound contract: incumbent >= reported bound for minimization
    CHECK(r.objective >= r.bound - 1e-6 * (1.0 + std::abs(r.objective)));
    CHECK(r.gap <= tight.rel_gap + 1e-12);
  }
}

TEST_CASE("milp: deterministic across repeated solves") {
  std::mt19937 rng(7);
  milp::MilpProgram p = random_milp(rng, 6);
  milp::SolveResult a = milp::solve_milp(p, kOpts);
  milp::SolveResult b = milp::solve_milp(p, kOpts);
  REQUIRE(a.status == b.status);
  CHECK(a.objective == b.objective);
  CHECK((a.primal - b.primal).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("backend: registry provides reference and bland") {
  const milp::SolverBackend& ref = milp::backend("reference");
  const milp::SolverBackend& bland = milp::backend("bland");
  CHECK(ref.name() == "reference");
  CHECK(bland.name() == "bland");
  CHECK_THROWS_AS(milp::backend("nope"), std::out_of_range);

  std::mt19937 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    milp::LinearProgram lp = random_lp(rng);
    milp::SolveResult a = ref.solve_lp(lp, kOpts);
    milp::SolveResult b = bland.solve_lp(lp, kOpts);
    REQUIRE(a.status == milp::SolveStatus::Optimal);
    REQUIRE(b.status == milp::SolveStatus::Optimal);
    CHECK(a.objective ==
          doctest::Approx(b.objective).epsilon(1e-8).scale(1.0 + std::abs(a.objective)));
  }
}

TEST_CASE("backend: duplicate registration is rejected") {
  struct Dummy : milp::SolverBackend {
    std::string name() const override { return "reference"; }
    milp::SolveResult solve_lp(const milp::LinearProgram&,
                               const milp::SolverOptions&) const override {
      return {};
    }
    milp::SolveResult solve_milp(const milp::MilpProgram&,
                                 const milp::SolverOptions&) const override {
      return {};
    }
  };
  CHECK_THROWS_AS(milp::register_backend(std::make_shared<Dummy>()),
                  std::invalid_argument);
}

TEST_CASE("lp dump carries objective, constraints and bounds sections") {
  milp::MilpProgram lp;
  int x = lp.add_variable("x", 0.0, 2.5);
  int b = lp.add_variable("flip", 0.0, 1.0, milp::VarKind::Binary);
  lp.add_objective(x, 1.5);
  lp.add_constraint("row", {{x, 1.0}, {b, -2.0}}, milp::Sense::LessEqual, 1.0);
  std::string text = lp.dump();
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find("row:") != std::string::npos);
  CHECK(text.find("Bounds") != std::string::npos);
  CHECK(text.find("Binaries") != std::string::npos);
  CHECK(text.find("flip") != std::string::npos);
}

TEST_CASE("solver options validate tolerances") {
  milp::SolverOptions bad;
  bad.rel_gap = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
