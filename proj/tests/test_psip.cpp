#include "ccuc/psip.hpp"
#include "ccuc/simplex.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace ccuc;
using namespace ccuc::psip;
using ccuc_test::commitment_vector;

namespace {

const milp::SolverOptions kOpts;
const BigMPolicy kPolicy;

Instance fixture_with_k(int k, std::vector<double> eps) {
  Instance inst = builtin_fixture("six_bus_single_period");
  inst.reliability.k = k;
  inst.reliability.epsilon = std::move(eps);
  return inst;
}

PsipQuery bare_point_query(int j) {
  PsipQuery q;
  q.x_t = commitment_vector({0}, 6);
  q.p_t = Eigen::VectorXd::Zero(6);
  q.p_t[0] = 196.4;
  q.j = j;
  q.t = 0;
  return q;
}

PsipQuery n1_point_query(int j) {
  PsipQuery q;
  q.x_t = commitment_vector({0, 2, 3, 4, 5}, 6);
  q.p_t = Eigen::VectorXd::Zero(6);
  q.p_t[0] = 155.0;
  q.p_t[2] = 41.4;
  q.j = j;
  q.t = 0;
  return q;
}

}  // namespace

TEST_CASE("worst single failure of the bare point is losing G1") {
  Instance inst = fixture_with_k(1, {0.0});
  PsipResult r = solve_psip(inst, bare_point_query(1), kPolicy, kOpts);
  CHECK(r.objective == doctest::Approx(196.4).epsilon(1e-7));
  CHECK(r.worst.failed_gens == std::vector<int>{0});
  CHECK(r.worst.failed_lines.empty());
  CHECK(r.max_linearization_error <= 1e-6);
}

TEST_CASE("failure-selector count excludes immune elements") {
  Instance inst = fixture_with_k(1, {0.0});
  PsipProblem pp = build_psip(inst, bare_point_query(1), 1000.0);
  CHECK(pp.program.num_binaries() == 13);  // 6 generators + 7 lines

  Instance exp = builtin_fixture("six_bus_experiment");
  PsipQuery q;
  q.x_t = Eigen::VectorXi::Ones(9);
  q.p_t = Eigen::VectorXd::Zero(9);
  q.j = 1;
  q.t = 0;
  PsipProblem pp9 = build_psip(exp, q, 1000.0);
  CHECK(pp9.program.num_binaries() == 16);  // 9 generators + 7 lines

  exp.system.generators[0].fail_immune = true;
  exp.system.lines[0].fail_immune = true;
  exp.system.lines[1].fail_immune = true;
  PsipProblem ppi = build_psip(exp, q, 1000.0);
  CHECK(ppi.program.num_binaries() == 13);
}

TEST_CASE("budget beyond the non-immune element count is infeasible") {
  Instance inst = fixture_with_k(1, {0.0});
  for (auto& g : inst.system.generators) g.fail_immune = true;
  for (auto& e : inst.system.lines) e.fail_immune = true;
  inst.system.lines[0].fail_immune = false;  // one failable element
  inst.reliability.k = 2;
  inst.reliability.epsilon = {0.0, 0.0};
  PsipQuery q = bare_point_query(2);
  CHECK_THROWS_WITH_AS(solve_psip(inst, q, kPolicy, kOpts),
                       doctest::Contains("budget"), milp::SolveError);
}

TEST_CASE("query validation") {
  Instance inst = fixture_with_k(1, {0.0});
  PsipQuery q = bare_point_query(1);
  q.j = 0;
  CHECK_THROWS_AS(q.validate(inst), std::invalid_argument);
  q.j = 2;  // exceeds k = 1
  CHECK_THROWS_AS(q.validate(inst), std::invalid_argument);
  q = bare_point_query(1);
  q.x_t.resize(3);
  CHECK_THROWS_AS(q.validate(inst), std::invalid_argument);
}

TEST_CASE("psip equals enumeration on the bare point, j = 1 and 2") {
  Instance inst = fixture_with_k(2, {0.0, 0.0});
  for (int j : {1, 2}) {
    CAPTURE(j);
    PsipVerification v = verify_psip_against_enumeration(
        inst, bare_point_query(j), kPolicy, kOpts);
    CHECK(v.agrees);
    CHECK(v.psip_value ==
          doctest::Approx(v.enumerated_max).epsilon(1e-6).scale(1.0 + v.enumerated_max));
  }
}

TEST_CASE("psip equals enumeration on the all-units-on point") {
  Instance inst = fixture_with_k(2, {0.0, 0.0});
  PsipQuery q;
  q.x_t = Eigen::VectorXi::Ones(6);
  q.p_t = Eigen::VectorXd::Zero(6);
  q.p_t[0] = 100.0;  // minimum output of G1
  q.p_t[1] = 10.0;
  q.p_t[2] = 10.0;
  q.p_t[3] = 76.4;
  q.j = 2;
  q.t = 0;
  PsipVerification v =
      verify_psip_against_enumeration(inst, q, kPolicy, kOpts);
  CHECK(v.agrees);
}

TEST_CASE("fully compliant point has zero worst case at j = 1") {
  Instance inst = fixture_with_k(1, {0.0});
  PsipResult r = solve_psip(inst, n1_point_query(1), kPolicy, kOpts);
  CHECK(r.objective == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("two-element failures exceed N-1 protection") {
  Instance inst = fixture_with_k(2, {0.0, 0.0});
  PsipResult r = solve_psip(inst, n1_point_query(2), kPolicy, kOpts);
  CHECK(r.objective > 1.0);
}

TEST_CASE("worst case grows with the failure budget when epsilon stays zero") {
  Instance inst = fixture_with_k(3, {0.0, 0.0, 0.0});
  double prev = -1.0;
  for (int j = 1; j <= 3; ++j) {
    PsipResult r = solve_psip(inst, n1_point_query(j), kPolicy, kOpts);
    CHECK(r.objective >= prev - 1e-9);
    prev = r.objective;
  }
}

TEST_CASE("linearization products match their definitions in the optimum") {
  Instance inst = fixture_with_k(2, {0.0, 0.10});
  PsipResult r = solve_psip(inst, n1_point_query(2), kPolicy, kOpts);
  for (int e = 0; e < 7; ++e) {
    double live = r.worst.involves_line(e) ? 0.0 : 1.0;
    CHECK(r.r1[e] == doctest::Approx(live * r.beta[e]).epsilon(1e-6).scale(
                         1.0 + std::abs(r.beta[e])));
    CHECK(r.r2[e] == doctest::Approx(live * r.delta_hat[e]).epsilon(1e-6).scale(
                         1.0 + std::abs(r.delta_hat[e])));
    CHECK(r.r3[e] ==
          doctest::Approx(live * r.delta_check[e]).epsilon(1e-6).scale(
              1.0 + std::abs(r.delta_check[e])));
  }
  for (int g = 0; g < 6; ++g) {
    double live = r.worst.involves_gen(g) ? 0.0 : 1.0;
    CHECK(r.r4[g] == doctest::Approx(live * r.gamma[g]).epsilon(1e-6).scale(
                         1.0 + std::abs(r.gamma[g])));
    CHECK(r.r5[g] ==
          doctest::Approx(live * r.lambda_check[g]).epsilon(1e-6).scale(
              1.0 + std::abs(r.lambda_check[g])));
  }
}

TEST_CASE("tiny big-M bound is audited and grown") {
  Instance inst = fixture_with_k(1, {0.0});
  BigMPolicy tiny;
  tiny.initial_u = 1e-4;
  tiny.growth = 100.0;
  tiny.max_retries = 5;
  PsipResult r = solve_psip(inst, bare_point_query(1), tiny, kOpts);
  CHECK(r.retries > 0);
  CHECK(r.objective == doctest::Approx(196.4).epsilon(1e-6));
}

TEST_CASE("big-M exhaustion names the binding class") {
  Instance inst = fixture_with_k(1, {0.0});
  BigMPolicy hopeless;
  hopeless.initial_u = 1e-6;
  hopeless.growth = 1.5;
  hopeless.max_retries = 1;
  CHECK_THROWS_AS(solve_psip(inst, bare_point_query(1), hopeless, kOpts),
                  milp::SolveError);
}

TEST_CASE("enumeration cap is enforced") {
  Instance inst = fixture_with_k(2, {0.0, 0.0});
  CHECK_THROWS_AS(verify_psip_against_enumeration(inst, bare_point_query(2),
                                                  kPolicy, kOpts, 10),
                  std::invalid_argument);
}

TEST_CASE("psip with all elements immune reports no contingency") {
  Instance inst = fixture_with_k(1, {0.0});
  for (auto& g : inst.system.generators) g.fail_immune = true;
  for (auto& e : inst.system.lines) e.fail_immune = true;
  PsipVerification v = verify_psip_against_enumeration(
      inst, bare_point_query(1), kPolicy, kOpts);
  CHECK(v.contingencies_checked == 0);
  CHECK(v.agrees);
  CHECK(v.psip_value == 0.0);
}
