#include <cstdio>
#include <fstream>

#include "ccuc/model.hpp"
#include "doctest.h"

using namespace ccuc;

TEST_CASE("six-bus fixture matches the published generator table") {
  Instance inst = builtin_fixture("six_bus_example");
  REQUIRE(inst.system.num_generators() == 6);
  REQUIRE(inst.system.num_buses() == 6);
  REQUIRE(inst.system.num_lines() == 7);

  struct Row {
    int bus;
    double marginal, startup, pmax, pmin, ramp;
  };
  const Row expected[6] = {
      {0, 13.51, 125.0, 220.0, 100.0, 55.0}, {1, 32.63, 249.0, 100.0, 10.0, 50.0},
      {5, 17.69, 0.0, 100.0, 10.0, 20.0},    {0, 42.0, 50.0, 100.0, 0.0, 50.0},
      {1, 42.0, 50.0, 100.0, 0.0, 50.0},     {5, 42.0, 50.0, 100.0, 0.0, 50.0},
  };
  for (int g = 0; g < 6; ++g) {
    const Generator& gen = inst.system.generators[g];
    CAPTURE(g);
    CHECK(gen.bus == expected[g].bus);
    CHECK(gen.cost_marginal == expected[g].marginal);
    CHECK(gen.cost_startup == expected[g].startup);
    CHECK(gen.p_max == expected[g].pmax);
    CHECK(gen.p_min == expected[g].pmin);
    CHECK(gen.ramp_up == expected[g].ramp);
    CHECK(gen.ramp_down == expected[g].ramp);
    CHECK(gen.cost_shutdown == 0.0);
  }
  CHECK(inst.system.generators[2].cost_startup == 0.0);  // G3 starts free
}

TEST_CASE("six-bus fixture matches the published line table") {
  Instance inst = builtin_fixture("six_bus_example");
  struct Row {
    int from, to;
    double b, f;
  };
  const Row expected[7] = {
      {0, 1, 5.88, 200.0}, {0, 3, 3.88, 100.0}, {1, 3, 5.08, 100.0},
      {4, 5, 7.14, 100.0}, {2, 5, 55.56, 100.0}, {1, 2, 27.03, 100.0},
      {3, 4, 27.03, 100.0},
  };
  for (int e = 0; e < 7; ++e) {
    const TransmissionLine& ln = inst.system.lines[e];
    CAPTURE(e);
    CHECK(ln.from_bus == expected[e].from);
    CHECK(ln.to_bus == expected[e].to);
    CHECK(ln.susceptance == expected[e].b);
    CHECK(ln.flow_limit == expected[e].f);
  }
  CHECK(inst.system.lines[0].flow_limit == 200.0);
}

TEST_CASE("single-period fixture carries the printed loads") {
  Instance inst = builtin_fixture("six_bus_single_period");
  REQUIRE(inst.periods() == 1);
  CHECK(inst.demand.at(2, 0) == 51.2);
  CHECK(inst.demand.at(3, 0) == 102.4);
  CHECK(inst.demand.at(4, 0) == 42.8);
  CHECK(inst.demand.total(0) == doctest::Approx(196.4).epsilon(1e-12));
}

TEST_CASE("experiment fixture adds three fast-ramping clones") {
  Instance inst = builtin_fixture("six_bus_experiment");
  REQUIRE(inst.system.num_generators() == 9);
  REQUIRE(inst.system.num_lines() == 7);
  for (int g = 6; g < 9; ++g) {
    CHECK(inst.system.generators[g].cost_marginal == 42.0);
    CHECK(inst.system.generators[g].p_max == 100.0);
    CHECK(inst.system.generators[g].ramp_up == 50.0);
  }
  CHECK(inst.system.generators[6].bus == 0);
  CHECK(inst.system.generators[7].bus == 1);
  CHECK(inst.system.generators[8].bus == 5);
}

TEST_CASE("unknown fixture name") {
  CHECK_THROWS_AS(builtin_fixture("five_bus"), std::invalid_argument);
}

TEST_CASE("total demand equals per-bus summation in every period") {
  for (const std::string& name : builtin_fixture_names()) {
    Instance inst = builtin_fixture(name);
    for (int t = 0; t < inst.periods(); ++t) {
      double sum = 0.0;
      for (int i = 0; i < inst.system.num_buses(); ++i) {
        sum += inst.demand.at(i, t);
      }
      CHECK(inst.demand.total(t) == doctest::Approx(sum).epsilon(1e-14));
    }
  }
}

TEST_CASE("write/load round-trip preserves the instance") {
  for (const std::string& name : builtin_fixture_names()) {
    Instance inst = builtin_fixture(name);
    Instance back = parse_instance(write_instance(inst));
    CHECK(instances_equal(inst, back, 0.0));
  }
}

TEST_CASE("round-trip through a file") {
  Instance inst = builtin_fixture("six_bus_single_period");
  std::string path = "six_bus_roundtrip_test.json";
  save_instance(inst, path);
  Instance back = load_instance(path);
  CHECK(instances_equal(inst, back, 0.0));
  std::remove(path.c_str());
}

TEST_CASE("missing file raises a parse error") {
  CHECK_THROWS_AS(load_instance("no/such/file.json"), ParseError);
}

TEST_CASE("malformed JSON raises a parse error") {
  CHECK_THROWS_AS(parse_instance("{ not json"), ParseError);
}

TEST_CASE("epsilon monotonicity is enforced") {
  Instance inst = builtin_fixture("six_bus_single_period");
  inst.reliability.k = 2;
  inst.reliability.epsilon = {0.2, 0.1};
  std::string text = write_instance(inst);
  CHECK_THROWS_WITH_AS(parse_instance(text),
                       doctest::Contains("non-decreasing"), ValidationError);
}

TEST_CASE("epsilon outside [0,1] is rejected") {
  Instance inst = builtin_fixture("six_bus_single_period");
  inst.reliability.epsilon = {1.5};
  CHECK_THROWS_AS(inst.validate(), ValidationError);
}

TEST_CASE("initial up/down conditions must not overlap") {
  Instance inst = builtin_fixture("six_bus_single_period");
  inst.system.generators[0].init_up = 2;
  inst.system.generators[0].init_down = 3;
  CHECK_THROWS_WITH_AS(inst.validate(), doctest::Contains("init_up"),
                       ValidationError);
}

TEST_CASE("delta multipliers below one are rejected") {
  Instance inst = builtin_fixture("six_bus_single_period");
  inst.reliability.delta_gen[{0, 1}] = 0.5;
  CHECK_THROWS_AS(inst.validate(), ValidationError);
}

TEST_CASE("negative loads are rejected") {
  Instance inst = builtin_fixture("six_bus_single_period");
  inst.demand.set(0, 0, -1.0);
  CHECK_THROWS_AS(inst.validate(), ValidationError);
}

TEST_CASE("line endpoints and susceptance are validated") {
  Instance inst = builtin_fixture("six_bus_single_period");
  inst.system.lines[0].to_bus = inst.system.lines[0].from_bus;
  CHECK_THROWS_AS(inst.validate(), ValidationError);

  Instance inst2 = builtin_fixture("six_bus_single_period");
  inst2.system.lines[1].susceptance = 0.0;
  CHECK_THROWS_AS(inst2.validate(), ValidationError);
}

TEST_CASE("fail-immune lists under reliability mark elements") {
  Instance inst = builtin_fixture("six_bus_single_period");
  std::string text = write_instance(inst);
  auto pos = text.rfind("\"reliability\"");
  REQUIRE(pos != std::string::npos);
  text.insert(text.find('{', pos) + 1,
              "\"fail_immune\": {\"generators\": [1], \"lines\": [0, 2]},");
  Instance marked = parse_instance(text);
  CHECK(marked.system.generators[1].fail_immune);
  CHECK(marked.system.lines[0].fail_immune);
  CHECK(marked.system.lines[2].fail_immune);
  CHECK(marked.effective_generators() == 5);
  CHECK(marked.effective_lines() == 5);
}

TEST_CASE("default startup/shutdown ramps fall back to p_max") {
  std::string text = R"({
    "buses": [{"id": 0}, {"id": 1}],
    "generators": [{"id": 0, "bus": 0, "p_min": 0, "p_max": 50,
                    "ramp_up": 10, "ramp_down": 10,
                    "cost_startup": 5, "cost_marginal": 2}],
    "lines": [{"id": 0, "from_bus": 0, "to_bus": 1,
               "susceptance": 1.0, "flow_limit": 40}],
    "reference_bus": 0,
    "demand": {"periods": 2, "loads": [{"bus": 1, "period": 1, "mw": 30}]},
    "reliability": {"k": 0, "epsilon": []}
  })";
  Instance inst = parse_instance(text);
  CHECK(inst.system.generators[0].startup_ramp == 50.0);
  CHECK(inst.system.generators[0].shutdown_ramp == 50.0);
  CHECK(inst.system.generators[0].min_up == 1);
  CHECK(inst.demand.at(1, 0) == 30.0);
  CHECK(inst.demand.at(1, 1) == 0.0);  // unspecified defaults to zero
}
