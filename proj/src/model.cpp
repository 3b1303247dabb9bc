#include "ccuc/model.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ccuc {

using nlohmann::json;

void PowerSystem::finalize() {
  const int I = num_buses();
  for (int i = 0; i < I; ++i) {
    if (buses[i].id != i) {
      throw ValidationError("bus ids must be dense 0..I-1; bus at position " +
                            std::to_string(i) + " has id " +
                            std::to_string(buses[i].id));
    }
  }
  gens_at_bus.assign(I, {});
  lines_in.assign(I, {});
  lines_out.assign(I, {});
  for (int g = 0; g < num_generators(); ++g) {
    Generator& gen = generators[g];
    if (gen.id != g) {
      throw ValidationError("generator ids must be dense 0..G-1 (got " +
                            std::to_string(gen.id) + " at position " +
                            std::to_string(g) + ")");
    }
    if (gen.bus < 0 || gen.bus >= I) {
      throw ValidationError("generator " + gen.name + ": bus index " +
                            std::to_string(gen.bus) + " out of range");
    }
    if (!(0.0 <= gen.p_min && gen.p_min <= gen.p_max)) {
      throw ValidationError("generator " + gen.name +
                            ": requires 0 <= p_min <= p_max");
    }
    if (gen.init_up * gen.init_down != 0) {
      throw ValidationError("generator " + gen.name +
                            ": init_up * init_down must be 0");
    }
    if (gen.ramp_up < 0 || gen.ramp_down < 0 || gen.startup_ramp < 0 ||
        gen.shutdown_ramp < 0 || gen.min_up < 0 || gen.min_down < 0 ||
        gen.init_up < 0 || gen.init_down < 0 || gen.cost_startup < 0 ||
        gen.cost_shutdown < 0) {
      throw ValidationError("generator " + gen.name +
                            ": ramp rates, times and costs must be >= 0");
    }
    gens_at_bus[gen.bus].push_back(g);
  }
  for (int e = 0; e < num_lines(); ++e) {
    TransmissionLine& ln = lines[e];
    if (ln.id != e) {
      throw ValidationError("line ids must be dense 0..E-1 (got " +
                            std::to_string(ln.id) + " at position " +
                            std::to_string(e) + ")");
    }
    if (ln.from_bus < 0 || ln.from_bus >= I || ln.to_bus < 0 ||
        ln.to_bus >= I) {
      throw ValidationError("line " + ln.name + ": bus index out of range");
    }
    if (ln.from_bus == ln.to_bus) {
      throw ValidationError("line " + ln.name + ": from_bus equals to_bus");
    }
    if (!(ln.susceptance > 0.0)) {
      throw ValidationError("line " + ln.name + ": susceptance must be > 0");
    }
    if (!(ln.flow_limit > 0.0)) {
      throw ValidationError("line " + ln.name + ": flow_limit must be > 0");
    }
    lines_out[ln.from_bus].push_back(e);
    lines_in[ln.to_bus].push_back(e);
  }
  if (reference_bus < 0 || reference_bus >= I) {
    throw ValidationError("reference_bus " + std::to_string(reference_bus) +
                          " is not a valid bus id");
  }
}

int Instance::effective_generators() const {
  int n = 0;
  for (const Generator& g : system.generators) n += g.fail_immune ? 0 : 1;
  return n;
}

int Instance::effective_lines() const {
  int n = 0;
  for (const TransmissionLine& e : system.lines) n += e.fail_immune ? 0 : 1;
  return n;
}

void Instance::validate() const {
  PowerSystem sys = system;
  sys.finalize();
  if (demand.num_buses() != system.num_buses()) {
    throw ValidationError("demand profile covers " +
                          std::to_string(demand.num_buses()) +
                          " buses but the system has " +
                          std::to_string(system.num_buses()));
  }
  if (demand.periods() < 1) {
    throw ValidationError("demand profile must cover at least one period");
  }
  if (demand.matrix().minCoeff() < 0.0) {
    throw ValidationError("loads must be >= 0");
  }
  const ReliabilitySpec& r = reliability;
  if (r.k < 0) throw ValidationError("reliability.k must be >= 0");
  if (static_cast<int>(r.epsilon.size()) != r.k) {
    throw ValidationError("reliability.epsilon must have exactly k entries");
  }
  for (int j = 0; j < r.k; ++j) {
    if (!(r.epsilon[j] >= 0.0 && r.epsilon[j] <= 1.0)) {
      throw ValidationError("epsilon_" + std::to_string(j + 1) +
                            " must lie in [0,1]");
    }
    if (j > 0 && r.epsilon[j] < r.epsilon[j - 1]) {
      throw ValidationError(
          "epsilon must be non-decreasing: epsilon_" + std::to_string(j) +
          " = " + std::to_string(r.epsilon[j - 1]) + " > epsilon_" +
          std::to_string(j + 1) + " = " + std::to_string(r.epsilon[j]));
    }
  }
  for (const auto& [key, v] : r.delta_gen) {
    if (key.first < 0 || key.first >= system.num_generators()) {
      throw ValidationError("delta_gen references unknown generator " +
                            std::to_string(key.first));
    }
    if (v < 1.0) throw ValidationError("delta multipliers must be >= 1");
  }
  for (const auto& [key, v] : r.delta_line) {
    if (key.first < 0 || key.first >= system.num_lines()) {
      throw ValidationError("delta_line references unknown line " +
                            std::to_string(key.first));
    }
    if (v < 1.0) throw ValidationError("delta multipliers must be >= 1");
  }
}

namespace {

double num_or(const json& j, const char* key, double dflt) {
  auto it = j.find(key);
  return it == j.end() ? dflt : it->get<double>();
}

int int_or(const json& j, const char* key, int dflt) {
  auto it = j.find(key);
  return it == j.end() ? dflt : it->get<int>();
}

std::map<std::pair<int, int>, double> parse_delta(const json& j,
                                                  const char* key) {
  std::map<std::pair<int, int>, double> out;
  auto it = j.find(key);
  if (it == j.end()) return out;
  for (auto& [id_str, arr] : it->items()) {
    int id = std::stoi(id_str);
    int jj = 1;
    for (const auto& v : arr) out[{id, jj++}] = v.get<double>();
  }
  return out;
}

json dump_delta(const std::map<std::pair<int, int>, double>& m, int k) {
  json out = json::object();
  for (const auto& [key, v] : m) {
    std::string id = std::to_string(key.first);
    if (!out.contains(id)) out[id] = std::vector<double>(k, 1.0);
    if (key.second >= 1 && key.second <= k) out[id][key.second - 1] = v;
  }
  return out;
}

}  // namespace

Instance parse_instance(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("instance JSON: ") + e.what());
  }
  try {
    Instance inst;
    PowerSystem& sys = inst.system;
    for (const auto& b : j.at("buses")) {
      Bus bus;
      bus.id = b.at("id").get<int>();
      bus.name = b.contains("name") ? b.at("name").get<std::string>()
                                    : ("bus" + std::to_string(bus.id + 1));
      sys.buses.push_back(bus);
    }
    for (const auto& g : j.at("generators")) {
      Generator gen;
      gen.id = g.at("id").get<int>();
      gen.bus = g.at("bus").get<int>();
      gen.p_min = g.at("p_min").get<double>();
      gen.p_max = g.at("p_max").get<double>();
      gen.ramp_up = g.at("ramp_up").get<double>();
      gen.ramp_down = g.at("ramp_down").get<double>();
      gen.startup_ramp = num_or(g, "startup_ramp", gen.p_max);
      gen.shutdown_ramp = num_or(g, "shutdown_ramp", gen.p_max);
      gen.min_up = int_or(g, "min_up", 1);
      gen.min_down = int_or(g, "min_down", 1);
      gen.init_up = int_or(g, "init_up", 0);
      gen.init_down = int_or(g, "init_down", 0);
      gen.init_power = num_or(g, "init_power", 0.0);
      gen.cost_startup = g.at("cost_startup").get<double>();
      gen.cost_shutdown = num_or(g, "cost_shutdown", 0.0);
      gen.cost_marginal = g.at("cost_marginal").get<double>();
      gen.fail_immune = g.contains("fail_immune") && g.at("fail_immune").get<bool>();
      gen.name = g.contains("name") ? g.at("name").get<std::string>()
                                    : ("G" + std::to_string(gen.id + 1));
      sys.generators.push_back(gen);
    }
    for (const auto& l : j.at("lines")) {
      TransmissionLine ln;
      ln.id = l.at("id").get<int>();
      ln.from_bus = l.at("from_bus").get<int>();
      ln.to_bus = l.at("to_bus").get<int>();
      ln.susceptance = l.at("susceptance").get<double>();
      ln.flow_limit = l.at("flow_limit").get<double>();
      ln.fail_immune = l.contains("fail_immune") && l.at("fail_immune").get<bool>();
      ln.name = l.contains("name") ? l.at("name").get<std::string>()
                                   : ("L" + std::to_string(ln.id + 1));
      sys.lines.push_back(ln);
    }
    sys.reference_bus = int_or(j, "reference_bus", 0);

    const json& dj = j.at("demand");
    int T = dj.at("periods").get<int>();
    if (T < 1) throw ValidationError("demand.periods must be >= 1");
    inst.demand = DemandProfile(static_cast<int>(sys.buses.size()), T);
    for (const auto& row : dj.at("loads")) {
      int bus = row.at("bus").get<int>();
      int t = row.at("period").get<int>();  // 1-based in the file
      double mw = row.at("mw").get<double>();
      if (bus < 0 || bus >= static_cast<int>(sys.buses.size())) {
        throw ValidationError("demand row references unknown bus " +
                              std::to_string(bus));
      }
      if (t < 1 || t > T) {
        throw ValidationError("demand row period " + std::to_string(t) +
                              " outside 1.." + std::to_string(T));
      }
      inst.demand.set(bus, t - 1, mw);
    }

    const json& rj = j.at("reliability");
    inst.reliability.k = rj.at("k").get<int>();
    if (rj.contains("epsilon")) {
      inst.reliability.epsilon = rj.at("epsilon").get<std::vector<double>>();
    }
    inst.reliability.delta_gen = parse_delta(rj, "delta_gen");
    inst.reliability.delta_line = parse_delta(rj, "delta_line");
    if (rj.contains("fail_immune")) {
      const json& fi = rj.at("fail_immune");
      if (fi.contains("generators")) {
        for (int id : fi.at("generators").get<std::vector<int>>()) {
          if (id < 0 || id >= static_cast<int>(sys.generators.size())) {
            throw ValidationError("fail_immune references unknown generator " +
                                  std::to_string(id));
          }
          sys.generators[id].fail_immune = true;
        }
      }
      if (fi.contains("lines")) {
        for (int id : fi.at("lines").get<std::vector<int>>()) {
          if (id < 0 || id >= static_cast<int>(sys.lines.size())) {
            throw ValidationError("fail_immune references unknown line " +
                                  std::to_string(id));
          }
          sys.lines[id].fail_immune = true;
        }
      }
    }

    inst.system.finalize();
    inst.validate();
    return inst;
  } catch (const json::exception& e) {
    throw ParseError(std::string("instance JSON: ") + e.what());
  }
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string write_instance(const Instance& inst) {
  json j;
  j["buses"] = json::array();
  for (const Bus& b : inst.system.buses) {
    j["buses"].push_back({{"id", b.id}, {"name", b.name}});
  }
  j["generators"] = json::array();
  for (const Generator& g : inst.system.generators) {
    json gj = {{"id", g.id},
               {"bus", g.bus},
               {"name", g.name},
               {"p_min", g.p_min},
               {"p_max", g.p_max},
               {"ramp_up", g.ramp_up},
               {"ramp_down", g.ramp_down},
               {"startup_ramp", g.startup_ramp},
               {"shutdown_ramp", g.shutdown_ramp},
               {"min_up", g.min_up},
               {"min_down", g.min_down},
               {"init_up", g.init_up},
               {"init_down", g.init_down},
               {"cost_startup", g.cost_startup},
               {"cost_shutdown", g.cost_shutdown},
               {"cost_marginal", g.cost_marginal}};
    if (g.init_power != 0.0) gj["init_power"] = g.init_power;
    if (g.fail_immune) gj["fail_immune"] = true;
    j["generators"].push_back(gj);
  }
  j["lines"] = json::array();
  for (const TransmissionLine& l : inst.system.lines) {
    json lj = {{"id", l.id},
               {"from_bus", l.from_bus},
               {"to_bus", l.to_bus},
               {"name", l.name},
               {"susceptance", l.susceptance},
               {"flow_limit", l.flow_limit}};
    if (l.fail_immune) lj["fail_immune"] = true;
    j["lines"].push_back(lj);
  }
  j["reference_bus"] = inst.system.reference_bus;
  json loads = json::array();
  for (int t = 0; t < inst.demand.periods(); ++t) {
    for (int i = 0; i < inst.demand.num_buses(); ++i) {
      double mw = inst.demand.at(i, t);
      if (mw != 0.0) {
        loads.push_back({{"bus", i}, {"period", t + 1}, {"mw", mw}});
      }
    }
  }
  j["demand"] = {{"periods", inst.demand.periods()}, {"loads", loads}};
  json rj = {{"k", inst.reliability.k}, {"epsilon", inst.reliability.epsilon}};
  if (!inst.reliability.delta_gen.empty()) {
    rj["delta_gen"] = dump_delta(inst.reliability.delta_gen,
                                 inst.reliability.k);
  }
  if (!inst.reliability.delta_line.empty()) {
    rj["delta_line"] = dump_delta(inst.reliability.delta_line,
                                  inst.reliability.k);
  }
  j["reliability"] = rj;
  return j.dump(2) + "\n";
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file: " + path);
  out << write_instance(inst);
}

namespace {

// Generator and line data of the 6-bus test system. Min up/down times and
// initial conditions are not part of the published tables; the fixture uses
// min_up = min_down = 1, cold start, and startup/shutdown ramps equal to
// p_max. Single-period results are insensitive to these choices.
struct GenRow {
  const char* name;
  int bus;
  double cost_marginal, cost_startup, p_max, p_min, ramp;
};

constexpr GenRow kSixBusGens[] = {
    {"G1", 0, 13.51, 125.0, 220.0, 100.0, 55.0},
    {"G2", 1, 32.63, 249.0, 100.0, 10.0, 50.0},
    {"G3", 5, 17.69, 0.0, 100.0, 10.0, 20.0},
    {"G4", 0, 42.0, 50.0, 100.0, 0.0, 50.0},
    {"G5", 1, 42.0, 50.0, 100.0, 0.0, 50.0},
    {"G6", 5, 42.0, 50.0, 100.0, 0.0, 50.0},
};

struct LineRow {
  const char* name;
  int from, to;
  double susceptance, flow_limit;
};

constexpr LineRow kSixBusLines[] = {
    {"L1", 0, 1, 5.88, 200.0}, {"L2", 0, 3, 3.88, 100.0},
    {"L3", 1, 3, 5.08, 100.0}, {"L4", 4, 5, 7.14, 100.0},
    {"L5", 2, 5, 55.56, 100.0}, {"L6", 1, 2, 27.03, 100.0},
    {"L7", 3, 4, 27.03, 100.0},
};

// Base loads: buses 3, 4, 5 (1-based) carry 51.2 / 102.4 / 42.8 MW.
constexpr double kBaseLoad[6] = {0.0, 0.0, 51.2, 102.4, 42.8, 0.0};

// Hourly multipliers for the 24-period fixtures. The paper does not publish
// its demand profiles; this synthetic daily shape (trough at hour 4, evening
// peak at hour 19) is documented in docs/instance_schema.md.
constexpr double kDailyShape[24] = {
    0.72, 0.68, 0.65, 0.64, 0.66, 0.72, 0.80, 0.89, 0.96, 1.01, 1.04, 1.05,
    1.04, 1.02, 1.00, 0.99, 1.00, 1.04, 1.08, 1.06, 1.00, 0.92, 0.84, 0.77};

PowerSystem six_bus_system(int num_generators) {
  PowerSystem sys;
  for (int i = 0; i < 6; ++i) {
    sys.buses.push_back({i, "bus" + std::to_string(i + 1)});
  }
  for (int g = 0; g < num_generators; ++g) {
    // units beyond G6 replicate the fast-ramping G4..G6 block at buses 1/2/6
    const GenRow& row = kSixBusGens[g < 6 ? g : 3 + (g - 6) % 3];
    Generator gen;
    gen.id = g;
    gen.name = g < 6 ? row.name : ("G" + std::to_string(g + 1));
    gen.bus = row.bus;
    gen.p_min = row.p_min;
    gen.p_max = row.p_max;
    gen.ramp_up = gen.ramp_down = row.ramp;
    gen.startup_ramp = gen.shutdown_ramp = row.p_max;
    gen.min_up = gen.min_down = 1;
    gen.init_up = gen.init_down = 0;
    gen.cost_startup = row.cost_startup;
    gen.cost_shutdown = 0.0;  // negligible, assumed zero
    gen.cost_marginal = row.cost_marginal;
    sys.generators.push_back(gen);
  }
  for (int e = 0; e < 7; ++e) {
    const LineRow& row = kSixBusLines[e];
    TransmissionLine ln;
    ln.id = e;
    ln.name = row.name;
    ln.from_bus = row.from;
    ln.to_bus = row.to;
    ln.susceptance = row.susceptance;
    ln.flow_limit = row.flow_limit;
    sys.lines.push_back(ln);
  }
  sys.reference_bus = 0;
  sys.finalize();
  return sys;
}

DemandProfile daily_profile(int periods) {
  DemandProfile d(6, periods);
  for (int t = 0; t < periods; ++t) {
    double m = periods == 1 ? 1.0 : kDailyShape[t % 24];
    for (int i = 0; i < 6; ++i) d.set(i, t, kBaseLoad[i] * m);
  }
  return d;
}

}  // namespace

Instance builtin_fixture(const std::string& name) {
  Instance inst;
  if (name == "six_bus_single_period") {
    inst.system = six_bus_system(6);
    inst.demand = daily_profile(1);
    inst.reliability.k = 1;
    inst.reliability.epsilon = {0.0};
  } else if (name == "six_bus_example") {
    inst.system = six_bus_system(6);
    inst.demand = daily_profile(24);
    inst.reliability.k = 1;
    inst.reliability.epsilon = {0.0};
  } else if (name == "six_bus_experiment") {
    inst.system = six_bus_system(9);
    inst.demand = daily_profile(24);
    inst.reliability.k = 2;
    inst.reliability.epsilon = {0.0, 0.29};
  } else {
    throw std::invalid_argument("unknown fixture '" + name + "'");
  }
  inst.validate();
  return inst;
}

std::vector<std::string> builtin_fixture_names() {
  return {"six_bus_example", "six_bus_experiment", "six_bus_single_period"};
}

bool instances_equal(const Instance& a, const Instance& b, double tol) {
  auto close = [tol](double x, double y) { return std::abs(x - y) <= tol; };
  if (a.system.num_buses() != b.system.num_buses() ||
      a.system.num_generators() != b.system.num_generators() ||
      a.system.num_lines() != b.system.num_lines() ||
      a.system.reference_bus != b.system.reference_bus ||
      a.demand.periods() != b.demand.periods() ||
      a.reliability.k != b.reliability.k) {
    return false;
  }
  for (int i = 0; i < a.system.num_buses(); ++i) {
    if (a.system.buses[i].name != b.system.buses[i].name) return false;
  }
  for (int g = 0; g < a.system.num_generators(); ++g) {
    const Generator& x = a.system.generators[g];
    const Generator& y = b.system.generators[g];
    if (x.bus != y.bus || !close(x.p_min, y.p_min) ||
        !close(x.p_max, y.p_max) || !close(x.ramp_up, y.ramp_up) ||
        !close(x.ramp_down, y.ramp_down) ||
        !close(x.startup_ramp, y.startup_ramp) ||
        !close(x.shutdown_ramp, y.shutdown_ramp) ||
        x.min_up != y.min_up || x.min_down != y.min_down ||
        x.init_up != y.init_up || x.init_down != y.init_down ||
        !close(x.init_power, y.init_power) ||
        !close(x.cost_startup, y.cost_startup) ||
        !close(x.cost_shutdown, y.cost_shutdown) ||
        !close(x.cost_marginal, y.cost_marginal) ||
        x.fail_immune != y.fail_immune || x.name != y.name) {
      return false;
    }
  }
  for (int e = 0; e < a.system.num_lines(); ++e) {
    const TransmissionLine& x = a.system.lines[e];
    const TransmissionLine& y = b.system.lines[e];
    if (x.from_bus != y.from_bus || x.to_bus != y.to_bus ||
        !close(x.susceptance, y.susceptance) ||
        !close(x.flow_limit, y.flow_limit) ||
        x.fail_immune != y.fail_immune || x.name != y.name) {
      return false;
    }
  }
  if ((a.demand.matrix() - b.demand.matrix()).cwiseAbs().maxCoeff() > tol) {
    return false;
  }
  for (int j = 0; j < a.reliability.k; ++j) {
    if (!close(a.reliability.epsilon[j], b.reliability.epsilon[j])) {
      return false;
    }
  }
  return a.reliability.delta_gen == b.reliability.delta_gen &&
         a.reliability.delta_line == b.reliability.delta_line;
}

}  // namespace ccuc
