#pragma once

// Domain types for power systems, demand profiles and reliability
// parameters, plus instance file ingestion and the built-in test fixtures.
// Instances are immutable after construction and safe to share across
// concurrent workers.

#include <Eigen/Core>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccuc {

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Bus {
  int id = -1;
  std::string name;
};

struct Generator {
  int id = -1;
  int bus = -1;
  double p_min = 0.0;        // MW
  double p_max = 0.0;        // MW
  double ramp_up = 0.0;      // MW/period
  double ramp_down = 0.0;    // MW/period
  double startup_ramp = 0.0;   // MW in the period the unit turns on
  double shutdown_ramp = 0.0;  // MW in the period the unit turns off
  int min_up = 1;            // periods
  int min_down = 1;          // periods
  int init_up = 0;           // periods the unit must stay on from t=1
  int init_down = 0;         // periods the unit must stay off from t=1
  double init_power = 0.0;   // output before t=1 (only if initially on)
  double cost_startup = 0.0;
  double cost_shutdown = 0.0;
  double cost_marginal = 0.0;  // currency per MWh
  bool fail_immune = false;
  std::string name;
};

struct TransmissionLine {
  int id = -1;
  int from_bus = -1;
  int to_bus = -1;
  double susceptance = 0.0;  // per-unit
  double flow_limit = 0.0;   // MW
  bool fail_immune = false;
  std::string name;
};

class DemandProfile {
 public:
  DemandProfile() = default;
  DemandProfile(int num_buses, int periods)
      : loads_(Eigen::MatrixXd::Zero(num_buses, periods)) {}

  int periods() const { return static_cast<int>(loads_.cols()); }
  int num_buses() const { return static_cast<int>(loads_.rows()); }
  double at(int bus, int t) const { return loads_(bus, t); }
  void set(int bus, int t, double mw) { loads_(bus, t) = mw; }
  const Eigen::MatrixXd& matrix() const { return loads_; }

  /// Total demand across buses in period t.
  double total(int t) const { return loads_.col(t).sum(); }

 private:
  Eigen::MatrixXd loads_;  // bus x period, default 0
};

struct ReliabilitySpec {
  int k = 0;
  std::vector<double> epsilon;  // size k, monotone non-decreasing in [0,1]
  // (element id, contingency size j) -> multiplier; absent means 1.0
  std::map<std::pair<int, int>, double> delta_gen;
  std::map<std::pair<int, int>, double> delta_line;

  double eps(int j) const {
    if (j <= 0) return 0.0;
    return epsilon.at(j - 1);
  }
  double gen_delta(int g, int j) const {
    auto it = delta_gen.find({g, j});
    return it == delta_gen.end() ? 1.0 : it->second;
  }
  double line_delta(int e, int j) const {
    auto it = delta_line.find({e, j});
    return it == delta_line.end() ? 1.0 : it->second;
  }
};

struct PowerSystem {
  std::vector<Bus> buses;
  std::vector<Generator> generators;
  std::vector<TransmissionLine> lines;
  int reference_bus = 0;

  // adjacency, rebuilt by finalize(): generators at bus i, lines into i,
  // lines out of i
  std::vector<std::vector<int>> gens_at_bus;
  std::vector<std::vector<int>> lines_in;
  std::vector<std::vector<int>> lines_out;

  int num_buses() const { return static_cast<int>(buses.size()); }
  int num_generators() const { return static_cast<int>(generators.size()); }
  int num_lines() const { return static_cast<int>(lines.size()); }

  void finalize();  // rebuilds adjacency, validates invariants
};

struct Instance {
  PowerSystem system;
  DemandProfile demand;
  ReliabilitySpec reliability;

  int periods() const { return demand.periods(); }

  /// Count of elements that participate in contingency enumeration.
  int effective_generators() const;
  int effective_lines() const;

  void validate() const;
};

/// Parses and validates an instance file (JSON schema in docs/).
Instance load_instance(const std::string& path);
Instance parse_instance(const std::string& json_text);

/// Serializes an instance back to the same schema.
std::string write_instance(const Instance& instance);
void save_instance(const Instance& instance, const std::string& path);

/// Built-in fixtures: six_bus_example, six_bus_experiment,
/// six_bus_single_period. Throws std::invalid_argument on unknown names.
Instance builtin_fixture(const std::string& name);
std::vector<std::string> builtin_fixture_names();

bool instances_equal(const Instance& a, const Instance& b, double tol = 0.0);

}  // namespace ccuc
