#include "ccuc/backend.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

#include "ccuc/branch_bound.hpp"
#include "ccuc/simplex.hpp"

namespace ccuc::milp {

namespace {

class ReferenceBackend : public SolverBackend {
 public:
  explicit ReferenceBackend(std::string name, bool bland)
      : name_(std::move(name)), bland_(bland) {}

  std::string name() const override { return name_; }

  SolveResult solve_lp(const LinearProgram& program,
                       const SolverOptions& options) const override {
    SolverOptions o = options;
    o.bland_pricing = bland_;
    return ccuc::milp::solve_lp(program, o);
  }

  SolveResult solve_milp(const MilpProgram& program,
                         const SolverOptions& options) const override {
    SolverOptions o = options;
    o.bland_pricing = bland_;
    if (!program.has_binaries()) {
      return ccuc::milp::solve_lp(program, o);
    }
    return ccuc::milp::solve_milp(program, o);
  }

 private:
  std::string name_;
  bool bland_;
};

struct Registry {
  std::mutex mu;
  std::map<std::string, std::shared_ptr<SolverBackend>> backends;
};

Registry& registry() {
  static Registry* r = [] {
    auto* reg = new Registry;
    reg->backends["reference"] =
        std::make_shared<ReferenceBackend>("reference", false);
    reg->backends["bland"] =
        std::make_shared<ReferenceBackend>("bland", true);
    return reg;
  }();
  return *r;
}

}  // namespace

void register_backend(std::shared_ptr<SolverBackend> backend) {
  if (!backend) throw std::invalid_argument("register_backend: null backend");
  Registry& r = registry();
  std::lock_guard<std::mutex> lock(r.mu);
  auto [it, inserted] = r.backends.emplace(backend->name(), backend);
  if (!inserted) {
    throw std::invalid_argument("backend '" + backend->name() +
                                "' is already registered");
  }
}

const SolverBackend& backend(const std::string& name) {
  Registry& r = registry();
  std::lock_guard<std::mutex> lock(r.mu);
  auto it = r.backends.find(name);
  if (it == r.backends.end()) {
    throw std::out_of_range("unknown solver backend '" + name + "'");
  }
  return *it->second;
}

std::vector<std::string> backend_names() {
  Registry& r = registry();
  std::lock_guard<std::mutex> lock(r.mu);
  std::vector<std::string> names;
  for (const auto& [k, v] : r.backends) names.push_back(k);
  return names;
}

}  // namespace ccuc::milp
