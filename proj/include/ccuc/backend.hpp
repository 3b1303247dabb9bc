#pragma once

// Pluggable solver backends. The reference backend (dense simplex +
// branch-and-bound) is always available under the name "reference"; a
// second built-in, "bland", runs the same pipeline but prices with Bland's
// rule from the first pivot, giving an independent pivoting path for
// cross-backend checks. Backends must be stateless across calls.

#include <memory>
#include <string>
#include <vector>

#include "ccuc/milp.hpp"

namespace ccuc::milp {

class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual std::string name() const = 0;
  virtual SolveResult solve_lp(const LinearProgram& program,
                               const SolverOptions& options) const = 0;
  virtual SolveResult solve_milp(const MilpProgram& program,
                                 const SolverOptions& options) const = 0;
};

/// Registers a backend under backend->name(). Throws on duplicate names.
void register_backend(std::shared_ptr<SolverBackend> backend);

/// Looks up a backend by name; built-ins are registered on first use.
/// Throws std::out_of_range for unknown names.
const SolverBackend& backend(const std::string& name);

std::vector<std::string> backend_names();

}  // namespace ccuc::milp
