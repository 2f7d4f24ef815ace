#pragma once

// Re-evaluates a stored counterexample through the measure registered for
// its clause.

#include "ool/verdict.hpp"

#include <string>
#include <vector>

namespace ool {

/// Every clause name that can be replayed.
std::vector<std::string> replayable_clauses();

/// Throws ValidationError for an unknown clause.
double replay(const Counterexample& c, const Tolerances& tol = {});

}  // namespace ool
