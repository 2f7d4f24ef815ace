#pragma once

// Verdicts and the sampling harness shared by every property suite.
//
// A suite clause is a Probe: a generator that draws one payload per sample
// from a sub-seed, and a measure that maps a payload to a signed margin. A
// sample violates the clause when margin < -threshold. Margins are
//   * smallest eigenvalues for "is positive" relations,
//   * minus the largest entrywise deviation for equalities,
//   * 0 / -1 for agreement between two boolean routes.
// The measure depends on the payload only, so a stored counterexample can be
// replayed later (see replay.hpp).

#include "ool/sampler.hpp"
#include "ool/space.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ool {

struct Payload {
  std::map<std::string, Element> elements;
  std::map<std::string, ComplexMatrix> scalars;
  std::map<std::string, double> params;
  std::map<std::string, std::string> labels;

  const Element& element(const std::string& key) const;
  const ComplexMatrix& scalar(const std::string& key) const;
  double param(const std::string& key) const;
  const std::string& label(const std::string& key) const;
};

struct Counterexample {
  std::string clause;
  std::string relation;
  double margin = 0.0;
  Payload payload;
};

struct Verdict {
  std::string name;
  std::string statement;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::size_t skipped = 0;
  bool passed = true;
  // False when the clause's hypotheses are not met (the outcome is then
  // informational and does not count towards an overall pass).
  bool guaranteed = true;
  double threshold = 0.0;
  std::optional<double> worst_margin;
  std::optional<Counterexample> counterexample;
  std::string note;
};

using MeasureFn = std::function<double(const Payload&, const Tolerances&)>;

struct Probe {
  std::string clause;
  std::string relation;
  double threshold = 0.0;
  // Returns nothing to record a skipped sample.
  std::function<std::optional<Payload>(Sampler&, std::size_t index)> generate;
  MeasureFn measure;
};

/// Evaluates samples 0..n-1 in order with sub-seeds derive_seed(seed, clause, i)
/// and stops at the first violation.
Verdict run_probe(const Probe& probe, std::size_t samples, std::uint64_t seed,
                  const Tolerances& tol);

/// Margin for an equality a == b.
inline double equality_margin(const Element& a, const Element& b) { return -max_abs_diff(a, b); }

inline double agreement_margin(bool a, bool b) { return a == b ? 0.0 : -1.0; }

}  // namespace ool
