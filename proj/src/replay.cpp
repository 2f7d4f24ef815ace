#include "ool/replay.hpp"

#include "ool/axioms.hpp"
#include "ool/capmaps.hpp"
#include "ool/errors.hpp"
#include "ool/ideals.hpp"
#include "ool/ktheory.hpp"
#include "ool/oup.hpp"

#include <map>

namespace ool {

namespace {

const std::map<std::string, MeasureFn>& registry() {
  static const std::map<std::string, MeasureFn> table = [] {
    std::map<std::string, MeasureFn> t;
    for (auto list : {axiom_measures(), oup_measures(), ideal_measures(), capmap_measures(), ktheory_measures()}) {
      for (auto& [name, fn] : list) t.emplace(name, std::move(fn));
    }
    return t;
  }();
  return table;
}

}  // namespace

std::vector<std::string> replayable_clauses() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry()) out.push_back(name);
  return out;
}

double replay(const Counterexample& c, const Tolerances& tol) {
  const auto it = registry().find(c.clause);
  if (it == registry().end()) throw Error(ErrorKind::ValidationError, "no measure registered for '" + c.clause + "'");
  return it->second(c.payload, tol);
}

}  // namespace ool
