#include "ool/verdict.hpp"

#include "ool/errors.hpp"
#include "ool/sampler.hpp"

#include <algorithm>

namespace ool {

namespace {

template <typename Map>
const typename Map::mapped_type& lookup(const Map& map, const std::string& key, const char* what) {
  const auto it = map.find(key);
  if (it == map.end()) {
    throw Error(ErrorKind::ValidationError, std::string("payload has no ") + what + " '" + key + "'");
  }
  return it->second;
}

}  // namespace

const Element& Payload::element(const std::string& key) const {
  return lookup(elements, key, "element");
}

const ComplexMatrix& Payload::scalar(const std::string& key) const {
  return lookup(scalars, key, "scalar matrix");
}

double Payload::param(const std::string& key) const { return lookup(params, key, "parameter"); }

const std::string& Payload::label(const std::string& key) const {
  return lookup(labels, key, "label");
}

Verdict run_probe(const Probe& probe, std::size_t samples, std::uint64_t seed,
                  const Tolerances& tol) {
  Verdict verdict;
  verdict.name = probe.clause;
  verdict.statement = probe.relation;
  verdict.seed = seed;
  verdict.threshold = probe.threshold;
  const std::uint64_t stream = stream_id(probe.clause);
  for (std::size_t i = 0; i < samples; ++i) {
    Sampler sampler(derive_seed(seed, stream, i));
    std::optional<Payload> payload = probe.generate(sampler, i);
    if (!payload) {
      ++verdict.skipped;
      continue;
    }
    ++verdict.samples;
    const double margin = probe.measure(*payload, tol);
    verdict.worst_margin = verdict.worst_margin ? std::min(*verdict.worst_margin, margin) : margin;
    if (margin < -probe.threshold) {
      verdict.passed = false;
      verdict.counterexample = Counterexample{probe.clause, probe.relation, margin, std::move(*payload)};
      break;
    }
  }
  return verdict;
}

}  // namespace ool
