#include <doctest.h>

#include "ool/axioms.hpp"
#include "ool/capmaps.hpp"
#include "ool/errors.hpp"
#include "ool/ideals.hpp"
#include "ool/json_io.hpp"
#include "ool/ktheory.hpp"
#include "ool/oup.hpp"
#include "ool/replay.hpp"
#include "ool/sampler.hpp"

#include <algorithm>
#include <cmath>

using namespace ool;

namespace {

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::ValidationError;
}

std::vector<Verdict> failing_verdicts() {
  std::vector<Verdict> out;
  const SpaceSpec space({2, 1});
  for (const std::string model : {"shifted", "level_scaled", "squared"}) {
    AxiomConfig c;
    c.samples = 100;
    c.model = model;
    for (auto& v : check_axioms(space, c)) {
      if (!v.passed) out.push_back(std::move(v));
    }
  }
  ComplexMatrix x = ComplexMatrix::Zero(2, 2);
  x(0, 0) = 1.0;
  x(1, 1) = 0.5;
  const Element half(SpaceSpec({2}), {1, 1}, {x});
  out.push_back(refute_property(half, 1, OupMode::AbsoluteOrderUnit, 10, 0));
  out.push_back(refute_property(half, 2, OupMode::OrderUnit, 10, 0));
  out.push_back(check_block_characterization(half, 20, 0));
  out.push_back(check_cap(as_map(corner_compression()), {1, 2}, 20, 0));
  out.push_back(check_order_ideal_control(SpaceSpec({2}), 20, 0));
  for (auto& v : check_ideal_theorem(IdealHandle(half), 50, 0)) {
    if (!v.passed) out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

TEST_CASE("matrix wire format") {
  ComplexMatrix m(2, 1);
  m << Complex(1, -2), Complex(0.25, 3e-17);
  const Json j = to_json(m);
  CHECK(j.dump() == "[[[1.0,-2.0]],[[0.25,3e-17]]]");
  CHECK(matrix_from_json(j) == m);

  CHECK(kind_of([] { matrix_from_json(parse_json("[[1, 2]]")); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { matrix_from_json(parse_json("[[[1, 2]], [[1, 2], [3, 4]]]")); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { matrix_from_json(parse_json("[]")); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_json("{not json"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { read_json_file("/nonexistent/file.json"); }) == ErrorKind::ParseError);
}

TEST_CASE("space, element, hom and class round trips") {
  const SpaceSpec space({2, 1, 3});
  CHECK(space_from_json(to_json(space)) == space);
  CHECK(kind_of([] { space_from_json(parse_json(R"({"summands": []})")); }) == ErrorKind::ValidationError);
  CHECK(kind_of([] { space_from_json(parse_json(R"({"dims": [2]})")); }) == ErrorKind::ParseError);

  Sampler s(1);
  const Element x = s.element(space, {2, 3});
  const Element back = element_from_json(parse_json(to_json(x).dump()));
  CHECK(back.space() == space);
  CHECK(back.level() == x.level());
  CHECK(max_abs_diff(back, x) == 0.0);
  CHECK(kind_of([] { element_from_json(parse_json(R"({"level": [2, 1], "blocks": [[[[1, 0]]]]})")); }) ==
        ErrorKind::ParseError);

  const StarHom h(SpaceSpec({2, 1}), SpaceSpec({2, 3}), {{1, 0}, {1, 1}});
  const StarHom hb = hom_from_json(to_json(h));
  CHECK(hb.mult() == h.mult());
  CHECK(hb.target() == h.target());
  CHECK(kind_of([] { hom_from_json(parse_json(R"({"source": [1], "target": [1], "mult": [[2]]})")); }) ==
        ErrorKind::ValidationError);

  const K0Class c{{1, -3}};
  CHECK(k0_from_json(to_json(c)) == c);
}

TEST_CASE("verdict round trip keeps non-finite margins") {
  Verdict v;
  v.name = "x";
  v.seed = 123456789012345ULL;
  v.samples = 4;
  v.worst_margin = -std::numeric_limits<double>::infinity();
  const Verdict back = verdict_from_json(parse_json(to_json(v).dump()));
  CHECK(back.seed == v.seed);
  REQUIRE(back.worst_margin);
  CHECK(std::isinf(*back.worst_margin));
}

TEST_CASE("every failing counterexample replays after serialisation") {
  const auto verdicts = failing_verdicts();
  CHECK(verdicts.size() >= 10);
  for (const auto& v : verdicts) {
    CAPTURE(v.name);
    CHECK_FALSE(v.passed);
    REQUIRE(v.counterexample);
    const Counterexample c = counterexample_from_json(parse_json(to_json(*v.counterexample).dump()));
    const double replayed = replay(c, {});
    CHECK(std::abs(replayed - v.counterexample->margin) <= 1e-9);
    CHECK(replayed < -v.threshold);
  }
}

TEST_CASE("replay registry") {
  const auto names = replayable_clauses();
  for (const char* clause : {"axiom.jordan", "oup.characterization", "ideal.bisection_agreement",
                             "cap.abs_preserving", "quotient.norm", "k0.t_witness"}) {
    CHECK(std::find(names.begin(), names.end(), clause) != names.end());
  }
  Counterexample unknown;
  unknown.clause = "no.such.clause";
  CHECK(kind_of([&] { replay(unknown, {}); }) == ErrorKind::ValidationError);
}
