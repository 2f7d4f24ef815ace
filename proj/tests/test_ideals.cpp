#include <doctest.h>

#include "ool/errors.hpp"
#include "ool/ideals.hpp"
#include "ool/replay.hpp"
#include "ool/sampler.hpp"
#include "oracles.hpp"

using namespace ool;

namespace {

const SpaceSpec kM2({2});
const SpaceSpec kM2M1({2, 1});

Element m2(double a, double b, double c, double d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return Element(kM2, {1, 1}, {m});
}

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::ValidationError;
}

}  // namespace

TEST_CASE("membership examples in the corner of diag(1, 0)") {
  const IdealHandle h(m2(1, 0, 0, 0));
  CHECK(h.is_projection());

  const auto in = membership(h, m2(0.5, 0, 0, 0));
  CHECK(in.member);
  CHECK(*in.min_epsilon == doctest::Approx(0.5));
  CHECK(ideal_norm(h, m2(0.5, 0, 0, 0)) == doctest::Approx(0.5));

  CHECK_FALSE(membership(h, m2(0, 1, 0, 0)).member);
  CHECK(kind_of([&] { ideal_norm(h, m2(0, 1, 0, 0)); }) == ErrorKind::NotMember);

  CHECK(ideal_norm(h, m2(0, 0, 0, 0)) == 0.0);
  CHECK(ideal_norm(h, h.x()) == doctest::Approx(1.0));

  CHECK(max_abs_diff(corner_oracle(h.x(), m2(1, 2, 3, 4)), m2(1, 0, 0, 0)) < 1e-12);
}

TEST_CASE("the order unit generates everything") {
  const IdealHandle h(order_unit(kM2M1, 1));
  Sampler s(1);
  for (int i = 0; i < 30; ++i) {
    const Element y = s.element(kM2M1, {1 + i % 2, 1 + (i / 2) % 3});
    const auto r = membership(h, y);
    CHECK(r.member);
    CHECK(*r.min_epsilon == doctest::Approx(order_unit_norm(y)).epsilon(1e-10));
    CHECK(max_abs_diff(corner_oracle(h.x(), y), y) < 1e-12);
  }
}

TEST_CASE("handle preconditions") {
  CHECK(kind_of([] { IdealHandle(m2(0.5, 0, 0, 0)); }) == ErrorKind::NotUnitNorm);
  CHECK(kind_of([] { IdealHandle(m2(1, 0, 0, -1)); }) == ErrorKind::NotPositive);
  CHECK(kind_of([] { IdealHandle(Element::zero(kM2, {1, 2})); }) == ErrorKind::NotSquareLevel);
  CHECK(kind_of([] { corner_oracle(m2(1, 0, 0, 0.5), m2(1, 0, 0, 0)); }) == ErrorKind::NotProjection);
  const IdealHandle h(m2(1, 0, 0, 0));
  CHECK(kind_of([&] { membership(h, order_unit(kM2M1, 1)); }) == ErrorKind::SpaceMismatch);
}

TEST_CASE("member certificates are PSD at min epsilon") {
  Sampler s(2);
  for (int i = 0; i < 50; ++i) {
    const IdealHandle h(sample_ideal_generator(kM2M1, s, i % 2 == 0));
    const Level level{1 + i % 2, 1 + (i / 2) % 2};
    const Element y = sample_member(h, s, level);
    const auto r = membership(h, y);
    REQUIRE(r.member);
    const double eps = *r.min_epsilon;
    const Element xl = amplify(h.x(), level.rows);
    const Element xm = amplify(h.x(), level.cols);
    for (std::size_t b = 0; b < y.blocks().size(); ++b) {
      const auto cert = oracle::block_certificate(eps * xl.block(b), y.block(b), eps * xm.block(b));
      CHECK(oracle::smallest_eigenvalue(cert) >= -1e-9);
    }
  }
}

TEST_CASE("feasibility is monotone in epsilon") {
  Sampler s(3);
  for (int i = 0; i < 30; ++i) {
    const IdealHandle h(sample_ideal_generator(kM2M1, s, false));
    const Element y = sample_member(h, s, {1, 2});
    const double eps = *membership(h, y).min_epsilon;
    for (double f : {1.0001, 1.5, 3.0, 10.0}) CHECK(certificate_margin(h, y, f * eps) >= -1e-9);
    CHECK(certificate_margin(h, y, 0.9 * eps) < 0.0);
  }
}

TEST_CASE("projection ideals match the corner") {
  Sampler s(4);
  for (int i = 0; i < 50; ++i) {
    const IdealHandle h(sample_ideal_generator(kM2M1, s, true));
    const Element y = i % 2 == 0 ? sample_member(h, s, {2, 1}) : s.element(kM2M1, {2, 1});
    const bool fixed = max_abs_diff(corner_oracle(h.x(), y), y) <= 1e-8;
    CHECK(membership(h, y).member == fixed);
    if (fixed) CHECK(ideal_norm(h, y) == doctest::Approx(order_unit_norm(y)).epsilon(1e-8));
  }
}

TEST_CASE("near-zero summands of x do not leak into the ideal") {
  // the second summand is zero up to rounding and must count as zero
  std::vector<ComplexMatrix> blocks{ComplexMatrix::Identity(2, 2), ComplexMatrix::Constant(1, 1, 1e-17)};
  const IdealHandle h(Element(kM2M1, {1, 1}, blocks));
  CHECK(h.is_projection());
  Sampler s(5);
  const Element g = s.element(kM2M1, {2, 1});
  const Element y = sample_member(h, s, {2, 1});
  CHECK(y.block(1).cwiseAbs().maxCoeff() == 0.0);
  CHECK(membership(h, y).member);
  CHECK_FALSE(membership(h, g).member);
}

TEST_CASE("order ideal and the scalar control") {
  for (const auto& x : {m2(1, 0, 0, 0), order_unit(kM2, 1)}) {
    CHECK(check_order_ideal(IdealHandle(x), 200, 7).passed);
  }
  const Verdict control = check_order_ideal_control(kM2, 50, 7);
  CHECK_FALSE(control.passed);
  CHECK_FALSE(control.guaranteed);
  REQUIRE(control.counterexample);
  CHECK(std::abs(replay(*control.counterexample, {}) - control.counterexample->margin) <= 1e-9);
}

TEST_CASE("ideal theorem on projections") {
  std::vector<Element> gens{m2(1, 0, 0, 0)};
  gens.emplace_back(kM2M1, Level{1, 1},
                    std::vector<ComplexMatrix>{m2(1, 0, 0, 0).block(0), ComplexMatrix::Identity(1, 1)});
  for (const auto& x : gens) {
    const auto verdicts = check_ideal_theorem(IdealHandle(x), 100, 3);
    CHECK(verdicts.size() == 5);
    for (const auto& v : verdicts) {
      CAPTURE(v.name);
      CHECK(v.passed);
      CHECK(v.guaranteed);
    }
  }
}

TEST_CASE("norm agreement is informational for non-projections") {
  const auto verdicts = check_ideal_theorem(IdealHandle(m2(1, 0, 0, 0.5)), 50, 3);
  for (const auto& v : verdicts) {
    if (v.name == "ideal.norm_agreement") {
      CHECK_FALSE(v.guaranteed);
      CHECK_FALSE(v.passed);
    } else {
      CHECK(v.passed);
    }
  }
}

TEST_CASE("closed form against bisection") {
  for (const auto& space : {kM2, kM2M1, SpaceSpec({1, 3})}) {
    CHECK(check_membership_bisection(space, 200, 21).passed);
    CHECK(check_membership_corner(space, 200, 21).passed);
  }
}
