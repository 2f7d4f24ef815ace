#include <doctest.h>

#include "ool/errors.hpp"
#include "ool/sampler.hpp"
#include "ool/space.hpp"
#include "oracles.hpp"

using namespace ool;

namespace {

const SpaceSpec kM2({2});
const SpaceSpec kM2M1({2, 1});

Element single(const ComplexMatrix& m) { return Element(SpaceSpec({m.rows()}), {1, 1}, {m}); }

ComplexMatrix mat2(double a, double b, double c, double d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
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

TEST_CASE("space and element validation") {
  CHECK(kind_of([] { SpaceSpec({}); }) == ErrorKind::ValidationError);
  CHECK(kind_of([] { SpaceSpec({2, 0}); }) == ErrorKind::ValidationError);
  CHECK(kM2M1.total_dim() == 3);
  CHECK(kind_of([] { Element(kM2, {1, 1}, {ComplexMatrix::Zero(3, 2)}); }) == ErrorKind::ShapeMismatch);
  CHECK(kind_of([] { Element(kM2M1, {1, 1}, {ComplexMatrix::Zero(2, 2)}); }) == ErrorKind::ShapeMismatch);
  ComplexMatrix nan = ComplexMatrix::Zero(2, 2);
  nan(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK(kind_of([&] { Element(kM2, {1, 1}, {nan}); }) == ErrorKind::ValidationError);
}

TEST_CASE("order_unit") {
  const Element e = order_unit(kM2, 1);
  CHECK(e.block(0) == ComplexMatrix::Identity(2, 2));
  const Element e2 = order_unit(kM2M1, 2);
  CHECK(e2.block(0) == ComplexMatrix::Identity(4, 4));
  CHECK(e2.block(1) == ComplexMatrix::Identity(2, 2));
  CHECK(order_unit_norm(e2) == doctest::Approx(1.0));
}

TEST_CASE("is_positive") {
  CHECK(is_positive(order_unit(kM2M1, 3)));
  CHECK_FALSE(is_positive(single(mat2(1, 0, 0, -1))));
  Sampler s(1);
  for (int i = 0; i < 20; ++i) {
    const Element x = s.element(kM2M1, {2, 2});
    CHECK(is_positive(multiply(x.adjoint(), x)));
  }
  CHECK(kind_of([] { is_positive(Element::zero(kM2, {1, 2})); }) == ErrorKind::NotSquareLevel);
}

TEST_CASE("abs_value examples") {
  CHECK(max_abs_diff(abs_value(single(mat2(0, 1, 0, 0))), single(mat2(0, 0, 0, 1))) < 1e-12);
  CHECK(max_abs_diff(abs_value(order_unit(kM2, 1)), order_unit(kM2, 1)) < 1e-12);
  CHECK(max_abs_diff(abs_value(single(mat2(1, 0, 0, -2))), single(mat2(1, 0, 0, 2))) < 1e-12);
}

TEST_CASE("abs_value is the PSD root of x* x at rectangular levels") {
  Sampler s(2);
  for (int i = 0; i < 100; ++i) {
    const Element x = s.element(kM2M1, {1 + i % 3, 1 + (i / 3) % 3});
    const Element a = abs_value(x);
    CHECK(a.level() == Level{x.level().cols, x.level().cols});
    for (std::size_t b = 0; b < x.blocks().size(); ++b) {
      CHECK(oracle::abs_defect(a.block(b), x.block(b)) < 1e-8);
    }
  }
}

TEST_CASE("scalar_act") {
  Sampler s(3);
  const Element x = s.element(kM2M1, {1, 1});
  const ScalarMatrix id{ComplexMatrix::Identity(1, 1)};
  CHECK(max_abs_diff(scalar_act(id, x, Side::Left), x) == 0.0);

  ComplexMatrix col(2, 1);
  col << 1, 0;
  const Element padded = scalar_act(ScalarMatrix{col}, x, Side::Left);
  CHECK(padded.level() == Level{2, 1});
  CHECK(max_abs_diff(padded.entry(0, 0), x) == 0.0);
  CHECK(padded.entry(1, 0).is_zero(0.0));

  const ComplexMatrix u = s.unitary(2);
  const Element y = s.element(kM2M1, {2, 2});
  const Element lhs = abs_value(scalar_act(ScalarMatrix{u.adjoint()}, scalar_act(ScalarMatrix{u}, y, Side::Right),
                                           Side::Left));
  const Element rhs =
      scalar_act(ScalarMatrix{u.adjoint()}, scalar_act(ScalarMatrix{u}, abs_value(y), Side::Right), Side::Left);
  CHECK(max_abs_diff(lhs, rhs) < 1e-8);

  CHECK(kind_of([&] { scalar_act(ScalarMatrix{ComplexMatrix::Identity(3, 3)}, x, Side::Left); }) ==
        ErrorKind::ShapeMismatch);
}

TEST_CASE("direct_sum") {
  Sampler s(4);
  const Element x = s.element(kM2M1, {1, 2});
  const Element zero = Element::zero(kM2M1, {1, 1});
  const Element xs = direct_sum(x, zero);
  CHECK(xs.level() == Level{2, 3});
  CHECK(max_abs_diff(xs.entry(0, 1), x.entry(0, 1)) == 0.0);
  CHECK(xs.entry(1, 2).is_zero(0.0));

  const Element e = order_unit(kM2M1, 1);
  CHECK(max_abs_diff(direct_sum(e, e), order_unit(kM2M1, 2)) == 0.0);

  for (int i = 0; i < 20; ++i) {
    const Element a = s.element(kM2M1, {1, 2});
    const Element b = s.element(kM2M1, {2, 1});
    CHECK(max_abs_diff(abs_value(direct_sum(a, b)), direct_sum(abs_value(a), abs_value(b))) < 1e-8);
  }
  CHECK(kind_of([&] { direct_sum(x, Element::zero(kM2, {1, 1})); }) == ErrorKind::SpaceMismatch);
}

TEST_CASE("amplify and entries") {
  Sampler s(5);
  const Element x = s.element(kM2M1, {1, 1});
  const Element x3 = amplify(x, 3);
  CHECK(x3.level() == Level{3, 3});
  CHECK(max_abs_diff(x3.entry(2, 2), x) == 0.0);
  CHECK(x3.entry(0, 1).is_zero(0.0));
  const Element y = s.element(kM2M1, {2, 3});
  std::vector<std::vector<Element>> grid;
  for (Index i = 0; i < 2; ++i) {
    grid.emplace_back();
    for (Index j = 0; j < 3; ++j) grid.back().push_back(y.entry(i, j));
  }
  CHECK(max_abs_diff(from_entries(kM2M1, grid), y) == 0.0);
}

TEST_CASE("order_unit_norm") {
  CHECK(order_unit_norm(order_unit(kM2M1, 2)) == doctest::Approx(1.0));
  CHECK(order_unit_norm(single(mat2(0, 2, 0, 0))) == doctest::Approx(2.0));
  Sampler s(6);
  for (int i = 0; i < 20; ++i) {
    const Element x = s.element(kM2M1, {1, 1});
    const Element y = s.element(kM2M1, {2, 1});
    const double expected = std::max(order_unit_norm(x), order_unit_norm(y));
    CHECK(order_unit_norm(direct_sum(x, y)) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("order_unit_norm agrees with the order-unit bisection") {
  Sampler s(7);
  for (int i = 0; i < 100; ++i) {
    const Element y = s.element(kM2M1, {1 + i % 3, 1 + (i / 3) % 3});
    double expected = 0.0;
    for (const auto& b : y.blocks()) expected = std::max(expected, oracle::bisection_norm(b));
    CHECK(std::abs(order_unit_norm(y) - expected) <= 1e-6);
  }
}

TEST_CASE("jordan_parts") {
  const auto d = jordan_parts(single(mat2(1, 0, 0, -2)));
  CHECK(max_abs_diff(d.pos, single(mat2(1, 0, 0, 0))) < 1e-12);
  CHECK(max_abs_diff(d.neg, single(mat2(0, 0, 0, 2))) < 1e-12);

  const auto f = jordan_parts(single(mat2(0, 1, 1, 0)));
  CHECK(max_abs_diff(f.pos, single(mat2(0.5, 0.5, 0.5, 0.5))) < 1e-12);
  CHECK(max_abs_diff(f.neg, single(mat2(0.5, -0.5, -0.5, 0.5))) < 1e-12);

  Sampler s(8);
  const Element p = s.positive_element(kM2M1, 2);
  const auto pp = jordan_parts(p);
  CHECK(max_abs_diff(pp.pos, p) < 1e-10);
  CHECK(pp.neg.is_zero(1e-10));

  for (int i = 0; i < 20; ++i) {
    const Element h = s.hermitian_element(kM2M1, 2);
    const auto parts = jordan_parts(h);
    CHECK(max_abs_diff(parts.pos - parts.neg, h) < 1e-8);
    CHECK(multiply(parts.pos, parts.neg).is_zero(1e-8));
    CHECK(max_abs_diff(parts.pos + parts.neg, abs_value(h)) < 1e-8);
  }
  CHECK(kind_of([] { jordan_parts(single(mat2(0, 1, 0, 0))); }) == ErrorKind::NotHermitian);
}

TEST_CASE("orthogonality, two characterisations") {
  const Element a = single(mat2(1, 0, 0, 0));
  const Element b = single(mat2(0, 0, 0, 1));
  CHECK(orthogonal(a, b));
  CHECK_FALSE(orthogonal(a, a));

  Sampler s(9);
  for (int i = 0; i < 50; ++i) {
    const Element p = s.projection_element(kM2M1, 1 + i % 2);
    const Element q = order_unit(kM2M1, p.level().rows) - p;
    CHECK(orthogonal(p, q));
    CHECK(orthogonal_by_product(p, q));
    const Element x = s.positive_element(kM2M1, 1);
    const Element y = s.coin() ? s.positive_element(kM2M1, 1) : Element::zero(kM2M1, {1, 1});
    CHECK(orthogonal(x, y) == orthogonal_by_product(x, y));
  }
  CHECK(kind_of([&] { orthogonal(single(mat2(1, 0, 0, -1)), a); }) == ErrorKind::NotPositive);
}
