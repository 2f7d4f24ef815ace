#include <doctest.h>

#include "ool/errors.hpp"
#include "ool/ktheory.hpp"
#include "ool/oup.hpp"
#include "ool/replay.hpp"
#include "ool/sampler.hpp"
#include "oracles.hpp"

using namespace ool;

namespace {

const SpaceSpec kM2({2});
const SpaceSpec kM2M3({2, 3});

ComplexMatrix m2(double a, double b, double c, double d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Element in_m2(const ComplexMatrix& m) { return Element(kM2, {1, 1}, {m}); }

Element corner_p() {
  return Element(kM2M3, {1, 1}, {m2(1, 0, 0, 0), ComplexMatrix::Zero(3, 3)});
}

DimVector ranks_by_trace(const Element& p) {
  DimVector out;
  for (const auto& b : p.blocks()) out.push_back(oracle::projection_rank(b));
  return out;
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

TEST_CASE("dimension vectors") {
  CHECK(dimension_vector(OrderProjection(order_unit(kM2M3, 1))) == DimVector{2, 3});
  CHECK(dimension_vector(OrderProjection(in_m2(m2(1, 0, 0, 0)))) == DimVector{1});
  CHECK(dimension_vector(OrderProjection(Element::zero(kM2M3, {1, 1}))) == DimVector{0, 0});
  Sampler s(1);
  for (int i = 0; i < 50; ++i) {
    const Element p = s.projection_element(kM2M3, 1 + i % 3);
    CHECK(dimension_vector(OrderProjection(p)) == ranks_by_trace(p));
  }
  CHECK(kind_of([] { OrderProjection(in_m2(m2(1, 0, 0, 0.5))); }) == ErrorKind::NotProjection);
}

TEST_CASE("equivalence witnesses") {
  const OrderProjection p(in_m2(m2(1, 0, 0, 0)));
  const OrderProjection q(in_m2(m2(0, 0, 0, 1)));
  const Equivalence pq = equivalent(p, q);
  REQUIRE(pq.equivalent);
  REQUIRE(pq.witness);
  CHECK(oracle::max_diff(pq.witness->element().block(0), m2(0, 1, 0, 0)) < 1e-12);

  const Equivalence pp = equivalent(p, p);
  REQUIRE(pp.witness);
  CHECK(oracle::max_diff(pp.witness->element().block(0), m2(1, 0, 0, 0)) < 1e-12);

  const Equivalence no = equivalent(p, OrderProjection(order_unit(kM2, 1)));
  CHECK_FALSE(no.equivalent);
  CHECK_FALSE(no.witness);
}

TEST_CASE("random equivalences carry valid witnesses across levels") {
  Sampler s(2);
  for (int i = 0; i < 50; ++i) {
    const Element a = s.projection_element(kM2M3, 1 + i % 2);
    const Element b = s.projection_element(kM2M3, 1 + (i / 2) % 2);
    const Equivalence r = equivalent(OrderProjection(a), OrderProjection(b));
    CHECK(r.equivalent == (ranks_by_trace(a) == ranks_by_trace(b)));
    if (!r.witness) continue;
    const Element& v = r.witness->element();
    for (std::size_t k = 0; k < v.blocks().size(); ++k) {
      CHECK(oracle::is_partial_isometry(v.block(k)));
      CHECK(oracle::max_diff(v.block(k) * v.block(k).adjoint(), a.block(k)) < 1e-8);
      CHECK(oracle::max_diff(v.block(k).adjoint() * v.block(k), b.block(k)) < 1e-8);
    }
  }
}

TEST_CASE("partial isometries") {
  CHECK(is_partial_isometry(in_m2(m2(0, 1, 0, 0))));
  CHECK_FALSE(is_partial_isometry(in_m2(m2(0, 2, 0, 0))));
  CHECK(kind_of([] { PartialIsometry(in_m2(m2(0.5, 0, 0, 0))); }) == ErrorKind::ValidationError);
  Sampler s(3);
  for (int i = 0; i < 30; ++i) {
    const Element v = s.partial_isometry_element(kM2M3, {1 + i % 2, 1 + (i / 2) % 3});
    bool expected = true;
    for (const auto& b : v.blocks()) expected = expected && oracle::is_partial_isometry(b);
    CHECK(is_partial_isometry(v) == expected);
  }
}

TEST_CASE("t witness examples") {
  const PartialIsometry y(in_m2(m2(0, 1, 0, 0)));
  const PartialIsometry z(in_m2(m2(0, 0, 0, 1)));
  const PartialIsometry w = t_witness(y, z);
  CHECK(oracle::max_diff(w.element().block(0), m2(0, 1, 0, 0)) < 1e-12);

  const PartialIsometry self = t_witness(y, y);
  CHECK(oracle::max_diff(self.element().block(0), m2(1, 0, 0, 0)) < 1e-12);

  const PartialIsometry other(in_m2(m2(1, 0, 0, 0)));
  CHECK(kind_of([&] { t_witness(y, other); }) == ErrorKind::PreconditionFailed);
}

TEST_CASE("stable equivalence and classes") {
  const OrderProjection p(in_m2(m2(1, 0, 0, 0)));
  const OrderProjection q(in_m2(m2(0, 0, 0, 1)));
  const OrderProjection e(order_unit(kM2, 1));
  CHECK(stably_equivalent(p, q));
  CHECK_FALSE(stably_equivalent(p, e));
  const Element z = Element::zero(kM2, {1, 1});
  CHECK(stably_equivalent(OrderProjection(direct_sum(p.element(), z)), OrderProjection(direct_sum(z, p.element()))));
  CHECK(stably_equivalent(p, OrderProjection(direct_sum(q.element(), Element::zero(kM2, {2, 2})))));

  const OrderProjection E(order_unit(kM2M3, 1));
  CHECK(k0_class(E, E).is_zero());
  CHECK(k0_class(E, OrderProjection(corner_p())).diff == std::vector<long long>{1, 3});

  Sampler s(4);
  for (int i = 0; i < 30; ++i) {
    const Element a = s.projection_element(kM2M3, 1);
    const Element b = s.projection_element(kM2M3, 2);
    const Element c = s.projection_element(kM2M3, 1);
    const Element d = s.projection_element(kM2M3, 3);
    const K0Class sum = k0_class(OrderProjection(direct_sum(a, c)), OrderProjection(direct_sum(b, d)));
    CHECK(sum == k0_class(OrderProjection(a), OrderProjection(b)) + k0_class(OrderProjection(c), OrderProjection(d)));
    CHECK(k0_class(OrderProjection(a), OrderProjection(c)).is_zero() ==
          stably_equivalent(OrderProjection(a), OrderProjection(c)));
  }
}

TEST_CASE("class arithmetic") {
  const K0Class a{{1, -2}};
  const K0Class b{{3, 5}};
  CHECK((a + b).diff == std::vector<long long>{4, 3});
  CHECK((a - a).is_zero());
  CHECK((-b).diff == std::vector<long long>{-3, -5});
  CHECK(K0Class::zero(3).diff == std::vector<long long>{0, 0, 0});
}

TEST_CASE("k0 groups") {
  const K0Group g2 = k0_group(kM2);
  CHECK(g2.rank == 1);
  CHECK(g2.generators[0].diff == std::vector<long long>{1});
  const K0Group g23 = k0_group(kM2M3);
  CHECK(g23.rank == 2);
  CHECK(g23.generators[0].diff == std::vector<long long>{1, 0});
  CHECK(g23.generators[1].diff == std::vector<long long>{0, 1});
  CHECK(k0_group(SpaceSpec({1})).rank == 1);
}

TEST_CASE("corner inclusion") {
  const CornerInclusion c(corner_p());
  CHECK(c.corner() == SpaceSpec({1}));
  CHECK(c.retained() == std::vector<std::size_t>{0});
  CHECK(c.map(K0Class{{1}}).diff == std::vector<long long>{1, 0});
  CHECK(c.map(K0Class::zero(1)).is_zero());
  CHECK(c.injective());

  const CornerInclusion m(in_m2(m2(1, 0, 0, 0)));
  CHECK(m.map(K0Class{{1}}).diff == std::vector<long long>{1});

  Sampler s(5);
  const Element p(kM2M3, {1, 1}, {s.projection(2, 1), s.projection(3, 2)});
  const CornerInclusion cp(p);
  for (int i = 0; i < 20; ++i) {
    const Element y = s.element(cp.corner(), {1 + i % 2, 2});
    const Element up = cp.from_corner(y);
    CHECK(max_abs_diff(multiply(multiply(amplify(p, up.level().rows), up), amplify(p, up.level().cols)), up) < 1e-10);
    CHECK(max_abs_diff(cp.to_corner(up), y) < 1e-10);
  }

  CHECK(kind_of([] { CornerInclusion(Element::zero(kM2M3, {1, 1})); }) == ErrorKind::ZeroProjection);
  CHECK(kind_of([] { CornerInclusion(in_m2(m2(1, 0, 0, 0.5))); }) == ErrorKind::NotProjection);
}

TEST_CASE("corner suites") {
  Sampler s(6);
  for (int i = 0; i < 4; ++i) {
    const Element p = i == 0 ? corner_p() : s.projection_element(kM2M3, 1);
    if (p.is_zero(1e-12)) continue;
    CHECK(check_corner_diagram(p, 100, 1).passed);
    CHECK(check_equivalence_transfer(p, 100, 1).passed);
    const IdealHandle h(p);
    CHECK(check_op_in_ideal(h, 100, 1).passed);
    CHECK(check_pi_in_ideal(h, 100, 1).passed);
  }
  CHECK(kind_of([] { check_op_in_ideal(IdealHandle(in_m2(m2(1, 0, 0, 0.5))), 5, 0); }) ==
        ErrorKind::PreconditionFailed);
}

TEST_CASE("op in ideal examples") {
  const Element p = in_m2(m2(1, 0, 0, 0));
  const Element q = in_m2(m2(0, 0, 0, 1));
  const IdealHandle h(p);
  CHECK(membership(h, p).member);
  CHECK(is_positive(p - p));
  CHECK_FALSE(membership(h, q).member);
  CHECK_FALSE(is_positive(p - q));
}

TEST_CASE("relation and additivity suites") {
  for (const auto& space : {kM2, kM2M3, SpaceSpec({1, 2})}) {
    CHECK(check_t_witness(space, 200, 3).passed);
    CHECK(check_equivalence_relation(space, 100, 3).passed);
    CHECK(check_k0_additivity(space, 100, 3).passed);
  }
}
