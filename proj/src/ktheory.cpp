#include "ool/ktheory.hpp"

#include "ool/errors.hpp"
#include "ool/oup.hpp"
#include "ool/sampler.hpp"

#include <algorithm>
#include <cmath>

namespace ool {

namespace {

constexpr double kWitnessAgreement = 1e-8;

ComplexMatrix phase_normalized_columns(ComplexMatrix m) {
  for (Index c = 0; c < m.cols(); ++c) {
    Index arg = 0;
    m.col(c).cwiseAbs().maxCoeff(&arg);
    const Complex pivot = m(arg, c);
    if (std::abs(pivot) > 0) m.col(c) *= std::abs(pivot) / pivot;
  }
  return m;
}

Element projection_with_ranks(const SpaceSpec& space, Index l, const DimVector& ranks, Sampler& s) {
  std::vector<ComplexMatrix> blocks;
  for (std::size_t i = 0; i < space.size(); ++i) blocks.push_back(s.projection(l * space.dim(i), ranks[i]));
  return Element(space, {l, l}, std::move(blocks)).symmetrized();
}

DimVector random_ranks(const SpaceSpec& space, Sampler& s) {
  DimVector r;
  for (Index n : space.summands()) r.push_back(s.uniform_index(0, n));
  return r;
}

Element padded(const Element& p, Index before, Index after) {
  Element out = p;
  if (before > 0) out = direct_sum(Element::zero(p.space(), {before, before}), out);
  if (after > 0) out = direct_sum(out, Element::zero(p.space(), {after, after}));
  return out;
}

// ---- measures -------------------------------------------------------------

double corner_diagram_measure(const Payload& p, const Tolerances& tol) {
  const CornerInclusion ci(p.element("p"), tol);
  const OrderProjection q1(p.element("q1"), tol);
  const OrderProjection q2(p.element("q2"), tol);
  const OrderProjection in1(ci.from_corner(q1.element()), tol);
  const OrderProjection in2(ci.from_corner(q2.element()), tol);
  const bool commutes = k0_class(in1, in2, tol) == ci.map(k0_class(q1, q2, tol));
  const bool ambient_eq = stably_equivalent(in1, in2, tol);
  const bool corner_eq = stably_equivalent(q1, q2, tol);
  return std::min(agreement_margin(commutes, true), agreement_margin(ambient_eq, corner_eq));
}

double op_in_ideal_measure(const Payload& p, const Tolerances& tol) {
  const IdealHandle h(p.element("x"), tol);
  const Element& q = p.element("q");
  const bool member = membership(h, q, tol).member;
  const bool below = is_positive(amplify(h.x(), q.level().rows) - q, tol);
  const bool fixed = approx_equal(corner_oracle(h.x(), q, tol), q, tol.eq_tol);
  return std::min(agreement_margin(member, below), agreement_margin(member, fixed));
}

double pi_in_ideal_measure(const Payload& p, const Tolerances& tol) {
  const IdealHandle h(p.element("x"), tol);
  const CornerInclusion ci(h.x(), tol);
  const Element& v = p.element("v");
  const bool ambient = membership(h, v, tol).member && is_partial_isometry(v, tol);
  const Element c = ci.to_corner(v);
  const bool corner = approx_equal(ci.from_corner(c), v, tol.eq_tol) && is_partial_isometry(c, tol);
  return agreement_margin(ambient, corner);
}

double transfer_measure(const Payload& p, const Tolerances& tol) {
  const Element& proj = p.element("p");
  const CornerInclusion ci(proj, tol);
  const OrderProjection q1(p.element("q1"), tol);
  const OrderProjection q2(p.element("q2"), tol);
  const Equivalence in_x = equivalent(q1, q2, tol);
  const OrderProjection c1(ci.to_corner(q1.element()), tol);
  const OrderProjection c2(ci.to_corner(q2.element()), tol);
  double margin = agreement_margin(in_x.equivalent, equivalent(c1, c2, tol).equivalent);
  if (in_x.witness) {
    const Element& v = in_x.witness->element();
    margin = std::min(margin, agreement_margin(approx_equal(corner_oracle(proj, v, tol), v, tol.eq_tol), true));
  }
  return margin;
}

double t_witness_measure(const Payload& p, const Tolerances& tol) {
  const PartialIsometry y(p.element("y"), tol);
  const PartialIsometry z(p.element("z"), tol);
  const Element w = t_witness(y, z, tol).element();
  return std::min(equality_margin(abs_value(w.adjoint(), tol), abs_value(y.element().adjoint(), tol)),
                  equality_margin(abs_value(w, tol), abs_value(z.element().adjoint(), tol)));
}

double relation_measure(const Payload& pl, const Tolerances& tol) {
  const OrderProjection p(pl.element("p"), tol);
  const OrderProjection q(pl.element("q"), tol);
  const OrderProjection r(pl.element("r"), tol);
  double margin = agreement_margin(equivalent(p, p, tol).equivalent, true);
  const Equivalence pq = equivalent(p, q, tol);
  const Equivalence qp = equivalent(q, p, tol);
  margin = std::min(margin, agreement_margin(pq.equivalent, qp.equivalent));
  if (pq.witness) {
    // v* witnesses q ~ p
    const Element vs = pq.witness->element().adjoint();
    margin = std::min(margin, std::min(equality_margin(abs_value(vs, tol), p.element()),
                                       equality_margin(abs_value(vs.adjoint(), tol), q.element())));
  }
  const Equivalence qr = equivalent(q, r, tol);
  if (pq.witness && qr.witness) {
    const PartialIsometry w =
        t_witness(*pq.witness, PartialIsometry(qr.witness->element().adjoint(), tol), tol);
    margin = std::min(margin, agreement_margin(equivalent(p, r, tol).equivalent, true));
    margin = std::min(margin, std::min(equality_margin(abs_value(w.element().adjoint(), tol), p.element()),
                                       equality_margin(abs_value(w.element(), tol), r.element())));
  }
  return margin;
}

double additivity_measure(const Payload& pl, const Tolerances& tol) {
  const OrderProjection p(pl.element("p"), tol);
  const OrderProjection q(pl.element("q"), tol);
  const OrderProjection p2(pl.element("p2"), tol);
  const OrderProjection q2(pl.element("q2"), tol);
  const OrderProjection sp(direct_sum(p.element(), p2.element()), tol);
  const OrderProjection sq(direct_sum(q.element(), q2.element()), tol);
  const K0Class pq = k0_class(p, q, tol);
  double margin = agreement_margin(k0_class(sp, sq, tol) == pq + k0_class(p2, q2, tol), true);
  margin = std::min(margin, agreement_margin(k0_class(p, p, tol).is_zero(), true));
  margin = std::min(margin, agreement_margin(pq.is_zero(), stably_equivalent(p, q, tol)));
  return margin;
}

}  // namespace

OrderProjection::OrderProjection(Element p, const Tolerances& tol) : p_(std::move(p)) {
  if (!is_order_projection(p_, tol)) {
    throw Error(ErrorKind::NotProjection, "|2p - e| != e (defect " + std::to_string(projection_defect(p_, tol)) + ")");
  }
}

bool is_partial_isometry(const Element& v, const Tolerances& tol) {
  return is_order_projection(abs_value(v, tol), tol) && is_order_projection(abs_value(v.adjoint(), tol), tol);
}

PartialIsometry::PartialIsometry(Element v, const Tolerances& tol) : v_(std::move(v)) {
  if (!is_partial_isometry(v_, tol)) {
    throw Error(ErrorKind::ValidationError, "|v| or |v*| is not an order projection");
  }
}

bool K0Class::is_zero() const {
  return std::all_of(diff.begin(), diff.end(), [](long long v) { return v == 0; });
}

K0Class K0Class::operator-() const {
  K0Class out = *this;
  for (auto& v : out.diff) v = -v;
  return out;
}

K0Class operator+(const K0Class& a, const K0Class& b) {
  if (a.diff.size() != b.diff.size()) throw Error(ErrorKind::SpaceMismatch, "K0 classes of different rank");
  K0Class out = a;
  for (std::size_t i = 0; i < out.diff.size(); ++i) out.diff[i] += b.diff[i];
  return out;
}

DimVector dimension_vector(const OrderProjection& p, const Tolerances& tol) {
  DimVector out;
  for (const auto& b : p.element().blocks()) {
    const RealVector values = herm_eig(b, tol).values;
    out.push_back(static_cast<Index>((values.array() > 0.5).count()));
  }
  return out;
}

std::vector<ComplexMatrix> range_bases(const OrderProjection& p, const Tolerances& tol) {
  std::vector<ComplexMatrix> out;
  for (const auto& b : p.element().blocks()) {
    const HermitianEigen eig = herm_eig(b, tol);
    const Index r = static_cast<Index>((eig.values.array() > 0.5).count());
    out.push_back(phase_normalized_columns(eig.vectors.leftCols(r)));
  }
  return out;
}

Equivalence equivalent(const OrderProjection& p, const OrderProjection& q, const Tolerances& tol) {
  require_same_space(p.element(), q.element());
  if (dimension_vector(p, tol) != dimension_vector(q, tol)) return {};
  const auto u = range_bases(p, tol);
  const auto w = range_bases(q, tol);
  std::vector<ComplexMatrix> blocks;
  for (std::size_t i = 0; i < u.size(); ++i) blocks.push_back(u[i] * w[i].adjoint());
  const Level level{p.element().level().rows, q.element().level().rows};
  PartialIsometry v(Element(p.element().space(), level, std::move(blocks)), tol);
  if (!approx_equal(abs_value(v.element(), tol), q.element(), tol.eq_tol) ||
      !approx_equal(abs_value(v.element().adjoint(), tol), p.element(), tol.eq_tol)) {
    throw Error(ErrorKind::ValidationError, "equivalence witness failed validation");
  }
  return {true, std::move(v)};
}

PartialIsometry t_witness(const PartialIsometry& y, const PartialIsometry& z, const Tolerances& tol) {
  const Element& ye = y.element();
  const Element& ze = z.element();
  require_same_space(ye, ze);
  if (ye.level().cols != ze.level().cols ||
      !approx_equal(abs_value(ye, tol), abs_value(ze, tol), tol.eq_tol)) {
    throw Error(ErrorKind::PreconditionFailed, "t_witness needs |y| = |z|");
  }
  const Element w = multiply(ye, ze.adjoint());
  if (!approx_equal(abs_value(w.adjoint(), tol), abs_value(ye.adjoint(), tol), kWitnessAgreement) ||
      !approx_equal(abs_value(w, tol), abs_value(ze.adjoint(), tol), kWitnessAgreement)) {
    throw Error(ErrorKind::ValidationError, "t witness failed validation");
  }
  return PartialIsometry(w, tol);
}

bool stably_equivalent(const OrderProjection& p, const OrderProjection& q, const Tolerances& tol) {
  const Index l = p.element().level().rows;
  const Index m = q.element().level().rows;
  const OrderProjection pp(padded(p.element(), 0, m), tol);
  const OrderProjection qq(padded(q.element(), l, 0), tol);
  return equivalent(pp, qq, tol).equivalent;
}

K0Class k0_class(const OrderProjection& p, const OrderProjection& q, const Tolerances& tol) {
  require_same_space(p.element(), q.element());
  const DimVector a = dimension_vector(p, tol);
  const DimVector b = dimension_vector(q, tol);
  K0Class out;
  for (std::size_t i = 0; i < a.size(); ++i) out.diff.push_back(static_cast<long long>(a[i] - b[i]));
  return out;
}

K0Group k0_group(const SpaceSpec& space) {
  K0Group g;
  g.rank = space.size();
  for (std::size_t i = 0; i < space.size(); ++i) {
    K0Class c = K0Class::zero(space.size());
    c.diff[i] = 1;
    g.generators.push_back(std::move(c));
  }
  return g;
}

namespace {

SpaceSpec corner_space(const DimVector& ranks) {
  std::vector<Index> dims;
  for (Index r : ranks) {
    if (r > 0) dims.push_back(r);
  }
  if (dims.empty()) throw Error(ErrorKind::ZeroProjection, "the corner of the zero projection is trivial");
  return SpaceSpec(std::move(dims));
}

}  // namespace

CornerInclusion::CornerInclusion(const Element& p, const Tolerances& tol)
    : ambient_(p.space()),
      corner_(corner_space(dimension_vector(OrderProjection(p, tol), tol))) {
  if (p.level() != Level{1, 1}) throw Error(ErrorKind::NotProjection, "corner needs a level-1 projection");
  const OrderProjection proj(p, tol);
  const auto bases = range_bases(proj, tol);
  for (std::size_t i = 0; i < bases.size(); ++i) {
    if (bases[i].cols() > 0) {
      retained_.push_back(i);
      bases_.push_back(bases[i]);
    }
  }
}

Element CornerInclusion::to_corner(const Element& y) const {
  if (y.space() != ambient_) throw Error(ErrorKind::SpaceMismatch, "element is not over the ambient space");
  std::vector<ComplexMatrix> blocks;
  for (std::size_t k = 0; k < retained_.size(); ++k) {
    blocks.push_back(repeat_diagonal(bases_[k], y.level().rows).adjoint() * y.block(retained_[k]) *
                     repeat_diagonal(bases_[k], y.level().cols));
  }
  return Element(corner_, y.level(), std::move(blocks));
}

Element CornerInclusion::from_corner(const Element& c) const {
  if (c.space() != corner_) throw Error(ErrorKind::SpaceMismatch, "element is not over the corner space");
  Element out = Element::zero(ambient_, c.level());
  std::vector<ComplexMatrix> blocks = out.blocks();
  for (std::size_t k = 0; k < retained_.size(); ++k) {
    blocks[retained_[k]] = repeat_diagonal(bases_[k], c.level().rows) * c.block(k) *
                           repeat_diagonal(bases_[k], c.level().cols).adjoint();
  }
  return Element(ambient_, c.level(), std::move(blocks));
}

K0Class CornerInclusion::map(const K0Class& c) const {
  if (c.diff.size() != retained_.size()) throw Error(ErrorKind::SpaceMismatch, "class is not over the corner");
  K0Class out = K0Class::zero(ambient_.size());
  for (std::size_t k = 0; k < retained_.size(); ++k) out.diff[retained_[k]] = c.diff[k];
  return out;
}

bool CornerInclusion::injective() const {
  // images of the generators must be linearly independent
  const K0Group g = k0_group(corner_);
  Eigen::MatrixXd images(static_cast<Index>(ambient_.size()), static_cast<Index>(g.rank));
  for (std::size_t k = 0; k < g.rank; ++k) {
    const K0Class image = map(g.generators[k]);
    for (std::size_t i = 0; i < image.diff.size(); ++i) {
      images(static_cast<Index>(i), static_cast<Index>(k)) = static_cast<double>(image.diff[i]);
    }
  }
  return Eigen::FullPivLU<Eigen::MatrixXd>(images).rank() == static_cast<Index>(g.rank);
}

Verdict check_corner_diagram(const Element& p, std::size_t samples, std::uint64_t seed,
                             const Tolerances& tol) {
  const CornerInclusion ci(p, tol);
  Probe probe;
  probe.clause = "k0.corner_diagram";
  probe.relation = "chi_X(incl(q1), incl(q2)) = map(chi_{X_p}(q1, q2)); q1 ~ q2 stably in X implies in X_p";
  probe.threshold = 0.0;
  probe.measure = corner_diagram_measure;
  probe.generate = [&](Sampler& s, std::size_t i) -> std::optional<Payload> {
    const Index l = s.uniform_index(1, 3);
    const Index m = s.uniform_index(1, 3);
    const Element q1 = s.projection_element(ci.corner(), l);
    Element q2 = s.projection_element(ci.corner(), m);
    if (i % 2 == 1) {
      const OrderProjection first(q1, tol);
      DimVector ranks = dimension_vector(first, tol);
      bool fits = true;
      for (std::size_t k = 0; k < ranks.size(); ++k) fits = fits && ranks[k] <= m * ci.corner().dim(k);
      if (fits) q2 = projection_with_ranks(ci.corner(), m, ranks, s);
    }
    Payload pl;
    pl.elements.insert_or_assign("p", p);
    pl.elements.insert_or_assign("q1", q1);
    pl.elements.insert_or_assign("q2", q2);
    return pl;
  };
  Verdict v = run_probe(probe, samples, seed, tol);
  v.note = ci.injective() ? "inclusion homomorphism is injective" : "inclusion homomorphism is not injective";
  return v;
}

Verdict check_op_in_ideal(const IdealHandle& h, std::size_t samples, std::uint64_t seed,
                          const Tolerances& tol) {
  if (!h.is_projection()) throw Error(ErrorKind::PreconditionFailed, "the ideal must be generated by a projection");
  const CornerInclusion ci(h.x(), tol);
  Probe probe;
  probe.clause = "k0.op_in_ideal";
  probe.relation = "q in X_p iff q <= p^l iff p q p = q";
  probe.threshold = 0.0;
  probe.measure = op_in_ideal_measure;
  probe.generate = [&](Sampler& s, std::size_t i) -> std::optional<Payload> {
    const Index l = s.uniform_index(1, 3);
    Element q = amplify(h.x(), l);
    if (i % 3 == 1) q = ci.from_corner(s.projection_element(ci.corner(), l)).symmetrized();
    if (i % 3 == 2) q = s.projection_element(h.space(), l);
    Payload pl;
    pl.elements.insert_or_assign("x", h.x());
    pl.elements.insert_or_assign("q", q);
    return pl;
  };
  return run_probe(probe, samples, seed, tol);
}

Verdict check_pi_in_ideal(const IdealHandle& h, std::size_t samples, std::uint64_t seed,
                          const Tolerances& tol) {
  if (!h.is_projection()) throw Error(ErrorKind::PreconditionFailed, "the ideal must be generated by a projection");
  const CornerInclusion ci(h.x(), tol);
  Probe probe;
  probe.clause = "k0.pi_in_ideal";
  probe.relation = "PI_{l,m}(X_p) = M_{l,m}(X_p) n PI_{l,m}(X)";
  probe.threshold = 0.0;
  probe.measure = pi_in_ideal_measure;
  probe.generate = [&](Sampler& s, std::size_t i) -> std::optional<Payload> {
    const Level level{s.uniform_index(1, 2), s.uniform_index(1, 2)};
    Element v = s.partial_isometry_element(h.space(), level);
    if (i % 3 == 0) v = ci.from_corner(s.partial_isometry_element(ci.corner(), level));
    if (i % 3 == 1) v = ci.from_corner(s.element(ci.corner(), level));
    Payload pl;
    pl.elements.insert_or_assign("x", h.x());
    pl.elements.insert_or_assign("v", v);
    return pl;
  };
  return run_probe(probe, samples, seed, tol);
}

Verdict check_equivalence_transfer(const Element& p, std::size_t samples, std::uint64_t seed,
                                   const Tolerances& tol) {
  const CornerInclusion ci(p, tol);
  Probe probe;
  probe.clause = "k0.equivalence_transfer";
  probe.relation = "q1 ~ q2 in X iff q1 ~ q2 in X_p, with the witness inside X_p";
  probe.threshold = 0.0;
  probe.measure = transfer_measure;
  probe.generate = [&](Sampler& s, std::size_t i) -> std::optional<Payload> {
    const Index l = s.uniform_index(1, 2);
    const Index m = s.uniform_index(1, 2);
    const Element c1 = s.projection_element(ci.corner(), l);
    Element c2 = s.projection_element(ci.corner(), m);
    if (i % 2 == 1) {
      DimVector ranks = dimension_vector(OrderProjection(c1, tol), tol);
      bool fits = true;
      for (std::size_t k = 0; k < ranks.size(); ++k) fits = fits && ranks[k] <= m * ci.corner().dim(k);
      if (fits) c2 = projection_with_ranks(ci.corner(), m, ranks, s);
    }
    Payload pl;
    pl.elements.insert_or_assign("p", p);
    pl.elements.insert_or_assign("q1", ci.from_corner(c1).symmetrized());
    pl.elements.insert_or_assign("q2", ci.from_corner(c2).symmetrized());
    return pl;
  };
  return run_probe(probe, samples, seed, tol);
}

Verdict check_t_witness(const SpaceSpec& space, std::size_t samples, std::uint64_t seed,
                        const Tolerances& tol) {
  Probe probe;
  probe.clause = "k0.t_witness";
  probe.relation = "|y| = |z| implies w = y z* has |w*| = |y*| and |w| = |z*|";
  probe.threshold = kWitnessAgreement;
  probe.measure = t_witness_measure;
  probe.generate = [&](Sampler& s, std::size_t) -> std::optional<Payload> {
    const Index l = s.uniform_index(1, 2);
    const Index m = s.uniform_index(1, 2);
    const Index k = s.uniform_index(1, 3);
    std::vector<ComplexMatrix> ys;
    std::vector<ComplexMatrix> zs;
    for (Index n : space.summands()) {
      const Index r = s.uniform_index(0, std::min({l, m, k}) * n);
      const ComplexMatrix w = s.isometry(m * n, r);
      ys.push_back(s.isometry(l * n, r) * w.adjoint());
      zs.push_back(s.isometry(k * n, r) * w.adjoint());
    }
    Payload pl;
    pl.elements.insert_or_assign("y", Element(space, {l, m}, std::move(ys)));
    pl.elements.insert_or_assign("z", Element(space, {k, m}, std::move(zs)));
    return pl;
  };
  Verdict v = run_probe(probe, samples, seed, tol);
  v.note = "condition (T) realised by w = y z*";
  return v;
}

Verdict check_equivalence_relation(const SpaceSpec& space, std::size_t samples, std::uint64_t seed,
                                   const Tolerances& tol) {
  Probe probe;
  probe.clause = "k0.equivalence_relation";
  probe.relation = "~ is reflexive, symmetric (v*) and transitive (t witness)";
  probe.threshold = tol.eq_tol;
  probe.measure = relation_measure;
  probe.generate = [&](Sampler& s, std::size_t) -> std::optional<Payload> {
    const Index l1 = s.uniform_index(1, 2), l2 = s.uniform_index(1, 2), l3 = s.uniform_index(1, 2);
    Payload pl;
    if (s.coin()) {
      const DimVector ranks = random_ranks(space, s);
      pl.elements.insert_or_assign("p", projection_with_ranks(space, l1, ranks, s));
      pl.elements.insert_or_assign("q", projection_with_ranks(space, l2, ranks, s));
      pl.elements.insert_or_assign("r", projection_with_ranks(space, l3, ranks, s));
    } else {
      pl.elements.insert_or_assign("p", s.projection_element(space, l1));
      pl.elements.insert_or_assign("q", s.projection_element(space, l2));
      pl.elements.insert_or_assign("r", s.projection_element(space, l3));
    }
    return pl;
  };
  return run_probe(probe, samples, seed, tol);
}

Verdict check_k0_additivity(const SpaceSpec& space, std::size_t samples, std::uint64_t seed,
                            const Tolerances& tol) {
  Probe probe;
  probe.clause = "k0.additivity";
  probe.relation = "[(p (+) p', q (+) q')] = [(p, q)] + [(p', q')], [(p, p)] = 0";
  probe.threshold = 0.0;
  probe.measure = additivity_measure;
  probe.generate = [&](Sampler& s, std::size_t) -> std::optional<Payload> {
    Payload pl;
    for (const char* key : {"p", "q", "p2", "q2"}) {
      pl.elements.insert_or_assign(key, s.projection_element(space, s.uniform_index(1, 2)));
    }
    if (s.coin()) {
      // same class, different level
      const DimVector ranks = dimension_vector(OrderProjection(pl.element("p"), tol), tol);
      pl.elements.insert_or_assign("q", projection_with_ranks(space, 2, ranks, s));
    }
    return pl;
  };
  return run_probe(probe, samples, seed, tol);
}

std::vector<std::pair<std::string, MeasureFn>> ktheory_measures() {
  return {
      {"k0.corner_diagram", corner_diagram_measure},
      {"k0.op_in_ideal", op_in_ideal_measure},
      {"k0.pi_in_ideal", pi_in_ideal_measure},
      {"k0.equivalence_transfer", transfer_measure},
      {"k0.t_witness", t_witness_measure},
      {"k0.equivalence_relation", relation_measure},
      {"k0.additivity", additivity_measure},
  };
}

}  // namespace ool
