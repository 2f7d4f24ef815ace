#include "ool/ideals.hpp"

#include "ool/errors.hpp"
#include "ool/oup.hpp"
#include "ool/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ool {

namespace {

constexpr double kBisectionAgreement = 1e-6;
constexpr double kNormAgreement = 1e-8;
constexpr int kBisectionSteps = 200;

Element congruence(const IdealHandle& h, const Element& y,
                   ComplexMatrix (IdealHandle::*factor)(std::size_t, Index) const) {
  std::vector<ComplexMatrix> blocks;
  for (std::size_t i = 0; i < y.blocks().size(); ++i) {
    blocks.push_back((h.*factor)(i, y.level().rows) * y.block(i) * (h.*factor)(i, y.level().cols));
  }
  return Element(y.space(), y.level(), std::move(blocks));
}

bool member_of(const Payload& p, const std::string& key, const Tolerances& tol) {
  return membership(IdealHandle(p.element("x"), tol), p.element(key), tol).member;
}

bool in_scalar_subspace(const Element& a, const Tolerances& tol) {
  const Complex t = a.block(0)(0, 0);
  return approx_equal(a, t * order_unit(a.space(), a.level().rows), tol.eq_tol);
}

// ---- measures -------------------------------------------------------------

double order_ideal_measure(const Payload& p, const Tolerances& tol) {
  if (!member_of(p, "b", tol)) return 0.0;
  return agreement_margin(member_of(p, "a", tol), true);
}

double control_measure(const Payload& p, const Tolerances& tol) {
  if (!in_scalar_subspace(p.element("b"), tol)) return 0.0;
  return agreement_margin(in_scalar_subspace(p.element("a"), tol), true);
}

double entrywise_measure(const Payload& p, const Tolerances& tol) {
  const IdealHandle h(p.element("x"), tol);
  const Element& y = p.element("y");
  bool entrywise = true;
  for (Index i = 0; i < y.level().rows; ++i) {
    for (Index j = 0; j < y.level().cols; ++j) entrywise = entrywise && membership(h, y.entry(i, j), tol).member;
  }
  return agreement_margin(membership(h, y, tol).member, entrywise);
}

double proper_cone_measure(const Payload& p, const Tolerances& tol) {
  const Element& y = p.element("y");
  if (member_of(p, "y", tol) && is_positive(y, tol) && is_positive(-y, tol)) {
    return -max_abs_diff(y, Element::zero(y.space(), y.level()));
  }
  return 0.0;
}

double order_unit_measure(const Payload& p, const Tolerances& tol) {
  const IdealHandle h(p.element("x"), tol);
  const Element& y = p.element("y");
  const MembershipResult r = membership(h, y, tol);
  if (!r.member) return -1.0;
  const Element xl = amplify(h.x(), y.level().rows);
  const double eps = *r.min_epsilon;
  return std::min({certificate_margin(h, y, eps, tol), min_eigenvalue(eps * xl - y, tol),
                   min_eigenvalue(eps * xl + y, tol)});
}

double norm_agreement_measure(const Payload& p, const Tolerances& tol) {
  const IdealHandle h(p.element("x"), tol);
  const Element& y = p.element("y");
  return -std::abs(ideal_norm(h, y, tol) - order_unit_norm(y, tol));
}

double abs_closed_measure(const Payload& p, const Tolerances& tol) {
  const IdealHandle h(p.element("x"), tol);
  const Element& y = p.element("y");
  if (!membership(h, y, tol).member) return 0.0;
  return agreement_margin(membership(h, abs_value(y, tol), tol).member, true);
}

double bisection_measure(const Payload& p, const Tolerances& tol) {
  const IdealHandle h(p.element("x"), tol);
  const Element& y = p.element("y");
  const MembershipResult closed = membership(h, y, tol);
  const BisectionResult bis = bisection_membership(h, y, tol);
  if (closed.member != bis.feasible) return -1.0;
  if (!closed.member) return 0.0;
  return -std::abs(*closed.min_epsilon - bis.epsilon);
}

double corner_measure(const Payload& p, const Tolerances& tol) {
  const Element& x = p.element("x");
  const Element& y = p.element("y");
  const bool fixed = approx_equal(corner_oracle(x, y, tol), y, tol.eq_tol);
  return agreement_margin(member_of(p, "y", tol), fixed);
}

Payload pair_payload(const Element& x, const Element& y) {
  Payload p;
  p.elements.insert_or_assign("x", x);
  p.elements.insert_or_assign("y", y);
  return p;
}

Level random_level(Sampler& s) { return {s.uniform_index(1, 2), s.uniform_index(1, 2)}; }

}  // namespace

IdealHandle::IdealHandle(Element x, const Tolerances& tol) : x_(std::move(x)) {
  if (x_.level() != Level{1, 1}) throw Error(ErrorKind::NotSquareLevel, "ideal generator must be at level 1");
  if (!is_positive(x_, tol)) throw Error(ErrorKind::NotPositive, "ideal generator must be positive");
  const double norm = order_unit_norm(x_, tol);
  if (std::abs(norm - 1.0) > tol.eq_tol) {
    throw Error(ErrorKind::NotUnitNorm, "ideal generator must have norm 1, got " + std::to_string(norm));
  }
  min_positive_ = std::numeric_limits<double>::infinity();
  for (const auto& b : x_.blocks()) {
    // the cutoff is relative to |x| = 1, so a block that is zero up to rounding has empty support
    SupportedInverseRoot inv = pinv_sqrt(b, tol, 1.0);
    const auto eig = herm_eig(b, tol);
    for (Index i = 0; i < eig.values.size(); ++i) {
      if (eig.values(i) > tol.rank_tol) min_positive_ = std::min(min_positive_, eig.values(i));
    }
    root_.push_back(std::move(inv.root));
    inv_root_.push_back(std::move(inv.inv_root));
    support_.push_back(std::move(inv.support));
  }
  is_projection_ = is_order_projection(x_, tol);
}

ComplexMatrix IdealHandle::root(std::size_t block, Index level) const {
  return repeat_diagonal(root_.at(block), level);
}

ComplexMatrix IdealHandle::inv_root(std::size_t block, Index level) const {
  return repeat_diagonal(inv_root_.at(block), level);
}

ComplexMatrix IdealHandle::support(std::size_t block, Index level) const {
  return repeat_diagonal(support_.at(block), level);
}

MembershipResult membership(const IdealHandle& h, const Element& y, const Tolerances& tol) {
  require_same_space(h.x(), y);
  Element k = congruence(h, y, &IdealHandle::inv_root);
  const Element rebuilt = congruence(h, k, &IdealHandle::root);
  MembershipResult r;
  r.residual = max_abs_diff(rebuilt, y);
  r.member = r.residual <= tol.eq_tol * std::max(1.0, order_unit_norm(y, tol));
  if (r.member) {
    r.min_epsilon = order_unit_norm(k, tol);
    r.witness = std::move(k);
  }
  return r;
}

double certificate_margin(const IdealHandle& h, const Element& y, double epsilon,
                          const Tolerances& tol) {
  require_same_space(h.x(), y);
  const Element xl = amplify(h.x(), y.level().rows);
  const Element xm = amplify(h.x(), y.level().cols);
  return min_eigenvalue(assemble({{{epsilon * xl, y}, {y.adjoint(), epsilon * xm}}}), tol);
}

BisectionResult bisection_membership(const IdealHandle& h, const Element& y,
                                     const Tolerances& tol) {
  BisectionResult r;
  const double norm = order_unit_norm(y, tol);
  if (norm == 0.0) return {true, 0.0, 0.0};
  r.cap = 10.0 * norm / h.min_positive_eigenvalue();
  auto feasible = [&](double eps) { return certificate_margin(h, y, eps, tol) >= -tol.psd_tol; };
  if (!feasible(r.cap)) return r;
  double lo = 0.0;
  double hi = r.cap;
  for (int i = 0; i < kBisectionSteps && hi - lo > 1e-13 * r.cap; ++i) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  r.feasible = true;
  r.epsilon = hi;
  return r;
}

double ideal_norm(const IdealHandle& h, const Element& y, const Tolerances& tol) {
  const MembershipResult r = membership(h, y, tol);
  if (!r.member) {
    throw Error(ErrorKind::NotMember, "element is not in the ideal (residual " + std::to_string(r.residual) + ")");
  }
  return *r.min_epsilon;
}

Element corner_oracle(const Element& p, const Element& y, const Tolerances& tol) {
  require_same_space(p, y);
  if (p.level() != Level{1, 1} || !is_order_projection(p, tol)) {
    throw Error(ErrorKind::NotProjection, "corner needs an order projection at level 1");
  }
  return multiply(multiply(amplify(p, y.level().rows), y), amplify(p, y.level().cols));
}

Element sample_ideal_generator(const SpaceSpec& space, Sampler& s, bool projection) {
  std::vector<ComplexMatrix> blocks;
  for (std::size_t b = 0; b < space.size(); ++b) {
    RealVector spectrum(space.dim(b));
    for (Index i = 0; i < spectrum.size(); ++i) {
      if (projection) {
        spectrum(i) = s.coin() ? 1.0 : 0.0;
      } else {
        spectrum(i) = s.coin(0.3) ? 0.0 : s.uniform(0.1, 1.0);
      }
    }
    if (b == 0) spectrum(0) = 1.0;
    blocks.push_back(s.with_spectrum(spectrum));
  }
  return Element(space, {1, 1}, std::move(blocks)).symmetrized();
}

Element sample_member(const IdealHandle& h, Sampler& s, Level level) {
  return congruence(h, s.element(h.space(), level), &IdealHandle::root);
}

Verdict check_order_ideal(const IdealHandle& h, std::size_t samples, std::uint64_t seed,
                          const Tolerances& tol) {
  Probe probe;
  probe.clause = "ideal.order_ideal";
  probe.relation = "0 <= a <= b with b in the ideal implies a in the ideal";
  probe.threshold = 0.0;
  probe.measure = order_ideal_measure;
  probe.generate = [&](Sampler& s, std::size_t index) -> std::optional<Payload> {
    const Index l = s.uniform_index(1, 2);
    Element b = h.x();
    Element c = 0.5 * order_unit(h.space(), 1);
    if (index > 0) {
      const Element g = s.positive_element(h.space(), l);
      b = s.uniform(0.1, 2.0) * congruence(h, g, &IdealHandle::root);
      c = s.uniform(0.0, 1.0) * s.positive_element(h.space(), l);
    }
    const Element rb = b.transform([&](const ComplexMatrix& m) { return herm_sqrt(m, tol); });
    Payload p;
    p.elements.insert_or_assign("x", h.x());
    p.elements.insert_or_assign("b", b);
    p.elements.insert_or_assign("a", multiply(multiply(rb, c), rb).symmetrized());
    return p;
  };
  return run_probe(probe, samples, seed, tol);
}

Verdict check_order_ideal_control(const SpaceSpec& space, std::size_t samples, std::uint64_t seed,
                                  const Tolerances& tol) {
  Probe probe;
  probe.clause = "ideal.order_ideal.scalar_control";
  probe.relation = "0 <= a <= b with b in {t e} implies a in {t e}";
  probe.threshold = 0.0;
  probe.measure = control_measure;
  probe.generate = [&](Sampler& s, std::size_t index) -> std::optional<Payload> {
    const Index l = index == 0 ? 1 : s.uniform_index(1, 2);
    const double t = index == 0 ? 1.0 : s.uniform(0.5, 2.0);
    const Element b = t * order_unit(space, l);
    Element a = Element::zero(space, {l, l});
    if (index == 0) {
      std::vector<ComplexMatrix> blocks;
      for (const auto& blk : a.blocks()) blocks.push_back(blk);
      blocks[0](0, 0) = 1.0;
      a = Element(space, {l, l}, std::move(blocks));
    } else {
      a = t * s.uniform(0.0, 1.0) * s.positive_element(space, l);
    }
    Payload p;
    p.elements.insert_or_assign("b", b);
    p.elements.insert_or_assign("a", a);
    return p;
  };
  Verdict v = run_probe(probe, samples, seed, tol);
  v.guaranteed = false;
  v.note = "control: {t e} is not an order ideal, so this verdict is expected to fail";
  return v;
}

std::vector<Verdict> check_ideal_theorem(const IdealHandle& h, std::size_t samples,
                                         std::uint64_t seed, const Tolerances& tol) {
  std::vector<Verdict> out;
  auto run = [&](const char* clause, const char* relation, double threshold, MeasureFn measure,
                 std::function<Element(Sampler&, std::size_t)> draw) {
    Probe probe;
    probe.clause = clause;
    probe.relation = relation;
    probe.threshold = threshold;
    probe.measure = std::move(measure);
    probe.generate = [&](Sampler& s, std::size_t i) -> std::optional<Payload> {
      return pair_payload(h.x(), draw(s, i));
    };
    out.push_back(run_probe(probe, samples, seed, tol));
  };

  run("ideal.entrywise_membership", "y is in M_{l,m}(X_x) iff every entry of y is in X_x", 0.0,
      entrywise_measure, [&](Sampler& s, std::size_t i) {
        const Level level = random_level(s);
        if (i % 3 == 0) return s.element(h.space(), level);
        Element y = sample_member(h, s, level);
        if (i % 3 == 2) {
          // one entry pushed off the corner
          const Element noise = s.element(h.space(), {1, 1});
          std::vector<std::vector<Element>> entries;
          for (Index a = 0; a < level.rows; ++a) {
            entries.emplace_back();
            for (Index b = 0; b < level.cols; ++b) {
              entries.back().push_back(a == 0 && b == 0 ? y.entry(a, b) + noise : y.entry(a, b));
            }
          }
          y = from_entries(h.space(), entries);
        }
        return y;
      });
  run("ideal.proper_cone", "y, -y in M_l(X_x)+ imply y = 0", tol.eq_tol, proper_cone_measure,
      [&](Sampler& s, std::size_t) {
        const Index l = s.uniform_index(1, 2);
        const double scale = s.coin() ? 1e-12 : 1.0;
        const Element g = s.hermitian_element(h.space(), l);
        return (scale * congruence(h, g, &IdealHandle::root)).symmetrized();
      });
  run("ideal.order_unit", "-+y <= |k| x^l for Hermitian members y", tol.eq_tol, order_unit_measure,
      [&](Sampler& s, std::size_t) {
        const Index l = s.uniform_index(1, 2);
        const Element g = s.hermitian_element(h.space(), l);
        return congruence(h, g, &IdealHandle::root).symmetrized();
      });
  run("ideal.norm_agreement", "the ideal norm equals the order-unit norm", kNormAgreement,
      norm_agreement_measure, [&](Sampler& s, std::size_t) { return sample_member(h, s, random_level(s)); });
  if (!h.is_projection()) {
    out.back().guaranteed = false;
    out.back().note = "x is not an order projection; the norms need not agree";
  }
  run("ideal.abs_closed", "|y| is in the ideal for members y", 0.0, abs_closed_measure,
      [&](Sampler& s, std::size_t) { return sample_member(h, s, random_level(s)); });
  return out;
}

Verdict check_membership_bisection(const SpaceSpec& space, std::size_t samples, std::uint64_t seed,
                                   const Tolerances& tol) {
  Probe probe;
  probe.clause = "ideal.bisection_agreement";
  probe.relation = "closed-form membership and min e agree with bisection";
  probe.threshold = kBisectionAgreement;
  probe.measure = bisection_measure;
  probe.generate = [&](Sampler& s, std::size_t i) -> std::optional<Payload> {
    const IdealHandle h(sample_ideal_generator(space, s, s.coin(0.3)), tol);
    const Level level = random_level(s);
    return pair_payload(h.x(), i % 2 == 0 ? sample_member(h, s, level) : s.element(space, level));
  };
  return run_probe(probe, samples, seed, tol);
}

Verdict check_membership_corner(const SpaceSpec& space, std::size_t samples, std::uint64_t seed,
                                const Tolerances& tol) {
  Probe probe;
  probe.clause = "ideal.corner_agreement";
  probe.relation = "for an order projection p, y is in X_p iff p y p = y";
  probe.threshold = 0.0;
  probe.measure = corner_measure;
  probe.generate = [&](Sampler& s, std::size_t i) -> std::optional<Payload> {
    const IdealHandle h(sample_ideal_generator(space, s, true), tol);
    const Level level = random_level(s);
    return pair_payload(h.x(), i % 2 == 0 ? sample_member(h, s, level) : s.element(space, level));
  };
  return run_probe(probe, samples, seed, tol);
}

std::vector<std::pair<std::string, MeasureFn>> ideal_measures() {
  return {
      {"ideal.order_ideal", order_ideal_measure},
      {"ideal.order_ideal.scalar_control", control_measure},
      {"ideal.entrywise_membership", entrywise_measure},
      {"ideal.proper_cone", proper_cone_measure},
      {"ideal.order_unit", order_unit_measure},
      {"ideal.norm_agreement", norm_agreement_measure},
      {"ideal.abs_closed", abs_closed_measure},
      {"ideal.bisection_agreement", bisection_measure},
      {"ideal.corner_agreement", corner_measure},
  };
}

}  // namespace ool
