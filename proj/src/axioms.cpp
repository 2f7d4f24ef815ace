#include "ool/axioms.hpp"

#include "ool/errors.hpp"
#include "ool/oup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ool {

namespace {

constexpr double kShift = 0.1;
constexpr double kInequalitySlack = 1e-7;

Element shifted_abs(const Element& x, const Tolerances& tol) {
  return abs_value(x, tol) + kShift * order_unit(x.space(), x.level().cols);
}

Element level_scaled_abs(const Element& x, const Tolerances& tol) {
  return (1.0 + kShift * static_cast<double>(x.level().cols - 1)) * abs_value(x, tol);
}

Element squared_abs(const Element& x, const Tolerances&) { return multiply(x.adjoint(), x); }

const AbsModel& model_of(const Payload& p) { return abs_model(p.label("model")); }

Element act(const ComplexMatrix& left, const Element& x, const ComplexMatrix& right) {
  return scalar_act({right}, scalar_act({left}, x, Side::Left), Side::Right);
}

ComplexMatrix column_pad(Index m, Index extra) {
  ComplexMatrix s = ComplexMatrix::Zero(m + extra, m);
  s.topRows(m).setIdentity();
  return s;
}

// ---- measures -------------------------------------------------------------

double cone_proper(const Payload& p, const Tolerances& tol) {
  const Element& x = p.element("x");
  if (is_positive(x, tol) && is_positive(-x, tol)) {
    return -max_abs_diff(x, Element::zero(x.space(), x.level()));
  }
  return 0.0;
}

double archimedean(const Payload& p, const Tolerances& tol) {
  const Element& x = p.element("x");
  const Element e = order_unit(x.space(), x.level().rows);
  for (double eps = 1.0; eps >= 1e-8 * 0.5; eps *= 1e-2) {
    if (!is_positive(x + eps * e, tol)) return 0.0;
  }
  return std::min(0.0, min_eigenvalue(x, tol));
}

double abs_even(const Payload& p, const Tolerances& tol) {
  const auto& abs = model_of(p).abs;
  const Element& x = p.element("x");
  return equality_margin(abs(-x, tol), abs(x, tol));
}

double abs_dominates(const Payload& p, const Tolerances& tol) {
  const Element& x = p.element("x");
  const Element a = model_of(p).abs(x, tol);
  return std::min(min_eigenvalue(a - x, tol), min_eigenvalue(a + x, tol));
}

double abs_fixes_positive(const Payload& p, const Tolerances& tol) {
  const Element& x = p.element("x");
  return equality_margin(model_of(p).abs(x, tol), x);
}

double abs_homogeneous(const Payload& p, const Tolerances& tol) {
  const auto& abs = model_of(p).abs;
  const Element& x = p.element("x");
  const Complex lambda = p.scalar("lambda")(0, 0);
  return equality_margin(abs(lambda * x, tol), std::abs(lambda) * abs(x, tol));
}

double jordan(const Payload& p, const Tolerances& tol) {
  const Element& x = p.element("x");
  const JordanParts parts = jordan_parts(x, tol);
  return equality_margin(model_of(p).abs(x, tol), parts.pos + parts.neg);
}

double scalar_contraction(const Payload& p, const Tolerances& tol) {
  const auto& abs = model_of(p).abs;
  const Element& x = p.element("x");
  const ComplexMatrix& s1 = p.scalar("s1");
  const ComplexMatrix& s2 = p.scalar("s2");
  const Element bound = op_norm(s1) * abs(scalar_act({s2}, abs(x, tol), Side::Right), tol);
  return min_eigenvalue(bound - abs(act(s1, x, s2), tol), tol);
}

double direct_sum_additive(const Payload& p, const Tolerances& tol) {
  const auto& abs = model_of(p).abs;
  const Element& x = p.element("x");
  const Element& y = p.element("y");
  return equality_margin(abs(direct_sum(x, y), tol), direct_sum(abs(x, tol), abs(y, tol)));
}

double isometry_left(const Payload& p, const Tolerances& tol) {
  const auto& abs = model_of(p).abs;
  const Element& x = p.element("x");
  return equality_margin(abs(scalar_act({p.scalar("s")}, x, Side::Left), tol), abs(x, tol));
}

double offdiagonal(const Payload& p, const Tolerances& tol) {
  const auto& abs = model_of(p).abs;
  const Element& x = p.element("x");
  const Element xs = x.adjoint();
  const Element b = assemble({{{std::nullopt, x}, {xs, std::nullopt}}});
  return equality_margin(abs(b, tol), direct_sum(abs(xs, tol), abs(x, tol)));
}

double block_positive(const Payload& p, const Tolerances& tol) {
  const auto& abs = model_of(p).abs;
  const Element& x = p.element("x");
  const Element xs = x.adjoint();
  return min_eigenvalue(assemble({{{abs(xs, tol), x}, {xs, abs(x, tol)}}}), tol);
}

double padding(const Payload& p, const Tolerances& tol) {
  const auto& abs = model_of(p).abs;
  const Element& x = p.element("x");
  const Index extra = static_cast<Index>(p.param("extra"));
  const Element ax = abs(x, tol);
  const Element column = scalar_act({column_pad(x.level().rows, extra)}, x, Side::Left);
  const Element row = scalar_act({column_pad(x.level().cols, extra).adjoint()}, x, Side::Right);
  const Element padded = direct_sum(ax, Element::zero(x.space(), {extra, extra}));
  return std::min(equality_margin(abs(column, tol), ax), equality_margin(abs(row, tol), padded));
}

double unitary_covariance(const Payload& p, const Tolerances& tol) {
  const auto& abs = model_of(p).abs;
  const Element& x = p.element("x");
  const ComplexMatrix& u = p.scalar("u");
  return equality_margin(abs(act(u.adjoint(), x, u), tol), act(u.adjoint(), abs(x, tol), u));
}

double block_lemma(const Payload& p, const Tolerances& tol) {
  const double defect = projection_defect(direct_sum(p.element("p"), p.element("q")), tol);
  if (p.label("expect") == "projection") return tol.eq_tol - defect;
  return defect - tol.eq_tol;
}

// ---- suite ----------------------------------------------------------------

struct Clause {
  const char* name;
  const char* relation;
  double threshold;  // negative: use eq_tol
  MeasureFn measure;
  std::function<void(Sampler&, Payload&)> fill;
};

}  // namespace

const std::vector<AbsModel>& abs_models() {
  static const std::vector<AbsModel> models{
      {"cstar", [](const Element& x, const Tolerances& tol) { return abs_value(x, tol); }},
      {"shifted", shifted_abs},
      {"level_scaled", level_scaled_abs},
      {"squared", squared_abs},
  };
  return models;
}

const AbsModel& abs_model(const std::string& name) {
  for (const auto& m : abs_models()) {
    if (m.name == name) return m;
  }
  throw Error(ErrorKind::ValidationError, "unknown absolute value model '" + name + "'");
}

std::vector<Verdict> check_axioms(const SpaceSpec& space, const AxiomConfig& config,
                                  const Tolerances& tol) {
  if (config.levels.empty()) throw Error(ErrorKind::ValidationError, "level list is empty");
  for (Index l : config.levels) {
    if (l < 1) throw Error(ErrorKind::ValidationError, "levels must be >= 1");
    if (l > config.max_level) {
      throw Error(ErrorKind::LevelTooLarge,
                  "level " + std::to_string(l) + " exceeds " + std::to_string(config.max_level));
    }
  }
  abs_model(config.model);

  const auto& levels = config.levels;
  auto level = [&](Sampler& s) {
    return levels[static_cast<std::size_t>(s.uniform_index(0, static_cast<Index>(levels.size()) - 1))];
  };
  auto rect = [&](Sampler& s) {
    const Index m = level(s);
    const Index n = level(s);
    return s.element(space, {m, n});
  };

  const std::vector<Clause> clauses{
      {"axiom.cone_proper", "x >= 0 and -x >= 0 imply x = 0", -1, cone_proper,
       [&](Sampler& s, Payload& p) {
         const double scale = s.coin() ? 1e-12 : 1.0;
         p.elements.insert_or_assign("x", scale * s.hermitian_element(space, level(s)));
       }},
      {"axiom.archimedean", "x + t e >= 0 for t in {1, 1e-2, ..., 1e-8} implies x >= 0",
       kInequalitySlack, archimedean,
       [&](Sampler& s, Payload& p) {
         static constexpr double shifts[] = {0.0, 1e-10, 1e-3, 0.5};
         const Index l = level(s);
         const double c = shifts[s.uniform_index(0, 3)];
         p.elements.insert_or_assign("x", s.positive_element(space, l) - c * order_unit(space, l));
       }},
      {"axiom.abs_even", "|-x| = |x|", -1, abs_even,
       [&](Sampler& s, Payload& p) { p.elements.insert_or_assign("x", rect(s)); }},
      {"axiom.abs_dominates", "|x| -+ x >= 0 for Hermitian x", kInequalitySlack, abs_dominates,
       [&](Sampler& s, Payload& p) { p.elements.insert_or_assign("x", s.hermitian_element(space, level(s))); }},
      {"axiom.abs_fixes_positive", "|x| = x for x >= 0", -1, abs_fixes_positive,
       [&](Sampler& s, Payload& p) {
         const Index l = level(s);
         p.elements.insert_or_assign("x", s.uniform(0.1, 3.0) * s.positive_element(space, l));
       }},
      {"axiom.abs_homogeneous", "|t x| = |t| |x| for complex t", -1, abs_homogeneous,
       [&](Sampler& s, Payload& p) {
         const double r = s.coin(0.2) ? 0.0 : s.uniform(0.1, 3.0);
         const double theta = s.uniform(0.0, 2.0 * std::numbers::pi);
         p.elements.insert_or_assign("x", rect(s));
         p.scalars["lambda"] = ComplexMatrix::Constant(1, 1, std::polar(r, theta));
       }},
      {"axiom.jordan", "|x| = x+ + x- for the orthogonal decomposition x = x+ - x-", -1, jordan,
       [&](Sampler& s, Payload& p) { p.elements.insert_or_assign("x", s.hermitian_element(space, level(s))); }},
      {"axiom.abs_scalar_contraction", "|s1 x s2| <= |s1| ||x| s2|", kInequalitySlack,
       scalar_contraction,
       [&](Sampler& s, Payload& p) {
         const Index l = level(s), m = level(s), n = level(s), k = level(s);
         p.elements.insert_or_assign("x", s.element(space, {m, n}));
         p.scalars["s1"] = s.uniform(0.05, 2.0) * s.gaussian(l, m);
         p.scalars["s2"] = s.gaussian(n, k);
       }},
      {"axiom.abs_direct_sum", "|x (+) y| = |x| (+) |y|", -1, direct_sum_additive,
       [&](Sampler& s, Payload& p) {
         p.elements.insert_or_assign("x", rect(s));
         p.elements.insert_or_assign("y", rect(s));
       }},
      {"prop.isometry_left", "|s x| = |x| for an isometry s", -1, isometry_left,
       [&](Sampler& s, Payload& p) {
         const Index m = level(s), n = level(s);
         const Index l = s.uniform_index(m, std::max(m, config.max_level));
         p.elements.insert_or_assign("x", s.element(space, {m, n}));
         p.scalars["s"] = s.isometry(l, m);
       }},
      {"prop.offdiagonal", "|[[0, x], [x*, 0]]| = |x*| (+) |x|", -1, offdiagonal,
       [&](Sampler& s, Payload& p) { p.elements.insert_or_assign("x", rect(s)); }},
      {"prop.block_positive", "[[|x*|, x], [x*, |x|]] >= 0", kInequalitySlack, block_positive,
       [&](Sampler& s, Payload& p) { p.elements.insert_or_assign("x", rect(s)); }},
      {"prop.padding", "|[x; 0]| = |x| and |[x 0]| = |x| (+) 0", -1, padding,
       [&](Sampler& s, Payload& p) {
         p.elements.insert_or_assign("x", rect(s));
         p.params["extra"] = static_cast<double>(level(s));
       }},
      {"prop.unitary_covariance", "|u* x u| = u* |x| u for a unitary u", -1, unitary_covariance,
       [&](Sampler& s, Payload& p) {
         const Index n = level(s);
         p.elements.insert_or_assign("x", s.element(space, {n, n}));
         p.scalars["u"] = s.unitary(n);
       }},
  };

  std::vector<Verdict> out;
  for (const auto& c : clauses) {
    Probe probe;
    probe.clause = c.name;
    probe.relation = c.relation;
    probe.threshold = c.threshold < 0 ? tol.eq_tol : c.threshold;
    probe.measure = c.measure;
    probe.generate = [&](Sampler& s, std::size_t) -> std::optional<Payload> {
      Payload p;
      p.labels["model"] = config.model;
      c.fill(s, p);
      return p;
    };
    Verdict v = run_probe(probe, config.samples, config.seed, tol);
    v.note = "model: " + config.model;
    out.push_back(std::move(v));
  }
  return out;
}

Verdict check_block_lemma(const SpaceSpec& space, std::size_t samples, std::uint64_t seed,
                          const Tolerances& tol) {
  Probe probe;
  probe.clause = "block_lemma";
  probe.relation = "p (+) q is an order projection iff p and q are";
  probe.threshold = 0.0;
  probe.measure = block_lemma;
  probe.generate = [&](Sampler& s, std::size_t index) -> std::optional<Payload> {
    const Index l = s.uniform_index(1, 2);
    const Index m = s.uniform_index(1, 2);
    Payload p;
    p.elements.insert_or_assign("p", s.projection_element(space, l));
    if (index % 2 == 0) {
      p.elements.insert_or_assign("q", s.projection_element(space, m));
      p.labels["expect"] = "projection";
    } else {
      std::vector<ComplexMatrix> blocks;
      for (std::size_t b = 0; b < space.size(); ++b) {
        RealVector spectrum(m * space.dim(b));
        for (Index i = 0; i < spectrum.size(); ++i) spectrum(i) = s.coin() ? 1.0 : 0.0;
        if (b == 0) spectrum(0) = s.uniform(0.1, 0.9);
        blocks.push_back(s.with_spectrum(spectrum));
      }
      p.elements.insert_or_assign("q", Element(space, {m, m}, std::move(blocks)).symmetrized());
      p.labels["expect"] = "non_projection";
    }
    return p;
  };
  return run_probe(probe, samples, seed, tol);
}

std::vector<std::pair<std::string, MeasureFn>> axiom_measures() {
  return {
      {"axiom.cone_proper", cone_proper},
      {"axiom.archimedean", archimedean},
      {"axiom.abs_even", abs_even},
      {"axiom.abs_dominates", abs_dominates},
      {"axiom.abs_fixes_positive", abs_fixes_positive},
      {"axiom.abs_homogeneous", abs_homogeneous},
      {"axiom.jordan", jordan},
      {"axiom.abs_scalar_contraction", scalar_contraction},
      {"axiom.abs_direct_sum", direct_sum_additive},
      {"prop.isometry_left", isometry_left},
      {"prop.offdiagonal", offdiagonal},
      {"prop.block_positive", block_positive},
      {"prop.padding", padding},
      {"prop.unitary_covariance", unitary_covariance},
      {"block_lemma", block_lemma},
  };
}

}  // namespace ool
