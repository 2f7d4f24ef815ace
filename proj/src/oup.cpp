#include "ool/oup.hpp"

#include "ool/errors.hpp"
#include "ool/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ool {

namespace {

constexpr const char* kOupClause = "oup.order_unit_property";
constexpr const char* kAbsOupClause = "oup.absolute_order_unit_property";
constexpr const char* kCharacterizationClause = "oup.characterization";
constexpr const char* kBlockClause = "oup.block_characterization";
constexpr const char* kNormClause = "oup.projection_norm";

// Refutation searches nested inside the characterization clause.
constexpr std::size_t kInnerSearchSamples = 16;

void require_positive(const Element& x, const Tolerances& tol, const char* what) {
  if (!x.level().square() || !is_positive(x, tol)) {
    throw Error(ErrorKind::NotPositive, std::string(what) + " needs a positive element");
  }
}

Eigen::VectorXcd phase_normalized(const Eigen::VectorXcd& v) {
  Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  const Complex pivot = v(arg);
  return std::abs(pivot) > 0 ? Eigen::VectorXcd(v * (std::abs(pivot) / pivot)) : v;
}

Element hermitian_part_of_generated(const Element& y) {
  // Generated face elements are Hermitian up to rounding; the generator owns
  // them, so it may restore exact symmetry.
  return y.symmetrized();
}

OupMode mode_from_label(const std::string& label) {
  if (label == to_string(OupMode::OrderUnit)) return OupMode::OrderUnit;
  if (label == to_string(OupMode::AbsoluteOrderUnit)) return OupMode::AbsoluteOrderUnit;
  throw Error(ErrorKind::ValidationError, "unknown OUP mode '" + label + "'");
}

double property_measure(const Payload& p, const Tolerances& tol) {
  return property_margin(p.element("x"), p.element("y"), mode_from_label(p.label("mode")), tol);
}

bool admits_refutation(const Element& c, std::uint64_t seed, const Tolerances& tol) {
  if (c.is_zero(tol.eq_tol)) return false;
  const double norm = order_unit_norm(c, tol);
  if (construct_counterexample(c * (1.0 / norm), tol)) return true;
  for (OupMode mode : {OupMode::OrderUnit, OupMode::AbsoluteOrderUnit}) {
    if (!refute_property(c, 1, mode, kInnerSearchSamples, seed, tol).passed) return true;
  }
  return false;
}

double characterization_measure(const Payload& p, const Tolerances& tol) {
  const Element& x = p.element("x");
  const auto seed = static_cast<std::uint64_t>(p.param("search_seed"));
  const bool projection = is_order_projection(x, tol);
  const Element complement = order_unit(x.space(), x.level().rows) - x;
  const bool refuted = admits_refutation(x, seed, tol) || admits_refutation(complement, seed + 1, tol);
  return agreement_margin(projection, !refuted);
}

double block_measure(const Payload& p, const Tolerances& tol) {
  const auto m = block_characterization_margins(p.element("x"), p.element("y"), p.param("epsilon"), tol);
  if (m.hypothesis < -tol.psd_tol) return 0.0;
  return std::min(m.order_unit, m.absolute_order_unit);
}

double norm_measure(const Payload& p, const Tolerances& tol) {
  return -std::abs(order_unit_norm(p.element("p"), tol) - 1.0);
}

}  // namespace

std::string_view to_string(OupMode mode) {
  return mode == OupMode::OrderUnit ? "oup" : "abs_oup";
}

double projection_defect(const Element& p, const Tolerances& tol) {
  if (!p.level().square() || !p.is_hermitian(tol)) return std::numeric_limits<double>::infinity();
  const Element e = order_unit(p.space(), p.level().rows);
  return max_abs_diff(abs_value(2.0 * p - e, tol), e);
}

bool is_order_projection(const Element& p, const Tolerances& tol) {
  return projection_defect(p, tol) <= tol.eq_tol;
}

bool is_projection_by_matrix_oracle(const Element& p, const Tolerances& tol) {
  if (!p.level().square()) return false;
  return approx_equal(p, p.adjoint(), tol.eq_tol) && approx_equal(multiply(p, p), p, tol.eq_tol);
}

FaceSample face_from(const Element& x, const Element& h, const Tolerances& tol) {
  require_same_space(x, h);
  require_positive(x, tol, "face sampling");
  const Index k = x.level().rows;
  if (h.level().rows % k != 0 || h.level().cols % k != 0) {
    throw Error(ErrorKind::ShapeMismatch, "face level must be a multiple of the level of x");
  }
  const double scale = order_unit_norm(x, tol);
  std::vector<ComplexMatrix> blocks;
  for (std::size_t i = 0; i < h.blocks().size(); ++i) {
    const ComplexMatrix root = pinv_sqrt(x.block(i), tol, scale).root;
    blocks.push_back(repeat_diagonal(root, h.level().rows / k) * h.block(i) *
                     repeat_diagonal(root, h.level().cols / k));
  }
  Element y(h.space(), h.level(), std::move(blocks));
  if (h.level().square() && h.is_hermitian(tol)) y = hermitian_part_of_generated(y);
  return {std::move(y), order_unit_norm(h, tol)};
}

double face_certificate_margin(const Element& x, const FaceSample& face, const Tolerances& tol) {
  const Index k = x.level().rows;
  const Element xl = amplify(x, face.y.level().rows / k);
  const Element xm = amplify(x, face.y.level().cols / k);
  return min_eigenvalue(assemble({{{face.epsilon * xl, face.y}, {face.y.adjoint(), face.epsilon * xm}}}),
                        tol);
}

std::vector<FaceSample> sample_face(const Element& x, Index l, std::size_t count,
                                    std::uint64_t seed, const Tolerances& tol) {
  require_positive(x, tol, "face sampling");
  std::vector<FaceSample> out;
  const Index level = x.level().rows * l;
  for (std::size_t i = 0; i < count; ++i) {
    Sampler sampler(derive_seed(seed, stream_id("oup.sample_face"), i));
    out.push_back(face_from(x, sampler.hermitian_element(x.space(), level), tol));
  }
  return out;
}

std::vector<FaceSample> sample_face_general(const Element& x, Level level, std::size_t count,
                                            std::uint64_t seed, const Tolerances& tol) {
  require_positive(x, tol, "face sampling");
  std::vector<FaceSample> out;
  const Index k = x.level().rows;
  for (std::size_t i = 0; i < count; ++i) {
    Sampler sampler(derive_seed(seed, stream_id("oup.sample_face_general"), i));
    out.push_back(face_from(x, sampler.element(x.space(), {level.rows * k, level.cols * k}), tol));
  }
  return out;
}

double property_margin(const Element& target, const Element& y, OupMode mode,
                       const Tolerances& tol) {
  const double norm = order_unit_norm(y, tol);
  if (mode == OupMode::OrderUnit) {
    return std::min(min_eigenvalue(norm * target - y, tol), min_eigenvalue(norm * target + y, tol));
  }
  return min_eigenvalue(norm * target - abs_value(y, tol), tol);
}

Verdict refute_property(const Element& x, Index l, OupMode mode, std::size_t samples,
                        std::uint64_t seed, const Tolerances& tol) {
  require_positive(x, tol, "refute_property");
  const Element target = amplify(x, l);
  const bool bounded = order_unit_norm(target, tol) <= 1.0 + tol.eq_tol;

  Probe probe;
  probe.clause = mode == OupMode::OrderUnit ? kOupClause : kAbsOupClause;
  probe.relation = mode == OupMode::OrderUnit ? "+-y <= |y| x^l for y in the face of x^l"
                                              : "|y| <= |y| x^l for y in the face of x^l";
  probe.threshold = tol.psd_tol;
  probe.generate = [&](Sampler& sampler, std::size_t index) -> std::optional<Payload> {
    std::optional<FaceSample> face;
    if (index == 0 && bounded) {
      if (auto r = spectral_refutation(target, tol)) face = FaceSample{r->y, r->epsilon};
    }
    if (!face) face = face_from(target, sampler.hermitian_element(x.space(), target.level().rows), tol);
    Payload p;
    p.elements.insert_or_assign("x", target);
    p.elements.insert_or_assign("y", face->y);
    p.params["epsilon"] = face->epsilon;
    p.labels["mode"] = std::string(to_string(mode));
    return p;
  };
  probe.measure = property_measure;
  Verdict v = run_probe(probe, samples, seed, tol);
  v.note = "sampling can refute but not certify the property";
  return v;
}

std::optional<Refutation> spectral_refutation(const Element& x, const Tolerances& tol) {
  require_positive(x, tol, "spectral_refutation");
  if (order_unit_norm(x, tol) > 1.0 + tol.eq_tol) {
    throw Error(ErrorKind::PreconditionFailed, "spectral refutation needs |x| <= 1");
  }
  for (std::size_t b = 0; b < x.blocks().size(); ++b) {
    const auto eig = herm_eig(x.block(b), tol);
    std::optional<Index> inner;
    for (Index i = 0; i < eig.values.size(); ++i) {
      const double t = eig.values(i);
      if (t > tol.rank_tol && t < 1.0 - tol.rank_tol) inner = i;  // descending: ends at smallest
    }
    if (!inner) continue;

    const Eigen::VectorXcd v = phase_normalized(eig.vectors.col(*inner));
    const double t = eig.values(*inner);
    ComplexMatrix yb;
    double epsilon = 0.0;
    if (*inner == 0) {
      yb = v * v.adjoint();
      epsilon = 1.0 / t;
    } else {
      const Eigen::VectorXcd u = phase_normalized(eig.vectors.col(0));
      const double s = eig.values(0);
      yb = u * v.adjoint() + v * u.adjoint();
      epsilon = 1.0 / std::sqrt(s * t);
    }
    std::vector<ComplexMatrix> blocks;
    for (std::size_t j = 0; j < x.blocks().size(); ++j) {
      blocks.push_back(j == b ? yb : ComplexMatrix(ComplexMatrix::Zero(x.block(j).rows(), x.block(j).cols())));
    }
    Element y(x.space(), x.level(), std::move(blocks));
    const double margin = property_margin(x, y, OupMode::AbsoluteOrderUnit, tol);
    return Refutation{std::move(y), epsilon, margin};
  }
  return std::nullopt;
}

std::optional<Refutation> construct_counterexample(const Element& x, const Tolerances& tol) {
  require_positive(x, tol, "construct_counterexample");
  const double norm = order_unit_norm(x, tol);
  if (std::abs(norm - 1.0) > tol.eq_tol) {
    throw Error(ErrorKind::NotUnitNorm, "construct_counterexample needs |x| = 1, got " + std::to_string(norm));
  }
  return spectral_refutation(x, tol);
}

Verdict check_oup_characterization(const SpaceSpec& space, std::size_t samples,
                                   std::uint64_t seed, const Tolerances& tol) {
  Probe probe;
  probe.clause = kCharacterizationClause;
  probe.relation = "x is an order projection iff neither x nor e - x admits a refutation";
  probe.threshold = 0.0;
  probe.generate = [&](Sampler& s, std::size_t index) -> std::optional<Payload> {
    const Index l = s.uniform_index(1, 2);
    std::optional<Element> x;
    switch (index % 4) {
      case 0:
      case 1:
        // redraw until nonzero; |x| = 0 is outside the normalised setting
        for (int tries = 0; tries < 64 && (!x || x->is_zero(tol.eq_tol)); ++tries) {
          x = s.projection_element(space, l);
        }
        break;
      case 2: {
        std::vector<ComplexMatrix> blocks;
        for (std::size_t b = 0; b < space.size(); ++b) {
          RealVector spectrum(l * space.dim(b));
          for (Index i = 0; i < spectrum.size(); ++i) {
            const double pick = s.uniform(0.0, 1.0);
            spectrum(i) = pick < 0.25 ? 0.0 : pick < 0.5 ? 1.0 : s.uniform(0.05, 0.95);
          }
          if (b == 0) spectrum(0) = s.uniform(0.05, 0.95);
          blocks.push_back(s.with_spectrum(spectrum));
        }
        x = Element(space, {l, l}, std::move(blocks)).symmetrized();
        break;
      }
      default:
        x = s.uniform(0.05, 0.95) * order_unit(space, l);
        break;
    }
    if (x->is_zero(tol.eq_tol)) return std::nullopt;
    Payload p;
    p.elements.insert_or_assign("x", *x);
    p.params["search_seed"] = static_cast<double>(s.uniform_index(0, (Index{1} << 40)));
    return p;
  };
  probe.measure = characterization_measure;
  return run_probe(probe, samples, seed, tol);
}

BlockCharacterizationMargins block_characterization_margins(const Element& x, const Element& y,
                                                            double epsilon,
                                                            const Tolerances& tol) {
  require_same_space(x, y);
  if (!y.level().square()) throw Error(ErrorKind::NotSquareLevel, "block characterisation");
  const Index k = x.level().rows;
  const Element xl = amplify(x, y.level().rows / k);
  const double norm = order_unit_norm(y, tol);
  BlockCharacterizationMargins m;
  m.hypothesis = min_eigenvalue(assemble({{{epsilon * xl, y}, {y.adjoint(), epsilon * xl}}}), tol);
  m.order_unit = min_eigenvalue(assemble({{{norm * xl, y}, {y.adjoint(), norm * xl}}}), tol);
  m.absolute_order_unit = std::min(min_eigenvalue(norm * xl - abs_value(y, tol), tol),
                                   min_eigenvalue(norm * xl - abs_value(y.adjoint(), tol), tol));
  return m;
}

Verdict check_block_characterization(const Element& x, std::size_t samples, std::uint64_t seed,
                                     const Tolerances& tol) {
  require_positive(x, tol, "check_block_characterization");
  if (order_unit_norm(x, tol) > 1.0 + tol.eq_tol) {
    throw Error(ErrorKind::PreconditionFailed, "block characterisation needs |x| <= 1");
  }
  Probe probe;
  probe.clause = kBlockClause;
  probe.relation =
      "[[e x^l, y], [y*, e x^l]] >= 0 implies [[|y| x^l, y], [y*, |y| x^l]] >= 0 and "
      "|y| x^l - |y|, |y| x^l - |y*| >= 0";
  probe.threshold = tol.psd_tol;
  probe.generate = [&](Sampler& s, std::size_t index) -> std::optional<Payload> {
    const Index l = s.uniform_index(1, 2);
    std::optional<FaceSample> face;
    if (index == 0) {
      if (auto r = spectral_refutation(amplify(x, l), tol)) face = FaceSample{r->y, r->epsilon};
    }
    if (!face) face = face_from(x, s.element(x.space(), {l * x.level().rows, l * x.level().rows}), tol);
    Payload p;
    p.elements.insert_or_assign("x", x);
    p.elements.insert_or_assign("y", face->y);
    p.params["epsilon"] = face->epsilon;
    return p;
  };
  probe.measure = block_measure;
  Verdict v = run_probe(probe, samples, seed, tol);
  v.note = is_order_projection(x, tol)
               ? "x is an order projection"
               : "x is not an order projection; a violation refutes the absolute matrix OUP of x";
  return v;
}

Verdict projection_norm_check(const SpaceSpec& space, std::size_t samples, std::uint64_t seed,
                              const Tolerances& tol) {
  Probe probe;
  probe.clause = kNormClause;
  probe.relation = "|p| = 1 for nonzero order projections p";
  probe.threshold = 1e-9;
  probe.generate = [&](Sampler& s, std::size_t) -> std::optional<Payload> {
    const Element p = s.projection_element(space, s.uniform_index(1, 3));
    if (p.is_zero(tol.eq_tol)) return std::nullopt;
    Payload payload;
    payload.elements.insert_or_assign("p", p);
    return payload;
  };
  probe.measure = norm_measure;
  return run_probe(probe, samples, seed, tol);
}

std::vector<std::pair<std::string, MeasureFn>> oup_measures() {
  return {
      {kOupClause, property_measure},
      {kAbsOupClause, property_measure},
      {kCharacterizationClause, characterization_measure},
      {kBlockClause, block_measure},
      {kNormClause, norm_measure},
  };
}

}  // namespace ool
