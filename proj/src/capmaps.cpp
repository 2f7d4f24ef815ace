#include "ool/capmaps.hpp"

#include "ool/errors.hpp"
#include "ool/ideals.hpp"
#include "ool/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ool {

namespace {

constexpr std::size_t kKernelPerturbations = 20;
constexpr double kQuotientNormAgreement = 1e-8;
constexpr const char* kCompressionName = "compression";

std::vector<Index> parse_list(const std::string& text) {
  std::vector<Index> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoll(item));
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "bad integer '" + item + "' in map label");
    }
  }
  return out;
}

std::string join(const std::vector<Index>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

Element zero_level_one(const SpaceSpec& space) { return Element::zero(space, {1, 1}); }

double zero_margin(const Element& y) {
  return -max_abs_diff(y, Element::zero(y.space(), y.level()));
}

bool is_zero_element(const Element& y, const Tolerances& tol) { return y.is_zero(tol.eq_tol); }

// ---- measures -------------------------------------------------------------

double cap_measure(const Payload& p, const Tolerances& tol) {
  const MapUnderTest phi = resolve_map(p.label("map"));
  const Element& x = p.element("x");
  return equality_margin(abs_value(phi.apply(x), tol), phi.apply(abs_value(x, tol)));
}

StarHom hom_of(const Payload& p) { return StarHom::from_label(p.label("hom")); }

double entrywise_measure(const Payload& p, const Tolerances& tol) {
  const StarHom phi = hom_of(p);
  const Element& x = p.element("x");
  bool entrywise = true;
  for (Index i = 0; i < x.level().rows; ++i) {
    for (Index j = 0; j < x.level().cols; ++j) {
      entrywise = entrywise && is_zero_element(phi.apply(x.entry(i, j)), tol);
    }
  }
  return agreement_margin(is_zero_element(phi.apply(x), tol), entrywise);
}

double self_adjoint_measure(const Payload& p, const Tolerances& tol) {
  const StarHom phi = hom_of(p);
  const Element& x = p.element("x");
  if (!is_zero_element(phi.apply(x), tol)) return 0.0;
  return zero_margin(phi.apply(x.adjoint()));
}

double kernel_ideal_measure(const Payload& p, const Tolerances& tol) {
  const StarHom phi = hom_of(p);
  double margin = 0.0;
  if (is_zero_element(phi.apply(p.element("b")), tol)) {
    margin = std::min(margin, zero_margin(phi.apply(p.element("a"))));
  }
  const Element& x = p.element("x");
  if (is_zero_element(phi.apply(x), tol)) {
    margin = std::min(margin, zero_margin(phi.apply(abs_value(x, tol))));
  }
  return margin;
}

double zero_branch_measure(const Payload& p, const Tolerances& tol) {
  const StarHom phi = hom_of(p);
  const bool zero = phi.is_zero();
  const bool all = is_zero_element(phi.apply(p.element("x")), tol);
  const bool all_positive = is_zero_element(phi.apply(p.element("pos")), tol);
  return std::min(agreement_margin(zero, all), agreement_margin(zero, all_positive));
}

double unit_measure(const Payload& p, const Tolerances& tol) {
  const StarHom phi = hom_of(p);
  const Index l = static_cast<Index>(p.param("level"));
  return agreement_margin(phi.is_zero(), is_zero_element(phi.apply(order_unit(phi.source(), l)), tol));
}

double positivity_measure(const Payload& p, const Tolerances& tol) {
  const QuotientSpace q = quotient(hom_of(p));
  const Element& x = p.element("x");
  return agreement_margin(coset_positive(q, x, tol), coset_positive_by_representative(q, x, tol));
}

double quotient_norm_measure(const Payload& p, const Tolerances& tol) {
  const QuotientSpace q = quotient(hom_of(p));
  const Element& x = p.element("x");
  const double target = order_unit_norm(q.hom.apply(x), tol);
  return -std::max(std::abs(quotient_norm(q, x, tol) - target),
                   std::abs(order_unit_norm(representative(q, x), tol) - target));
}

double order_iso_measure(const Payload& p, const Tolerances& tol) {
  const QuotientSpace q = quotient(hom_of(p));
  const Element& x = p.element("x");
  const Element fx = q.hom.apply(x);
  double margin = equality_margin(abs_value(fx, tol), q.hom.apply(coset_abs(q, x, tol)));
  if (x.level().square() && x.is_hermitian(tol)) {
    margin = std::min(margin, agreement_margin(is_positive(fx, tol),
                                               is_positive(representative(q, x), tol)));
  }
  return margin;
}

double well_defined_measure(const Payload& p, const Tolerances& tol) {
  const QuotientSpace q = quotient(hom_of(p));
  const Element& x = p.element("x");
  const Element base = coset_abs(q, x, tol);
  double margin = 0.0;
  for (std::size_t i = 0; i < kKernelPerturbations; ++i) {
    const auto key = "z" + std::to_string(i);
    if (!p.elements.count(key)) break;
    margin = std::min(margin, equality_margin(coset_abs(q, x + p.element(key), tol), base));
  }
  return margin;
}

Payload hom_payload(const StarHom& phi) {
  Payload p;
  p.labels["hom"] = phi.label();
  return p;
}

Level random_level(Sampler& s) { return {s.uniform_index(1, 2), s.uniform_index(1, 2)}; }

}  // namespace

StarHom::StarHom(SpaceSpec source, SpaceSpec target, Multiplicity mult)
    : source_(std::move(source)), target_(std::move(target)), mult_(std::move(mult)) {
  if (mult_.size() != target_.size()) {
    throw Error(ErrorKind::ValidationError, "multiplicity matrix needs one row per target summand");
  }
  for (std::size_t j = 0; j < mult_.size(); ++j) {
    if (mult_[j].size() != source_.size()) {
      throw Error(ErrorKind::ValidationError, "multiplicity matrix needs one column per source summand");
    }
    Index used = 0;
    for (std::size_t i = 0; i < mult_[j].size(); ++i) {
      if (mult_[j][i] < 0) throw Error(ErrorKind::ValidationError, "negative multiplicity");
      used += mult_[j][i] * source_.dim(i);
    }
    if (used > target_.dim(j)) {
      throw Error(ErrorKind::ValidationError, "target summand " + std::to_string(j) + " needs " +
                                                  std::to_string(used) + " > " +
                                                  std::to_string(target_.dim(j)));
    }
  }
}

StarHom StarHom::identity(const SpaceSpec& space) {
  Multiplicity m(space.size(), std::vector<Index>(space.size(), 0));
  for (std::size_t i = 0; i < space.size(); ++i) m[i][i] = 1;
  return StarHom(space, space, std::move(m));
}

StarHom StarHom::zero(const SpaceSpec& source, const SpaceSpec& target) {
  return StarHom(source, target, Multiplicity(target.size(), std::vector<Index>(source.size(), 0)));
}

Element StarHom::apply(const Element& x) const {
  if (x.space() != source_) throw Error(ErrorKind::SpaceMismatch, "element is not over the source space");
  const Level lv = x.level();
  std::vector<ComplexMatrix> blocks;
  for (std::size_t j = 0; j < target_.size(); ++j) {
    const Index nj = target_.dim(j);
    ComplexMatrix out = ComplexMatrix::Zero(lv.rows * nj, lv.cols * nj);
    Index offset = 0;
    for (std::size_t i = 0; i < source_.size(); ++i) {
      const Index ni = source_.dim(i);
      for (Index c = 0; c < mult_[j][i]; ++c, offset += ni) {
        for (Index a = 0; a < lv.rows; ++a) {
          for (Index b = 0; b < lv.cols; ++b) {
            out.block(a * nj + offset, b * nj + offset, ni, ni) = x.block(i).block(a * ni, b * ni, ni, ni);
          }
        }
      }
    }
    blocks.push_back(std::move(out));
  }
  return Element(target_, lv, std::move(blocks));
}

bool StarHom::unital() const {
  for (std::size_t j = 0; j < target_.size(); ++j) {
    Index used = 0;
    for (std::size_t i = 0; i < source_.size(); ++i) used += mult_[j][i] * source_.dim(i);
    if (used != target_.dim(j)) return false;
  }
  return true;
}

bool StarHom::is_zero() const {
  return std::all_of(mult_.begin(), mult_.end(), [](const auto& row) {
    return std::all_of(row.begin(), row.end(), [](Index v) { return v == 0; });
  });
}

bool StarHom::retains(std::size_t i) const {
  return std::any_of(mult_.begin(), mult_.end(), [&](const auto& row) { return row.at(i) > 0; });
}

std::string StarHom::label() const {
  std::string rows;
  for (std::size_t j = 0; j < mult_.size(); ++j) rows += (j ? "/" : "") + join(mult_[j]);
  return "src=" + join(source_.summands()) + ";tgt=" + join(target_.summands()) + ";mult=" + rows;
}

StarHom StarHom::from_label(const std::string& label) {
  std::vector<Index> src;
  std::vector<Index> tgt;
  Multiplicity mult;
  std::stringstream ss(label);
  std::string field;
  bool has_mult = false;
  while (std::getline(ss, field, ';')) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "bad map label '" + label + "'");
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (key == "src") {
      src = parse_list(value);
    } else if (key == "tgt") {
      tgt = parse_list(value);
    } else if (key == "mult") {
      has_mult = true;
      std::stringstream rows(value);
      std::string row;
      while (std::getline(rows, row, '/')) mult.push_back(parse_list(row));
    } else {
      throw Error(ErrorKind::ParseError, "unknown key '" + key + "' in map label");
    }
  }
  if (src.empty() || tgt.empty() || !has_mult) {
    throw Error(ErrorKind::ParseError, "incomplete map label '" + label + "'");
  }
  if (mult.size() < tgt.size()) mult.resize(tgt.size());
  for (auto& row : mult) {
    if (row.empty()) row.assign(src.size(), 0);
  }
  return StarHom(SpaceSpec(src), SpaceSpec(tgt), std::move(mult));
}

Element LinearMap::apply(const Element& x) const {
  if (x.space() != source) throw Error(ErrorKind::SpaceMismatch, "element is not over the source space");
  std::vector<std::vector<Element>> entries;
  for (Index a = 0; a < x.level().rows; ++a) {
    entries.emplace_back();
    for (Index b = 0; b < x.level().cols; ++b) entries.back().push_back(level_one(x.entry(a, b)));
  }
  return from_entries(target, entries);
}

LinearMap corner_compression() {
  const SpaceSpec m2({2});
  const SpaceSpec m1({1});
  return LinearMap{kCompressionName, m2, m1, [m1](const Element& a) {
                     return Element(m1, {1, 1}, {ComplexMatrix::Constant(1, 1, a.block(0)(0, 0))});
                   }};
}

MapUnderTest as_map(const StarHom& phi) {
  return {phi.label(), phi.source(), [phi](const Element& x) { return phi.apply(x); }};
}

MapUnderTest as_map(const LinearMap& phi) {
  return {phi.name, phi.source, [phi](const Element& x) { return phi.apply(x); }};
}

MapUnderTest resolve_map(const std::string& label) {
  if (label == kCompressionName) return as_map(corner_compression());
  return as_map(StarHom::from_label(label));
}

Verdict check_cap(const MapUnderTest& phi, const std::vector<Index>& levels, std::size_t samples,
                  std::uint64_t seed, const Tolerances& tol) {
  if (levels.empty()) throw Error(ErrorKind::ValidationError, "level list is empty");
  std::vector<Element> units;
  for (std::size_t b = 0; b < phi.source.size(); ++b) {
    const Index n = phi.source.dim(b);
    auto unit = [&](Index j, Index k) {
      Element e = zero_level_one(phi.source);
      std::vector<ComplexMatrix> blocks = e.blocks();
      blocks[b](j, k) = 1.0;
      blocks[b](k, j) = 1.0;
      return Element(phi.source, {1, 1}, std::move(blocks));
    };
    for (Index j = 0; j < n; ++j) units.push_back(unit(j, j));
    for (Index j = 0; j < n; ++j) {
      for (Index k = j + 1; k < n; ++k) units.push_back(unit(j, k));
    }
  }

  Probe probe;
  probe.clause = "cap.abs_preserving";
  probe.relation = "|phi(x)| = phi(|x|)";
  probe.threshold = tol.eq_tol;
  probe.measure = cap_measure;
  probe.generate = [&](Sampler& s, std::size_t i) -> std::optional<Payload> {
    Payload p;
    p.labels["map"] = phi.label;
    if (i < units.size()) {
      p.elements.insert_or_assign("x", units[i]);
    } else {
      auto pick = [&] { return levels[static_cast<std::size_t>(s.uniform_index(0, static_cast<Index>(levels.size()) - 1))]; };
      const Index l = pick();
      const Index m = pick();
      p.elements.insert_or_assign("x", s.element(phi.source, {l, m}));
    }
    return p;
  };
  return run_probe(probe, samples, seed, tol);
}

std::vector<Element> kernel_basis(const StarHom& phi) {
  std::vector<Element> out;
  const SpaceSpec& space = phi.source();
  for (std::size_t b = 0; b < space.size(); ++b) {
    if (phi.retains(b)) continue;
    for (Index j = 0; j < space.dim(b); ++j) {
      for (Index k = 0; k < space.dim(b); ++k) {
        std::vector<ComplexMatrix> blocks = zero_level_one(space).blocks();
        blocks[b](j, k) = 1.0;
        out.emplace_back(space, Level{1, 1}, std::move(blocks));
      }
    }
  }
  return out;
}

Element restrict_to(const StarHom& phi, const Element& x, bool keep_retained) {
  std::vector<ComplexMatrix> blocks = x.blocks();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (phi.retains(b) != keep_retained) blocks[b].setZero();
  }
  return Element(x.space(), x.level(), std::move(blocks));
}

std::vector<Verdict> check_kernel_theorem(const StarHom& phi, std::size_t samples,
                                          std::uint64_t seed, const Tolerances& tol) {
  const SpaceSpec& space = phi.source();
  std::vector<Verdict> out;
  auto run = [&](const char* clause, const char* relation, double threshold, MeasureFn measure,
                 std::function<void(Sampler&, std::size_t, Payload&)> fill) {
    Probe probe;
    probe.clause = clause;
    probe.relation = relation;
    probe.threshold = threshold;
    probe.measure = std::move(measure);
    probe.generate = [&](Sampler& s, std::size_t i) -> std::optional<Payload> {
      Payload p = hom_payload(phi);
      fill(s, i, p);
      return p;
    };
    out.push_back(run_probe(probe, samples, seed, tol));
  };
  auto kernel_element = [&](Sampler& s, Level level) { return restrict_to(phi, s.element(space, level), false); };

  run("kernel.entrywise", "x is in Ker(phi_{l,m}) iff every entry is in Ker(phi)", 0.0,
      entrywise_measure, [&](Sampler& s, std::size_t i, Payload& p) {
        const Level level = random_level(s);
        Element x = kernel_element(s, level);
        if (i % 3 == 1) x = s.element(space, level);
        if (i % 3 == 2) {
          std::vector<std::vector<Element>> entries;
          for (Index a = 0; a < level.rows; ++a) {
            entries.emplace_back();
            for (Index b = 0; b < level.cols; ++b) entries.back().push_back(x.entry(a, b));
          }
          entries.back().back() += s.element(space, {1, 1});
          x = from_entries(space, entries);
        }
        p.elements.insert_or_assign("x", x);
      });
  run("kernel.self_adjoint", "x in Ker(phi_{l,m}) implies x* in Ker(phi_{m,l})", tol.eq_tol,
      self_adjoint_measure, [&](Sampler& s, std::size_t, Payload& p) {
        p.elements.insert_or_assign("x", kernel_element(s, random_level(s)));
      });
  run("kernel.order_ideal", "0 <= a <= b in Ker implies a in Ker, and |Ker| lies in Ker", tol.eq_tol,
      kernel_ideal_measure, [&](Sampler& s, std::size_t, Payload& p) {
        const Index l = s.uniform_index(1, 2);
        const Element b = restrict_to(phi, s.positive_element(space, l), false);
        const Element rb = b.transform([&](const ComplexMatrix& m) { return herm_sqrt(m, tol); });
        const Element c = s.uniform(0.0, 1.0) * s.positive_element(space, l);
        p.elements.insert_or_assign("b", b);
        p.elements.insert_or_assign("a", multiply(multiply(rb, c), rb).symmetrized());
        p.elements.insert_or_assign("x", kernel_element(s, random_level(s)));
      });
  run("kernel.zero_branch", "phi = 0 iff Ker = X iff Ker+ = X+", 0.0, zero_branch_measure,
      [&](Sampler& s, std::size_t, Payload& p) {
        p.elements.insert_or_assign("x", s.element(space, random_level(s)));
        p.elements.insert_or_assign("pos", s.positive_element(space, s.uniform_index(1, 2)));
      });
  run("kernel.unit_test", "phi = 0 iff phi(e) = 0", 0.0, unit_measure,
      [&](Sampler& s, std::size_t, Payload& p) { p.params["level"] = static_cast<double>(s.uniform_index(1, 3)); });
  return out;
}

std::vector<Index> QuotientSpace::retained_dims() const {
  std::vector<Index> dims;
  for (std::size_t i : retained) dims.push_back(hom.source().dim(i));
  return dims;
}

QuotientSpace quotient(const StarHom& phi) {
  QuotientSpace q{phi, {}, {}};
  for (std::size_t i = 0; i < phi.source().size(); ++i) (phi.retains(i) ? q.retained : q.dropped).push_back(i);
  return q;
}

Element representative(const QuotientSpace& q, const Element& x) { return restrict_to(q.hom, x, true); }

bool coset_positive(const QuotientSpace& q, const Element& x, const Tolerances& tol) {
  return is_positive(q.hom.apply(x), tol);
}

bool coset_positive_by_representative(const QuotientSpace& q, const Element& x,
                                      const Tolerances& tol) {
  if (!x.level().square()) throw Error(ErrorKind::NotSquareLevel, "coset positivity");
  for (std::size_t i : q.retained) {
    if (!is_hermitian(x.block(i), tol) || !is_psd(x.block(i), tol)) return false;
  }
  return true;
}

Element coset_abs(const QuotientSpace& q, const Element& x, const Tolerances& tol) {
  return representative(q, abs_value(x, tol));
}

double quotient_norm(const QuotientSpace& q, const Element& x, const Tolerances& tol) {
  const Element unit = q.hom.apply(order_unit(q.hom.source(), 1));
  const IdealHandle h(unit, tol);
  return ideal_norm(h, q.hom.apply(x), tol);
}

QuotientReport check_quotient_identification(const QuotientSpace& q, std::size_t samples,
                                             std::uint64_t seed, const Tolerances& tol) {
  const StarHom& phi = q.hom;
  const SpaceSpec& space = phi.source();
  const double unit_norm = order_unit_norm(phi.apply(order_unit(space, 1)), tol);
  if (std::abs(unit_norm - 1.0) > tol.eq_tol) {
    throw Error(ErrorKind::HypothesisUnmet, "quotient identification needs |phi(e)| = 1, got " +
                                                std::to_string(unit_norm));
  }

  QuotientReport report;
  for (std::size_t i : q.retained) report.image_dim += space.dim(i) * space.dim(i);
  for (std::size_t j = 0; j < phi.target().size(); ++j) {
    Index r = 0;
    for (std::size_t i = 0; i < space.size(); ++i) r += phi.mult()[j][i] * space.dim(i);
    report.corner_dim += r * r;
  }
  report.image_equals_corner = report.image_dim == report.corner_dim;

  auto run = [&](const char* clause, const char* relation, double threshold, MeasureFn measure,
                 std::function<void(Sampler&, std::size_t, Payload&)> fill) {
    Probe probe;
    probe.clause = clause;
    probe.relation = relation;
    probe.threshold = threshold;
    probe.measure = std::move(measure);
    probe.generate = [&](Sampler& s, std::size_t i) -> std::optional<Payload> {
      Payload p = hom_payload(phi);
      fill(s, i, p);
      return p;
    };
    report.verdicts.push_back(run_probe(probe, samples, seed, tol));
  };

  run("quotient.positivity", "Ker + x >= 0 iff phi(x) >= 0", 0.0, positivity_measure,
      [&](Sampler& s, std::size_t i, Payload& p) {
        const Index l = s.uniform_index(1, 2);
        Element x = s.hermitian_element(space, l);
        if (i % 3 != 0) {
          const Element pos = restrict_to(phi, s.positive_element(space, l), true);
          x = pos + restrict_to(phi, x, false);
        }
        p.elements.insert_or_assign("x", x);
      });
  run("quotient.norm", "|Ker + x| = |phi(x)|", kQuotientNormAgreement, quotient_norm_measure,
      [&](Sampler& s, std::size_t, Payload& p) {
        p.elements.insert_or_assign("x", s.element(space, random_level(s)));
      });
  run("quotient.order_isomorphism", "Ker + x -> phi(x) preserves |.| and the cone", tol.eq_tol,
      order_iso_measure, [&](Sampler& s, std::size_t i, Payload& p) {
        const Level level = random_level(s);
        Element x = s.element(space, level);
        if (i % 2 == 0) x = s.hermitian_element(space, level.rows);
        p.elements.insert_or_assign("x", x);
      });
  run("quotient.abs_well_defined", "|Ker + x + z| = |Ker + x| for z in Ker", tol.eq_tol,
      well_defined_measure, [&](Sampler& s, std::size_t, Payload& p) {
        const Level level = random_level(s);
        p.elements.insert_or_assign("x", s.element(space, level));
        for (std::size_t k = 0; k < kKernelPerturbations; ++k) {
          p.elements.insert_or_assign("z" + std::to_string(k),
                                      restrict_to(phi, s.element(space, level), false));
        }
      });
  report.verdicts.back().note = "representatives are canonical, so sampling guards the implementation";
  return report;
}

std::vector<std::pair<std::string, MeasureFn>> capmap_measures() {
  return {
      {"cap.abs_preserving", cap_measure},
      {"kernel.entrywise", entrywise_measure},
      {"kernel.self_adjoint", self_adjoint_measure},
      {"kernel.order_ideal", kernel_ideal_measure},
      {"kernel.zero_branch", zero_branch_measure},
      {"kernel.unit_test", unit_measure},
      {"quotient.positivity", positivity_measure},
      {"quotient.norm", quotient_norm_measure},
      {"quotient.order_isomorphism", order_iso_measure},
      {"quotient.abs_well_defined", well_defined_measure},
  };
}

}  // namespace ool
