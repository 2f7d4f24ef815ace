#pragma once

// *-homomorphisms between finite-dimensional C*-algebras given by Bratteli
// multiplicities, their kernels and the quotient X / Ker(phi).
//
// Target summand j receives, in source order, mult[j][i] copies of summand i
// placed down the diagonal; whatever is left of the N_j x N_j block is zero.

#include "ool/space.hpp"
#include "ool/verdict.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ool {

using Multiplicity = std::vector<std::vector<Index>>;  // K x k

class StarHom {
 public:
  /// Throws ValidationError on a shape mismatch, a negative entry or an
  /// over-full target summand.
  StarHom(SpaceSpec source, SpaceSpec target, Multiplicity mult);

  static StarHom identity(const SpaceSpec& space);
  static StarHom zero(const SpaceSpec& source, const SpaceSpec& target);

  const SpaceSpec& source() const noexcept { return source_; }
  const SpaceSpec& target() const noexcept { return target_; }
  const Multiplicity& mult() const noexcept { return mult_; }

  Element apply(const Element& x) const;

  bool unital() const;
  bool is_zero() const;
  /// Summand i of the source survives iff some mult[j][i] > 0.
  bool retains(std::size_t i) const;

  /// "src=2,1;tgt=2;mult=1,0" with rows of mult separated by '/'.
  std::string label() const;
  static StarHom from_label(const std::string& label);

 private:
  SpaceSpec source_;
  SpaceSpec target_;
  Multiplicity mult_;
};

/// A map known only through its action on level-1 elements; amplified entrywise.
struct LinearMap {
  std::string name;
  SpaceSpec source;
  SpaceSpec target;
  std::function<Element(const Element&)> level_one;

  Element apply(const Element& x) const;
};

/// M_2 -> M_1, a -> a_11. Positive but not absolute value preserving.
LinearMap corner_compression();

/// A map under test: either a StarHom (by label) or a registered LinearMap.
struct MapUnderTest {
  std::string label;
  SpaceSpec source;
  std::function<Element(const Element&)> apply;
};

MapUnderTest as_map(const StarHom& phi);
MapUnderTest as_map(const LinearMap& phi);
/// Resolves a label produced by as_map (ValidationError if unknown).
MapUnderTest resolve_map(const std::string& label);

/// |phi_{l,m}(x)| = phi_m(|x|). Matrix-unit probes come first (E_jj, then
/// E_jk + E_kj in each summand), then random elements at the given levels.
Verdict check_cap(const MapUnderTest& phi, const std::vector<Index>& levels, std::size_t samples,
                  std::uint64_t seed, const Tolerances& tol = {});

/// Matrix units of the dropped summands at level 1; empty iff phi is injective.
std::vector<Element> kernel_basis(const StarHom& phi);

/// Zeroes the blocks of the retained (or, with keep_retained = false, the
/// dropped) summands.
Element restrict_to(const StarHom& phi, const Element& x, bool keep_retained);

/// kernel.entrywise, kernel.self_adjoint, kernel.order_ideal,
/// kernel.zero_branch, kernel.unit_test.
std::vector<Verdict> check_kernel_theorem(const StarHom& phi, std::size_t samples,
                                          std::uint64_t seed, const Tolerances& tol = {});

struct QuotientSpace {
  StarHom hom;
  std::vector<std::size_t> retained;
  std::vector<std::size_t> dropped;

  /// X_0 identified with the direct sum of the retained summands (empty when phi = 0).
  std::vector<Index> retained_dims() const;
};

QuotientSpace quotient(const StarHom& phi);

/// Canonical coset representative: x with the dropped summands zeroed.
Element representative(const QuotientSpace& q, const Element& x);

/// Ker + x is positive iff phi(x) is.
bool coset_positive(const QuotientSpace& q, const Element& x, const Tolerances& tol = {});

/// Positivity of the canonical representative, the second route to the same answer.
bool coset_positive_by_representative(const QuotientSpace& q, const Element& x,
                                      const Tolerances& tol = {});

/// Representative of |Ker + x| = Ker + |x|.
Element coset_abs(const QuotientSpace& q, const Element& x, const Tolerances& tol = {});

/// inf { e : [[e phi(e)^l, phi(x)], [phi(x)*, e phi(e)^m]] >= 0 }.
double quotient_norm(const QuotientSpace& q, const Element& x, const Tolerances& tol = {});

struct QuotientReport {
  std::vector<Verdict> verdicts;
  bool image_equals_corner = false;  // phi(X) = Y_{phi(e)}
  Index image_dim = 0;
  Index corner_dim = 0;
};

/// quotient.positivity, quotient.norm, quotient.order_isomorphism and
/// quotient.abs_well_defined; throws HypothesisUnmet unless |phi(e)| = 1.
QuotientReport check_quotient_identification(const QuotientSpace& q, std::size_t samples,
                                             std::uint64_t seed, const Tolerances& tol = {});

std::vector<std::pair<std::string, MeasureFn>> capmap_measures();

}  // namespace ool
