#pragma once

// Order projections, partial isometries, Murray-von Neumann equivalence and
// K_0. In the matrix model a projection is classified up to equivalence by
// its rank in each summand (its dimension vector), so K_0(X) = Z^k.

#include "ool/ideals.hpp"
#include "ool/space.hpp"
#include "ool/verdict.hpp"

#include <optional>
#include <vector>

namespace ool {

class OrderProjection {
 public:
  /// Throws NotProjection unless |2p - e| = e.
  explicit OrderProjection(Element p, const Tolerances& tol = {});
  const Element& element() const noexcept { return p_; }

 private:
  Element p_;
};

bool is_partial_isometry(const Element& v, const Tolerances& tol = {});

class PartialIsometry {
 public:
  /// Throws ValidationError unless |v| and |v*| are order projections.
  explicit PartialIsometry(Element v, const Tolerances& tol = {});
  const Element& element() const noexcept { return v_; }

 private:
  Element v_;
};

using DimVector = std::vector<Index>;

struct K0Class {
  std::vector<long long> diff;

  static K0Class zero(std::size_t k) { return {std::vector<long long>(k, 0)}; }
  bool is_zero() const;

  K0Class operator-() const;
  friend K0Class operator+(const K0Class& a, const K0Class& b);
  friend K0Class operator-(const K0Class& a, const K0Class& b) { return a + (-b); }
  bool operator==(const K0Class&) const = default;
};

DimVector dimension_vector(const OrderProjection& p, const Tolerances& tol = {});

/// Orthonormal basis of the range of each block of p (phase-normalised columns).
std::vector<ComplexMatrix> range_bases(const OrderProjection& p, const Tolerances& tol = {});

struct Equivalence {
  bool equivalent = false;
  std::optional<PartialIsometry> witness;  // |v*| = p, |v| = q
};

/// p ~ q iff the dimension vectors agree; then v = sum_i u_i w_i* is built
/// from range bases of p and q and validated.
Equivalence equivalent(const OrderProjection& p, const OrderProjection& q, const Tolerances& tol = {});

/// w = y z* for |y| = |z| (PreconditionFailed otherwise); checks |w*| = |y*| and |w| = |z*|.
PartialIsometry t_witness(const PartialIsometry& y, const PartialIsometry& z, const Tolerances& tol = {});

/// p (+) 0 ~ 0 (+) q after padding both to a common level.
bool stably_equivalent(const OrderProjection& p, const OrderProjection& q, const Tolerances& tol = {});

K0Class k0_class(const OrderProjection& p, const OrderProjection& q, const Tolerances& tol = {});

struct K0Group {
  std::size_t rank = 0;
  std::vector<K0Class> generators;  // class of a rank-one projection in each summand
};

K0Group k0_group(const SpaceSpec& space);

/// X_p for a level-1 order projection p, realised as the corner algebra
/// (+)_{r_i > 0} M_{r_i}, r_i the rank of p in summand i.
class CornerInclusion {
 public:
  /// ZeroProjection for p = 0, NotProjection unless p is an order projection at level 1.
  explicit CornerInclusion(const Element& p, const Tolerances& tol = {});

  const SpaceSpec& ambient() const noexcept { return ambient_; }
  const SpaceSpec& corner() const noexcept { return corner_; }
  const std::vector<std::size_t>& retained() const noexcept { return retained_; }

  /// Compresses y in M_{l,m}(X_p) to the corner algebra.
  Element to_corner(const Element& y) const;
  /// The inverse identification; the result satisfies p^l y p^m = y.
  Element from_corner(const Element& c) const;

  /// K_0(X_p) -> K_0(X).
  K0Class map(const K0Class& c) const;
  /// Distinct generators go to independent classes.
  bool injective() const;

 private:
  SpaceSpec ambient_;
  SpaceSpec corner_;
  std::vector<std::size_t> retained_;
  std::vector<ComplexMatrix> bases_;  // per retained summand, n_i x r_i
};

/// k0.corner_diagram: chi_X of the included pair equals map(chi_{X_p}), and
/// p ~ q stably in X implies the same in X_p.
Verdict check_corner_diagram(const Element& p, std::size_t samples, std::uint64_t seed,
                             const Tolerances& tol = {});

/// k0.op_in_ideal: q in X_p iff q <= p^l iff p q p = q. Needs h built from an order projection.
Verdict check_op_in_ideal(const IdealHandle& h, std::size_t samples, std::uint64_t seed,
                          const Tolerances& tol = {});

/// k0.pi_in_ideal: v in M_{l,m}(X_p) and a partial isometry in X iff a partial isometry of X_p.
Verdict check_pi_in_ideal(const IdealHandle& h, std::size_t samples, std::uint64_t seed,
                          const Tolerances& tol = {});

/// k0.equivalence_transfer: for q1, q2 in OP(X_p), q1 ~ q2 in X iff in X_p,
/// and the witness built in X stays in the corner.
Verdict check_equivalence_transfer(const Element& p, std::size_t samples, std::uint64_t seed,
                                   const Tolerances& tol = {});

/// k0.t_witness on seeded pairs with |y| = |z|.
Verdict check_t_witness(const SpaceSpec& space, std::size_t samples, std::uint64_t seed,
                        const Tolerances& tol = {});

/// k0.equivalence_relation: reflexive, symmetric, transitive through t_witness.
Verdict check_equivalence_relation(const SpaceSpec& space, std::size_t samples, std::uint64_t seed,
                                   const Tolerances& tol = {});

/// k0.additivity: classes add under (+), [(p, p)] = 0 and [(p, q)] = 0 iff p, q stably equivalent.
Verdict check_k0_additivity(const SpaceSpec& space, std::size_t samples, std::uint64_t seed,
                            const Tolerances& tol = {});

std::vector<std::pair<std::string, MeasureFn>> ktheory_measures();

}  // namespace ool
