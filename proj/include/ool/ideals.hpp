#pragma once

// The hereditary ideal X_x generated by a positive x with |x| = 1:
// y in M_{l,m}(X) belongs to M_{l,m}(X_x) when [[e x^l, y], [y*, e x^m]] >= 0
// for some e > 0. In the matrix model this happens exactly when
// y = (x^l)^{1/2} k (x^m)^{1/2}, and the least such e is |k| for the
// supported factor k = (x^l)^{-1/2} y (x^m)^{-1/2}.

#include "ool/space.hpp"
#include "ool/verdict.hpp"

#include <optional>
#include <vector>

namespace ool {

class IdealHandle {
 public:
  /// Throws NotPositive / NotSquareLevel for a bad x and NotUnitNorm when |x| != 1.
  explicit IdealHandle(Element x, const Tolerances& tol = {});

  const Element& x() const noexcept { return x_; }
  const SpaceSpec& space() const noexcept { return x_.space(); }
  bool is_projection() const noexcept { return is_projection_; }

  ComplexMatrix root(std::size_t block, Index level) const;
  ComplexMatrix inv_root(std::size_t block, Index level) const;
  ComplexMatrix support(std::size_t block, Index level) const;

  /// Smallest eigenvalue of x above the rank cutoff, over all blocks.
  double min_positive_eigenvalue() const noexcept { return min_positive_; }

 private:
  Element x_;
  std::vector<ComplexMatrix> root_;
  std::vector<ComplexMatrix> inv_root_;
  std::vector<ComplexMatrix> support_;
  double min_positive_ = 0.0;
  bool is_projection_ = false;
};

struct MembershipResult {
  bool member = false;
  std::optional<double> min_epsilon;
  std::optional<Element> witness;  // the factor k
  double residual = 0.0;           // |(x^l)^{1/2} k (x^m)^{1/2} - y|_max
};

MembershipResult membership(const IdealHandle& h, const Element& y, const Tolerances& tol = {});

struct BisectionResult {
  bool feasible = false;
  double epsilon = 0.0;
  double cap = 0.0;
};

/// Smallest e in [0, cap] with the block certificate PSD, by bisection;
/// cap = 10 |y| / lambda_min^+(x). Infeasible at the cap means "not found",
/// which for members can only happen beyond the cap.
BisectionResult bisection_membership(const IdealHandle& h, const Element& y,
                                     const Tolerances& tol = {});

/// Smallest eigenvalue of [[e x^l, y], [y*, e x^m]].
double certificate_margin(const IdealHandle& h, const Element& y, double epsilon,
                          const Tolerances& tol = {});

/// min_epsilon of a member; NotMember otherwise.
double ideal_norm(const IdealHandle& h, const Element& y, const Tolerances& tol = {});

/// p^l y p^m for an order projection p at level 1 (NotProjection otherwise).
Element corner_oracle(const Element& p, const Element& y, const Tolerances& tol = {});

/// Random positive unit-norm x at level 1 with spectrum in {0} u [0.1, 1]
/// (or {0, 1} when `projection`); the top eigenvalue of the first block is 1.
Element sample_ideal_generator(const SpaceSpec& space, Sampler& s, bool projection);

/// Random member of M_{l,m}(X_x): (x^l)^{1/2} g (x^m)^{1/2} for Gaussian g.
Element sample_member(const IdealHandle& h, Sampler& s, Level level);

/// 0 <= a <= b with b a positive member implies a is a member, sampled with
/// a = b^{1/2} c b^{1/2} for 0 <= c <= 1.
Verdict check_order_ideal(const IdealHandle& h, std::size_t samples, std::uint64_t seed,
                          const Tolerances& tol = {});

/// The same sampling run against the scalar subspace {t e}, which is not an
/// order ideal; the verdict is expected to fail.
Verdict check_order_ideal_control(const SpaceSpec& space, std::size_t samples, std::uint64_t seed,
                                  const Tolerances& tol = {});

/// ideal.entrywise_membership, ideal.proper_cone, ideal.order_unit,
/// ideal.norm_agreement (informational unless x is an order projection),
/// ideal.abs_closed.
std::vector<Verdict> check_ideal_theorem(const IdealHandle& h, std::size_t samples,
                                         std::uint64_t seed, const Tolerances& tol = {});

/// Closed form vs bisection on random (x, y): identical member flags and
/// min_epsilon within 1e-6.
Verdict check_membership_bisection(const SpaceSpec& space, std::size_t samples, std::uint64_t seed,
                                   const Tolerances& tol = {});

/// For random order projections p: y is a member iff p y p = y.
Verdict check_membership_corner(const SpaceSpec& space, std::size_t samples, std::uint64_t seed,
                                const Tolerances& tol = {});

std::vector<std::pair<std::string, MeasureFn>> ideal_measures();

}  // namespace ool
