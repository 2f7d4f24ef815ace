#pragma once

// Order unit property (OUP) and absolute order unit property machinery.
//
// For positive x, the face of x^l is the set of y with [[e x^l, y], [y*, e x^l]]
// positive for some e > 0. In this model that set is exactly
// { (x^l)^{1/2} k (x^l)^{1/2} } (for finite e the factor k has |k| <= e), so
// faces are sampled by congruence of random k. x has the (absolute) OUP at
// level l when every Hermitian face element y satisfies
//   |y| x^l -+ y >= 0      (OUP)
//   |y| x^l - |y| >= 0     (absolute OUP).
// Sampling can only refute these properties; certification goes through
// is_order_projection.

#include "ool/space.hpp"
#include "ool/verdict.hpp"

#include <optional>
#include <vector>

namespace ool {

struct FaceSample {
  Element y;
  double epsilon = 0.0;
};

enum class OupMode { OrderUnit, AbsoluteOrderUnit };

std::string_view to_string(OupMode mode);

/// |2p - e^l| compared with e^l; the largest entrywise deviation. Infinity
/// when p is not Hermitian at a square level.
double projection_defect(const Element& p, const Tolerances& tol = {});

bool is_order_projection(const Element& p, const Tolerances& tol = {});

/// p = p* = p^2 blockwise.
bool is_projection_by_matrix_oracle(const Element& p, const Tolerances& tol = {});

/// y = (x^l)^{1/2} h (x^m)^{1/2} with certificate e = |h|, where (l, m) is the
/// level of h and x is a positive level-1 element.
FaceSample face_from(const Element& x, const Element& h, const Tolerances& tol = {});

/// Smallest eigenvalue of [[e x^l, y], [y*, e x^m]].
double face_certificate_margin(const Element& x, const FaceSample& face,
                               const Tolerances& tol = {});

/// Hermitian face samples at level l.
std::vector<FaceSample> sample_face(const Element& x, Index l, std::size_t count,
                                    std::uint64_t seed, const Tolerances& tol = {});

/// Face samples at a rectangular level with y = (x^l)^{1/2} g (x^m)^{1/2}, e = |g|.
std::vector<FaceSample> sample_face_general(const Element& x, Level level, std::size_t count,
                                            std::uint64_t seed, const Tolerances& tol = {});

/// Smallest eigenvalue of the conclusion for a Hermitian y: min over the two
/// signs of |y| target -+ y (OrderUnit) or of |y| target - |y|.
double property_margin(const Element& target, const Element& y, OupMode mode,
                       const Tolerances& tol = {});

/// Searches the face of x^l for a y violating the chosen property. The first
/// candidate is the spectral construction below (when |x| <= 1), the rest are
/// random face samples. A pass is inconclusive.
Verdict refute_property(const Element& x, Index l, OupMode mode, std::size_t samples,
                        std::uint64_t seed, const Tolerances& tol = {});

struct Refutation {
  Element y;
  double epsilon = 0.0;
  double margin = 0.0;  // smallest eigenvalue of |y| x - |y|
};

/// Spectral refutation for a positive x with |x| <= 1. Picks the first block
/// with an eigenvalue t strictly inside (rank_tol, 1 - rank_tol), v its
/// eigenvector and u the top eigenvector s of that block:
///   u != v:  y = u v* + v u*, e = 1/sqrt(s t)
///   u == v:  y = v v*,        e = 1/t
/// so that -+y <= e x and |y| x - |y| has the eigenvalue t - 1 < 0.
/// Returns nothing iff every spectrum lies in {0, 1}.
std::optional<Refutation> spectral_refutation(const Element& x, const Tolerances& tol = {});

/// spectral_refutation restricted to unit-norm x (NotUnitNorm otherwise).
std::optional<Refutation> construct_counterexample(const Element& x, const Tolerances& tol = {});

/// For sampled 0 <= x <= e^l: x is an order projection iff neither x nor e^l - x
/// admits a refutation.
Verdict check_oup_characterization(const SpaceSpec& space, std::size_t samples,
                                   std::uint64_t seed, const Tolerances& tol = {});

struct BlockCharacterizationMargins {
  double hypothesis = 0.0;      // [[e x^l, y], [y*, e x^l]]
  double order_unit = 0.0;      // [[|y| x^l, y], [y*, |y| x^l]]
  double absolute_order_unit = 0.0;  // min of |y| x^l - |y| and |y| x^l - |y*|
};

BlockCharacterizationMargins block_characterization_margins(const Element& x, const Element& y,
                                                            double epsilon,
                                                            const Tolerances& tol = {});

/// Block form of the (absolute) matrix OUP for a positive x with |x| <= 1.
Verdict check_block_characterization(const Element& x, std::size_t samples, std::uint64_t seed,
                                     const Tolerances& tol = {});

/// Nonzero order projections have norm 1 (to within 1e-9).
Verdict projection_norm_check(const SpaceSpec& space, std::size_t samples, std::uint64_t seed,
                              const Tolerances& tol = {});

std::vector<std::pair<std::string, MeasureFn>> oup_measures();

}  // namespace ool
