#pragma once

// Randomised suites for the structural axioms of an absolutely matrix ordered
// space, evaluated against a pluggable absolute value. The genuine model is
// "cstar" (|x| = sqrt(x* x)); the other registered models are deliberately
// broken and exist so that the suites can be seen to fail.

#include "ool/space.hpp"
#include "ool/verdict.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ool {

struct AbsModel {
  std::string name;
  std::function<Element(const Element&, const Tolerances&)> abs;
};

/// "cstar", "shifted" (|x| + 0.1 e), "level_scaled" (|x| scaled by
/// 1 + 0.1 (m - 1) at column level m) and "squared" (x* x, no root).
const std::vector<AbsModel>& abs_models();

/// Throws ValidationError for an unknown name.
const AbsModel& abs_model(const std::string& name);

inline constexpr Index kDefaultMaxLevel = 3;

struct AxiomConfig {
  std::vector<Index> levels{1, 2};
  std::size_t samples = 500;
  std::uint64_t seed = 0;
  Index max_level = kDefaultMaxLevel;
  std::string model = "cstar";
};

/// One verdict per clause:
///   axiom.cone_proper, axiom.archimedean, axiom.abs_even, axiom.abs_dominates,
///   axiom.abs_fixes_positive, axiom.abs_homogeneous, axiom.jordan,
///   axiom.abs_scalar_contraction  |s1 x s2| <= |s1| ||x| s2|,
///   axiom.abs_direct_sum          |x (+) y| = |x| (+) |y|,
///   prop.isometry_left, prop.offdiagonal, prop.block_positive, prop.padding,
///   prop.unitary_covariance.
/// Throws ValidationError for an empty level list and LevelTooLarge above max_level.
std::vector<Verdict> check_axioms(const SpaceSpec& space, const AxiomConfig& config,
                                  const Tolerances& tol = {});

/// p (+) q is an order projection for order projections p, q, and p (+) y is
/// not when y is not.
Verdict check_block_lemma(const SpaceSpec& space, std::size_t samples, std::uint64_t seed,
                          const Tolerances& tol = {});

std::vector<std::pair<std::string, MeasureFn>> axiom_measures();

}  // namespace ool
