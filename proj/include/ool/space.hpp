#pragma once

// The concrete model X = M_{n_1}(C) (+) ... (+) M_{n_k}(C). An element of
// M_{l,m}(X) is stored as one (l*n_i) x (m*n_i) matrix per summand, with the
// (a,b) entry over X occupying the n_i x n_i tile at (a*n_i, b*n_i).

#include "ool/numerics.hpp"

#include <array>
#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ool {

class SpaceSpec {
 public:
  explicit SpaceSpec(std::vector<Index> summands);

  const std::vector<Index>& summands() const noexcept { return summands_; }
  std::size_t size() const noexcept { return summands_.size(); }
  Index dim(std::size_t i) const { return summands_.at(i); }
  Index total_dim() const noexcept;
  std::string to_string() const;

  bool operator==(const SpaceSpec&) const = default;

 private:
  std::vector<Index> summands_;
};

struct Level {
  Index rows = 1;
  Index cols = 1;

  bool square() const noexcept { return rows == cols; }
  Level transposed() const noexcept { return {cols, rows}; }
  auto operator<=>(const Level&) const = default;
};

class Element {
 public:
  Element(SpaceSpec space, Level level, std::vector<ComplexMatrix> blocks);

  static Element zero(const SpaceSpec& space, Level level);

  const SpaceSpec& space() const noexcept { return space_; }
  Level level() const noexcept { return level_; }
  const std::vector<ComplexMatrix>& blocks() const noexcept { return blocks_; }
  const ComplexMatrix& block(std::size_t i) const { return blocks_.at(i); }

  Element adjoint() const;
  bool is_hermitian(const Tolerances& tol = {}) const;
  /// (x + x*)/2. Never applied implicitly.
  Element symmetrized() const;
  bool is_zero(double tol) const;

  /// The (i,j) entry of the l x m matrix over X, as a level (1,1) element.
  Element entry(Index i, Index j) const;

  Element transform(const std::function<ComplexMatrix(const ComplexMatrix&)>& f) const;

  Element operator-() const;
  Element& operator+=(const Element& other);
  Element& operator-=(const Element& other);
  Element& operator*=(Complex s);

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(Element a, Complex s) { return a *= s; }
  friend Element operator*(Complex s, Element a) { return a *= s; }
  friend Element operator*(Element a, double s) { return a *= Complex(s); }
  friend Element operator*(double s, Element a) { return a *= Complex(s); }

 private:
  SpaceSpec space_;
  Level level_;
  std::vector<ComplexMatrix> blocks_;
};

/// A scalar matrix acting on M_{l,m}(X) through sigma (x) I_{n_i}.
struct ScalarMatrix {
  ComplexMatrix value;
};

enum class Side { Left, Right };

struct JordanParts {
  Element pos;
  Element neg;
};

void require_same_space(const Element& a, const Element& b);

/// Blockwise product of x in M_{l,m}(X) and y in M_{m,s}(X).
Element multiply(const Element& x, const Element& y);

double max_abs_diff(const Element& a, const Element& b);
bool approx_equal(const Element& a, const Element& b, double tol);

/// Smallest eigenvalue over all blocks of a Hermitian square-level element.
double min_eigenvalue(const Element& x, const Tolerances& tol = {});

Element order_unit(const SpaceSpec& space, Index l);

bool is_positive(const Element& x, const Tolerances& tol = {});

/// |x| = sqrt(x* x), one block at a time.
Element abs_value(const Element& x, const Tolerances& tol = {});

Element scalar_act(const ScalarMatrix& sigma, const Element& x, Side side);

Element direct_sum(const Element& x, const Element& y);

/// x^l = x (+) ... (+) x for a square-level x.
Element amplify(const Element& x, Index l);

/// Builds the l x m matrix over X whose (i,j) entry is entries[i][j] (level 1).
Element from_entries(const SpaceSpec& space, const std::vector<std::vector<Element>>& entries);

using ElementGrid = std::array<std::array<std::optional<Element>, 2>, 2>;
Element assemble(const ElementGrid& grid);

/// Order-unit norm; in this model the largest singular value over the blocks.
double order_unit_norm(const Element& y, const Tolerances& tol = {});

JordanParts jordan_parts(const Element& x, const Tolerances& tol = {});

/// |a - b| = a + b for positive a, b.
bool orthogonal(const Element& a, const Element& b, const Tolerances& tol = {});

/// a b = 0 blockwise; the C*-model characterisation of orthogonality.
bool orthogonal_by_product(const Element& a, const Element& b, const Tolerances& tol = {});

}  // namespace ool
