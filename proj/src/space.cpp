#include "ool/space.hpp"

#include "ool/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace ool {

SpaceSpec::SpaceSpec(std::vector<Index> summands) : summands_(std::move(summands)) {
  if (summands_.empty()) {
    throw Error(ErrorKind::ValidationError, "a space needs at least one summand");
  }
  for (Index n : summands_) {
    if (n < 1) throw Error(ErrorKind::ValidationError, "summand dimensions must be positive");
  }
}

Index SpaceSpec::total_dim() const noexcept {
  return std::accumulate(summands_.begin(), summands_.end(), Index{0});
}

std::string SpaceSpec::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < summands_.size(); ++i) {
    if (i) os << "+";
    os << "M" << summands_[i];
  }
  return os.str();
}

Element::Element(SpaceSpec space, Level level, std::vector<ComplexMatrix> blocks)
    : space_(std::move(space)), level_(level), blocks_(std::move(blocks)) {
  if (level_.rows < 0 || level_.cols < 0) {
    throw Error(ErrorKind::ShapeMismatch, "negative level");
  }
  if (blocks_.size() != space_.size()) {
    throw Error(ErrorKind::ShapeMismatch, "block count does not match the number of summands");
  }
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const Index n = space_.dim(i);
    if (blocks_[i].rows() != level_.rows * n || blocks_[i].cols() != level_.cols * n) {
      std::ostringstream os;
      os << "block " << i << " is " << blocks_[i].rows() << "x" << blocks_[i].cols()
         << ", expected " << level_.rows * n << "x" << level_.cols * n;
      throw Error(ErrorKind::ShapeMismatch, os.str());
    }
    if (!blocks_[i].allFinite()) {
      throw Error(ErrorKind::ValidationError, "element has non-finite entries");
    }
  }
}

Element Element::zero(const SpaceSpec& space, Level level) {
  std::vector<ComplexMatrix> blocks;
  for (Index n : space.summands()) {
    blocks.push_back(ComplexMatrix::Zero(level.rows * n, level.cols * n));
  }
  return Element(space, level, std::move(blocks));
}

Element Element::adjoint() const {
  std::vector<ComplexMatrix> out;
  for (const auto& b : blocks_) out.push_back(b.adjoint());
  return Element(space_, level_.transposed(), std::move(out));
}

bool Element::is_hermitian(const Tolerances& tol) const {
  if (!level_.square()) return false;
  return std::all_of(blocks_.begin(), blocks_.end(),
                     [&](const ComplexMatrix& b) { return ool::is_hermitian(b, tol); });
}

Element Element::symmetrized() const {
  if (!level_.square()) throw Error(ErrorKind::NotSquareLevel, "cannot symmetrize");
  return transform([](const ComplexMatrix& b) -> ComplexMatrix { return 0.5 * (b + b.adjoint()); });
}

bool Element::is_zero(double tol) const {
  return std::all_of(blocks_.begin(), blocks_.end(), [&](const ComplexMatrix& b) {
    return b.size() == 0 || b.cwiseAbs().maxCoeff() <= tol;
  });
}

Element Element::entry(Index i, Index j) const {
  if (i < 0 || j < 0 || i >= level_.rows || j >= level_.cols) {
    throw Error(ErrorKind::ShapeMismatch, "entry index out of range");
  }
  std::vector<ComplexMatrix> out;
  for (std::size_t s = 0; s < blocks_.size(); ++s) {
    const Index n = space_.dim(s);
    out.push_back(blocks_[s].block(i * n, j * n, n, n));
  }
  return Element(space_, {1, 1}, std::move(out));
}

Element Element::transform(const std::function<ComplexMatrix(const ComplexMatrix&)>& f) const {
  std::vector<ComplexMatrix> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(f(b));
  if (out.empty()) return *this;
  const Index n0 = space_.dim(0);
  const Level level{out[0].rows() / n0, out[0].cols() / n0};
  return Element(space_, level, std::move(out));
}

Element Element::operator-() const {
  Element out = *this;
  for (auto& b : out.blocks_) b = -b;
  return out;
}

namespace {

void require_same_shape(const Element& a, const Element& b) {
  require_same_space(a, b);
  if (a.level() != b.level()) throw Error(ErrorKind::ShapeMismatch, "levels differ");
}

}  // namespace

Element& Element::operator+=(const Element& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += other.blocks_[i];
  return *this;
}

Element& Element::operator-=(const Element& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= other.blocks_[i];
  return *this;
}

Element& Element::operator*=(Complex s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

void require_same_space(const Element& a, const Element& b) {
  if (a.space() != b.space()) {
    throw Error(ErrorKind::SpaceMismatch,
                "elements live over " + a.space().to_string() + " and " + b.space().to_string());
  }
}

Element multiply(const Element& x, const Element& y) {
  require_same_space(x, y);
  if (x.level().cols != y.level().rows) {
    throw Error(ErrorKind::ShapeMismatch, "inner levels differ in product");
  }
  std::vector<ComplexMatrix> out;
  for (std::size_t i = 0; i < x.blocks().size(); ++i) out.push_back(x.block(i) * y.block(i));
  return Element(x.space(), {x.level().rows, y.level().cols}, std::move(out));
}

double max_abs_diff(const Element& a, const Element& b) {
  if (a.space() != b.space() || a.level() != b.level()) {
    return std::numeric_limits<double>::infinity();
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.blocks().size(); ++i) {
    worst = std::max(worst, max_abs_diff(a.block(i), b.block(i)));
  }
  return worst;
}

bool approx_equal(const Element& a, const Element& b, double tol) {
  return max_abs_diff(a, b) <= tol;
}

double min_eigenvalue(const Element& x, const Tolerances& tol) {
  if (!x.level().square()) throw Error(ErrorKind::NotSquareLevel, "min_eigenvalue");
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& b : x.blocks()) lowest = std::min(lowest, min_eigenvalue(b, tol));
  return lowest;
}

Element order_unit(const SpaceSpec& space, Index l) {
  if (l < 1) throw Error(ErrorKind::ValidationError, "level must be at least 1");
  std::vector<ComplexMatrix> blocks;
  for (Index n : space.summands()) blocks.push_back(ComplexMatrix::Identity(l * n, l * n));
  return Element(space, {l, l}, std::move(blocks));
}

bool is_positive(const Element& x, const Tolerances& tol) {
  if (!x.level().square()) throw Error(ErrorKind::NotSquareLevel, "positivity needs a square level");
  for (const auto& b : x.blocks()) {
    if (!is_hermitian(b, tol)) return false;
    if (!is_psd(b, tol)) return false;
  }
  return true;
}

Element abs_value(const Element& x, const Tolerances&) {
  // The SVD route gives the same sqrt(x* x) without squaring the condition
  // number; zero singular values stay exactly zero.
  std::vector<ComplexMatrix> out;
  for (const auto& b : x.blocks()) out.push_back(polar_abs(b));
  return Element(x.space(), {x.level().cols, x.level().cols}, std::move(out));
}

Element scalar_act(const ScalarMatrix& sigma, const Element& x, Side side) {
  const ComplexMatrix& s = sigma.value;
  if (!s.allFinite()) throw Error(ErrorKind::ValidationError, "scalar matrix has non-finite entries");
  Level level = x.level();
  if (side == Side::Left) {
    if (s.cols() != level.rows) throw Error(ErrorKind::ShapeMismatch, "left scalar action");
    level.rows = s.rows();
  } else {
    if (s.rows() != level.cols) throw Error(ErrorKind::ShapeMismatch, "right scalar action");
    level.cols = s.cols();
  }
  std::vector<ComplexMatrix> out;
  for (std::size_t i = 0; i < x.blocks().size(); ++i) {
    const ComplexMatrix k = kron_identity(s, x.space().dim(i));
    out.push_back(side == Side::Left ? ComplexMatrix(k * x.block(i)) : ComplexMatrix(x.block(i) * k));
  }
  return Element(x.space(), level, std::move(out));
}

Element direct_sum(const Element& x, const Element& y) {
  require_same_space(x, y);
  std::vector<ComplexMatrix> out;
  for (std::size_t i = 0; i < x.blocks().size(); ++i) {
    const ComplexMatrix& a = x.block(i);
    const ComplexMatrix& b = y.block(i);
    ComplexMatrix m = ComplexMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    m.topLeftCorner(a.rows(), a.cols()) = a;
    m.bottomRightCorner(b.rows(), b.cols()) = b;
    out.push_back(std::move(m));
  }
  return Element(x.space(),
                 {x.level().rows + y.level().rows, x.level().cols + y.level().cols},
                 std::move(out));
}

Element amplify(const Element& x, Index l) {
  if (l < 1) throw Error(ErrorKind::ValidationError, "amplification level must be at least 1");
  std::vector<ComplexMatrix> out;
  for (const auto& b : x.blocks()) out.push_back(repeat_diagonal(b, l));
  return Element(x.space(), {x.level().rows * l, x.level().cols * l}, std::move(out));
}

Element from_entries(const SpaceSpec& space, const std::vector<std::vector<Element>>& entries) {
  if (entries.empty() || entries.front().empty()) {
    throw Error(ErrorKind::ShapeMismatch, "empty entry grid");
  }
  const Index l = static_cast<Index>(entries.size());
  const Index m = static_cast<Index>(entries.front().size());
  Element out = Element::zero(space, {l, m});
  std::vector<ComplexMatrix> blocks = out.blocks();
  for (Index i = 0; i < l; ++i) {
    if (static_cast<Index>(entries[i].size()) != m) {
      throw Error(ErrorKind::ShapeMismatch, "ragged entry grid");
    }
    for (Index j = 0; j < m; ++j) {
      const Element& e = entries[i][j];
      if (e.space() != space) throw Error(ErrorKind::SpaceMismatch, "entry over another space");
      if (e.level() != Level{1, 1}) throw Error(ErrorKind::ShapeMismatch, "entries must be level 1");
      for (std::size_t s = 0; s < blocks.size(); ++s) {
        const Index n = space.dim(s);
        blocks[s].block(i * n, j * n, n, n) = e.block(s);
      }
    }
  }
  return Element(space, {l, m}, std::move(blocks));
}

Element assemble(const ElementGrid& grid) {
  const Element* any = nullptr;
  std::array<std::optional<Index>, 2> rows;
  std::array<std::optional<Index>, 2> cols;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      if (!grid[r][c]) continue;
      if (any) require_same_space(*any, *grid[r][c]);
      any = &*grid[r][c];
      rows[r] = grid[r][c]->level().rows;
      cols[c] = grid[r][c]->level().cols;
    }
  }
  if (!any) throw Error(ErrorKind::ShapeMismatch, "empty block grid");
  if (!rows[0] || !rows[1] || !cols[0] || !cols[1]) {
    throw Error(ErrorKind::ShapeMismatch, "a block row or column has no present block");
  }
  std::vector<ComplexMatrix> out;
  for (std::size_t s = 0; s < any->blocks().size(); ++s) {
    BlockGrid blocks;
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        if (grid[r][c]) blocks[r][c] = grid[r][c]->block(s);
      }
    }
    out.push_back(assemble(blocks));
  }
  return Element(any->space(), {*rows[0] + *rows[1], *cols[0] + *cols[1]}, std::move(out));
}

double order_unit_norm(const Element& y, const Tolerances&) {
  double norm = 0.0;
  for (const auto& b : y.blocks()) norm = std::max(norm, op_norm(b));
  return norm;
}

JordanParts jordan_parts(const Element& x, const Tolerances& tol) {
  if (!x.is_hermitian(tol)) throw Error(ErrorKind::NotHermitian, "Jordan decomposition");
  std::vector<ComplexMatrix> pos;
  std::vector<ComplexMatrix> neg;
  for (const auto& b : x.blocks()) {
    const auto eig = herm_eig(b, tol);
    const RealVector plus = eig.values.cwiseMax(0.0);
    const RealVector minus = (-eig.values).cwiseMax(0.0);
    pos.push_back(eig.vectors * plus.asDiagonal() * eig.vectors.adjoint());
    neg.push_back(eig.vectors * minus.asDiagonal() * eig.vectors.adjoint());
  }
  return {Element(x.space(), x.level(), std::move(pos)), Element(x.space(), x.level(), std::move(neg))};
}

namespace {

void require_positive_pair(const Element& a, const Element& b, const Tolerances& tol) {
  require_same_shape(a, b);
  if (!is_positive(a, tol) || !is_positive(b, tol)) {
    throw Error(ErrorKind::NotPositive, "orthogonality is defined for positive elements");
  }
}

}  // namespace

bool orthogonal(const Element& a, const Element& b, const Tolerances& tol) {
  require_positive_pair(a, b, tol);
  return approx_equal(abs_value(a - b, tol), a + b, tol.eq_tol);
}

bool orthogonal_by_product(const Element& a, const Element& b, const Tolerances& tol) {
  require_positive_pair(a, b, tol);
  return multiply(a, b).is_zero(tol.eq_tol);
}

}  // namespace ool
