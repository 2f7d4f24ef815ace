#include "ool/numerics.hpp"

#include "ool/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ool {

void Tolerances::validate() const {
  if (!(psd_tol >= 0.0) || !(eq_tol >= 0.0) || !(rank_tol >= 0.0)) {
    throw Error(ErrorKind::ValidationError, "tolerances must be nonnegative");
  }
  if (rank_tol < std::numeric_limits<double>::epsilon()) {
    throw Error(ErrorKind::ValidationError, "rank_tol must be at least machine epsilon");
  }
}

ComplexMatrix adjoint(const ComplexMatrix& a) { return a.adjoint(); }

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  return max_abs_diff(a, b) <= tol;
}

bool is_hermitian(const ComplexMatrix& a, const Tolerances& tol) {
  if (a.rows() != a.cols()) return false;
  if (a.size() == 0) return true;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return max_abs_diff(a, a.adjoint()) <= tol.eq_tol * scale;
}

namespace {

void require_hermitian(const ComplexMatrix& a, const Tolerances& tol) {
  if (!a.allFinite()) {
    throw Error(ErrorKind::NotHermitian, "matrix has non-finite entries");
  }
  if (!is_hermitian(a, tol)) {
    std::ostringstream os;
    os << a.rows() << "x" << a.cols() << " matrix is not Hermitian";
    throw Error(ErrorKind::NotHermitian, os.str());
  }
}

}  // namespace

HermitianEigen herm_eig(const ComplexMatrix& a, const Tolerances& tol) {
  require_hermitian(a, tol);
  const Index n = a.rows();
  if (n == 0) return {RealVector(0), ComplexMatrix(0, 0)};

  // The solver reads one triangle only; feeding it the exact Hermitian part
  // keeps the result independent of which triangle carries the rounding.
  const ComplexMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NoConvergence, "Hermitian eigensolver did not converge");
  }
  HermitianEigen out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

double min_eigenvalue(const ComplexMatrix& a, const Tolerances& tol) {
  if (a.size() == 0) return std::numeric_limits<double>::infinity();
  const auto eig = herm_eig(a, tol);
  return eig.values(eig.values.size() - 1);
}

bool is_psd(const ComplexMatrix& a, const Tolerances& tol) {
  return min_eigenvalue(a, tol) >= -tol.psd_tol;
}

ComplexMatrix herm_sqrt(const ComplexMatrix& a, const Tolerances& tol) {
  const auto eig = herm_eig(a, tol);
  if (a.size() == 0) return a;
  RealVector roots(eig.values.size());
  for (Index i = 0; i < eig.values.size(); ++i) {
    const double lambda = eig.values(i);
    if (lambda < -tol.psd_tol) {
      std::ostringstream os;
      os << "eigenvalue " << lambda << " below -psd_tol";
      throw Error(ErrorKind::NotPSD, os.str());
    }
    roots(i) = std::sqrt(std::max(lambda, 0.0));
  }
  return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

SupportedInverseRoot pinv_sqrt(const ComplexMatrix& a, const Tolerances& tol, std::optional<double> scale) {
  const auto eig = herm_eig(a, tol);
  const Index n = a.rows();
  SupportedInverseRoot out{ComplexMatrix::Zero(n, n), ComplexMatrix::Zero(n, n), ComplexMatrix::Zero(n, n)};
  if (n == 0) return out;
  if (eig.values(n - 1) < -tol.psd_tol) {
    std::ostringstream os;
    os << "eigenvalue " << eig.values(n - 1) << " below -psd_tol";
    throw Error(ErrorKind::NotPSD, os.str());
  }
  const double cutoff = tol.rank_tol * std::max(scale.value_or(eig.values(0)), 0.0);
  for (Index i = 0; i < n; ++i) {
    const double lambda = eig.values(i);
    if (!(lambda > cutoff)) continue;
    const auto v = eig.vectors.col(i);
    out.root += std::sqrt(lambda) * (v * v.adjoint());
    out.inv_root += (1.0 / std::sqrt(lambda)) * (v * v.adjoint());
    out.support += v * v.adjoint();
  }
  return out;
}

double op_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues()(0);
}

ComplexMatrix polar_abs(const ComplexMatrix& a) {
  const Index n = a.cols();
  if (a.size() == 0) return ComplexMatrix::Zero(n, n);
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeThinV);
  const ComplexMatrix& v = svd.matrixV();
  return v * svd.singularValues().asDiagonal() * v.adjoint();
}

ComplexMatrix assemble(const BlockGrid& blocks) {
  std::array<std::optional<Index>, 2> heights;
  std::array<std::optional<Index>, 2> widths;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      const auto& b = blocks[r][c];
      if (!b) continue;
      auto check = [&](std::optional<Index>& slot, Index value, const char* what) {
        if (slot && *slot != value) {
          std::ostringstream os;
          os << "block (" << r << "," << c << ") has " << what << " " << value
             << ", expected " << *slot;
          throw Error(ErrorKind::ShapeMismatch, os.str());
        }
        slot = value;
      };
      check(heights[r], b->rows(), "height");
      check(widths[c], b->cols(), "width");
    }
  }
  for (int i = 0; i < 2; ++i) {
    if (!heights[i] || !widths[i]) {
      throw Error(ErrorKind::ShapeMismatch, "a block row or column has no present block");
    }
  }
  ComplexMatrix out = ComplexMatrix::Zero(*heights[0] + *heights[1], *widths[0] + *widths[1]);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      if (!blocks[r][c]) continue;
      out.block(r == 0 ? 0 : *heights[0], c == 0 ? 0 : *widths[0], *heights[r], *widths[c]) =
          *blocks[r][c];
    }
  }
  return out;
}

ComplexMatrix kron_identity(const ComplexMatrix& sigma, Index n) {
  ComplexMatrix out = ComplexMatrix::Zero(sigma.rows() * n, sigma.cols() * n);
  for (Index i = 0; i < sigma.rows(); ++i) {
    for (Index j = 0; j < sigma.cols(); ++j) {
      if (sigma(i, j) == Complex(0.0)) continue;
      out.block(i * n, j * n, n, n).diagonal().setConstant(sigma(i, j));
    }
  }
  return out;
}

ComplexMatrix repeat_diagonal(const ComplexMatrix& a, Index l) {
  ComplexMatrix out = ComplexMatrix::Zero(a.rows() * l, a.cols() * l);
  for (Index k = 0; k < l; ++k) {
    out.block(k * a.rows(), k * a.cols(), a.rows(), a.cols()) = a;
  }
  return out;
}

}  // namespace ool
