#pragma once

// Dense complex linear algebra used by every other module: Hermitian spectral
// decomposition, PSD predicates, square roots, supported pseudo-inverse
// roots, singular values and 2x2 block assembly.

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <optional>

namespace ool {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

struct Tolerances {
  double psd_tol = 1e-9;   // eigenvalue floor for PSD membership
  double eq_tol = 1e-8;    // entrywise equality slack
  double rank_tol = 1e-10; // singular value cutoff, relative to the operator norm

  void validate() const;
};

struct HermitianEigen {
  RealVector values;      // descending
  ComplexMatrix vectors;  // columns, unitary
};

struct SupportedInverseRoot {
  ComplexMatrix root;
  ComplexMatrix inv_root;
  ComplexMatrix support;
};

ComplexMatrix adjoint(const ComplexMatrix& a);

/// Largest entrywise modulus of a - b; infinity on shape mismatch.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol);

/// Hermitian within `eq_tol`, scaled by max(1, largest entry).
bool is_hermitian(const ComplexMatrix& a, const Tolerances& tol = {});

HermitianEigen herm_eig(const ComplexMatrix& a, const Tolerances& tol = {});

/// Smallest eigenvalue of a Hermitian matrix; +infinity for an empty matrix.
double min_eigenvalue(const ComplexMatrix& a, const Tolerances& tol = {});

bool is_psd(const ComplexMatrix& a, const Tolerances& tol = {});

/// Eigenvalues in [-psd_tol, 0) are clamped to zero before the root is taken.
ComplexMatrix herm_sqrt(const ComplexMatrix& a, const Tolerances& tol = {});

/// Root, inverse root and support of `a` restricted to eigenvalues above
/// rank_tol * scale; scale defaults to the largest eigenvalue of `a`.
SupportedInverseRoot pinv_sqrt(const ComplexMatrix& a, const Tolerances& tol = {},
                               std::optional<double> scale = std::nullopt);

double op_norm(const ComplexMatrix& a);

/// sqrt(a* a) through the singular value decomposition a = U S V*.
ComplexMatrix polar_abs(const ComplexMatrix& a);

using BlockGrid = std::array<std::array<std::optional<ComplexMatrix>, 2>, 2>;

/// Assembles [[b00, b01], [b10, b11]]. Absent blocks are zero filled; every
/// block row and block column needs at least one present block to fix its size.
ComplexMatrix assemble(const BlockGrid& blocks);

/// sigma (x) I_n, the action of a scalar matrix on n x n entries.
ComplexMatrix kron_identity(const ComplexMatrix& sigma, Index n);

/// I_l (x) a, i.e. a (+) a (+) ... (+) a with l copies.
ComplexMatrix repeat_diagonal(const ComplexMatrix& a, Index l);

}  // namespace ool
