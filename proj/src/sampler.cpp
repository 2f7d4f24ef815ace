#include "ool/sampler.hpp"

#include "ool/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ool {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) + index);
}

std::uint64_t stream_id(std::string_view name) {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double Sampler::normal() { return normal_(engine_); }

double Sampler::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

Index Sampler::uniform_index(Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(engine_);
}

bool Sampler::coin(double p_true) { return uniform(0.0, 1.0) < p_true; }

ComplexMatrix Sampler::gaussian(Index rows, Index cols) {
  ComplexMatrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const double re = normal();
      const double im = normal();
      out(i, j) = Complex(re, im);
    }
  }
  return out;
}

ComplexMatrix Sampler::hermitian(Index n) {
  const ComplexMatrix g = gaussian(n, n);
  return 0.5 * (g + g.adjoint());
}

ComplexMatrix Sampler::unitary(Index n) {
  if (n == 0) return ComplexMatrix(0, 0);
  const ComplexMatrix g = gaussian(n, n);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fixing the phases of diag(R) makes the distribution Haar.
  for (Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

ComplexMatrix Sampler::isometry(Index rows, Index cols) {
  if (cols > rows) throw Error(ErrorKind::ShapeMismatch, "isometry needs rows >= cols");
  return unitary(rows).leftCols(cols);
}

ComplexMatrix Sampler::positive(Index n) {
  const ComplexMatrix g = gaussian(n, n);
  ComplexMatrix p = g.adjoint() * g;
  p = 0.5 * (p + p.adjoint());
  const double norm = op_norm(p);
  return norm > 0 ? ComplexMatrix(p / norm) : p;
}

ComplexMatrix Sampler::projection(Index n, Index rank) {
  if (rank < 0 || rank > n) throw Error(ErrorKind::ShapeMismatch, "projection rank out of range");
  if (rank == 0) return ComplexMatrix::Zero(n, n);
  const ComplexMatrix v = isometry(n, rank);
  return v * v.adjoint();
}

ComplexMatrix Sampler::with_spectrum(const RealVector& spectrum) {
  const ComplexMatrix u = unitary(spectrum.size());
  return u * spectrum.cast<Complex>().asDiagonal() * u.adjoint();
}

Element Sampler::element(const SpaceSpec& space, Level level) {
  std::vector<ComplexMatrix> blocks;
  for (Index n : space.summands()) blocks.push_back(gaussian(level.rows * n, level.cols * n));
  return Element(space, level, std::move(blocks));
}

Element Sampler::hermitian_element(const SpaceSpec& space, Index l) {
  std::vector<ComplexMatrix> blocks;
  for (Index n : space.summands()) blocks.push_back(hermitian(l * n));
  return Element(space, {l, l}, std::move(blocks));
}

Element Sampler::positive_element(const SpaceSpec& space, Index l) {
  std::vector<ComplexMatrix> blocks;
  for (Index n : space.summands()) blocks.push_back(positive(l * n));
  return Element(space, {l, l}, std::move(blocks));
}

Element Sampler::projection_element(const SpaceSpec& space, Index l) {
  std::vector<ComplexMatrix> blocks;
  for (Index n : space.summands()) blocks.push_back(projection(l * n, uniform_index(0, l * n)));
  return Element(space, {l, l}, std::move(blocks));
}

Element Sampler::partial_isometry_element(const SpaceSpec& space, Level level) {
  std::vector<ComplexMatrix> blocks;
  for (Index n : space.summands()) {
    const ComplexMatrix g = gaussian(level.rows * n, level.cols * n);
    Eigen::JacobiSVD<ComplexMatrix> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
    // Rescale so the snap threshold 1/2 splits the spectrum nontrivially.
    RealVector s = svd.singularValues();
    const double top = s.size() ? s(0) : 0.0;
    ComplexMatrix sigma = ComplexMatrix::Zero(g.rows(), g.cols());
    for (Index i = 0; i < s.size(); ++i) {
      const double scaled = top > 0 ? s(i) / top * uniform(0.3, 1.7) : 0.0;
      sigma(i, i) = scaled > 0.5 ? 1.0 : 0.0;
    }
    blocks.push_back(svd.matrixU() * sigma * svd.matrixV().adjoint());
  }
  return Element(space, level, std::move(blocks));
}

}  // namespace ool
