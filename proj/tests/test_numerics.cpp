#include <doctest.h>

#include "ool/errors.hpp"
#include "ool/numerics.hpp"
#include "ool/sampler.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace ool;

namespace {

ComplexMatrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  ComplexMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::ValidationError;
}

}  // namespace

TEST_CASE("herm_eig on hand-solved matrices") {
  const auto id = herm_eig(ComplexMatrix::Identity(2, 2));
  CHECK(id.values(0) == doctest::Approx(1.0));
  CHECK(id.values(1) == doctest::Approx(1.0));

  const auto d = herm_eig(mat({{3, 0}, {0, -1}}));
  CHECK(d.values(0) == doctest::Approx(3.0));
  CHECK(d.values(1) == doctest::Approx(-1.0));

  const auto e = herm_eig(mat({{2, 1}, {1, 2}}));
  CHECK(e.values(0) == doctest::Approx(3.0));
  CHECK(e.values(1) == doctest::Approx(1.0));
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(std::abs(e.vectors(0, 0)) - s) < 1e-12);
  CHECK(std::abs(e.vectors(0, 0) - e.vectors(1, 0)) < 1e-12);
  CHECK(std::abs(e.vectors(0, 1) + e.vectors(1, 1)) < 1e-12);
}

TEST_CASE("herm_eig reconstructs random Hermitian matrices") {
  Sampler s(7);
  for (int i = 0; i < 50; ++i) {
    const ComplexMatrix a = s.hermitian(1 + i % 6);
    const auto eig = herm_eig(a);
    CHECK(oracle::max_diff(eig.vectors * eig.values.asDiagonal() * eig.vectors.adjoint(), a) < 1e-8);
    CHECK(oracle::max_diff(eig.vectors.adjoint() * eig.vectors, ComplexMatrix::Identity(a.rows(), a.rows())) <
          1e-8);
    for (Index k = 1; k < eig.values.size(); ++k) CHECK(eig.values(k - 1) >= eig.values(k));
  }
}

TEST_CASE("herm_eig is deterministic") {
  Sampler s(3);
  const ComplexMatrix a = s.hermitian(5);
  const auto x = herm_eig(a);
  const auto y = herm_eig(a);
  CHECK(x.values == y.values);
  CHECK(x.vectors == y.vectors);
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
  CHECK(kind_of([] { herm_eig(mat({{0, 1}, {0, 0}})); }) == ErrorKind::NotHermitian);
}

TEST_CASE("is_psd") {
  CHECK(is_psd(ComplexMatrix::Identity(3, 3)));
  CHECK_FALSE(is_psd(mat({{1, 0}, {0, -0.001}})));
  CHECK(is_psd(mat({{1, 1}, {1, 1}})));
}

TEST_CASE("herm_sqrt examples") {
  CHECK(oracle::max_diff(herm_sqrt(mat({{4, 0}, {0, 9}})), mat({{2, 0}, {0, 3}})) < 1e-12);
  CHECK(oracle::max_diff(herm_sqrt(ComplexMatrix::Identity(3, 3)), ComplexMatrix::Identity(3, 3)) < 1e-12);
  const double r3 = std::sqrt(3.0);
  const ComplexMatrix expected = mat({{(r3 + 1) / 2, (r3 - 1) / 2}, {(r3 - 1) / 2, (r3 + 1) / 2}});
  CHECK(oracle::max_diff(herm_sqrt(mat({{2, 1}, {1, 2}})), expected) < 1e-12);
}

TEST_CASE("herm_sqrt squares back and clamps tiny negatives") {
  Sampler s(11);
  for (int i = 0; i < 50; ++i) {
    const ComplexMatrix a = s.positive(1 + i % 12);
    const ComplexMatrix r = herm_sqrt(a);
    CHECK(oracle::max_diff(r * r, a) < 1e-8);
    CHECK(oracle::smallest_eigenvalue(r) >= -1e-12);
  }
  const ComplexMatrix r = herm_sqrt(mat({{1, 0}, {0, -1e-12}}));
  CHECK(r(1, 1).real() == 0.0);
  CHECK(kind_of([] { herm_sqrt(mat({{1, 0}, {0, -1e-3}})); }) == ErrorKind::NotPSD);
}

TEST_CASE("pinv_sqrt examples") {
  const auto id = pinv_sqrt(ComplexMatrix::Identity(2, 2));
  CHECK(oracle::max_diff(id.inv_root, ComplexMatrix::Identity(2, 2)) < 1e-12);
  CHECK(oracle::max_diff(id.support, ComplexMatrix::Identity(2, 2)) < 1e-12);

  const auto d = pinv_sqrt(mat({{4, 0}, {0, 0}}));
  CHECK(oracle::max_diff(d.inv_root, mat({{0.5, 0}, {0, 0}})) < 1e-12);
  CHECK(oracle::max_diff(d.support, mat({{1, 0}, {0, 0}})) < 1e-12);

  const auto c = pinv_sqrt(mat({{1, 0}, {0, 1e-14}}));
  CHECK(oracle::max_diff(c.inv_root, mat({{1, 0}, {0, 0}})) < 1e-12);
  CHECK(oracle::max_diff(c.support, mat({{1, 0}, {0, 0}})) < 1e-12);
}

TEST_CASE("pinv_sqrt cutoff follows an explicit scale") {
  // relative to its own top eigenvalue 1e-12 is kept, relative to 1 it is dropped
  const ComplexMatrix tiny = mat({{1e-12, 0}, {0, 0}});
  CHECK(pinv_sqrt(tiny).support(0, 0).real() == doctest::Approx(1.0));
  const auto scaled = pinv_sqrt(tiny, {}, 1.0);
  CHECK(scaled.support.cwiseAbs().maxCoeff() == 0.0);
  CHECK(scaled.root.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pinv_sqrt identities on random low-rank PSD matrices") {
  Sampler s(5);
  for (int i = 0; i < 50; ++i) {
    const Index n = 2 + i % 5;
    const ComplexMatrix g = s.gaussian(n, 1 + i % n);
    const ComplexMatrix a = g * g.adjoint();
    const auto r = pinv_sqrt(a);
    CHECK(oracle::max_diff(r.inv_root * a * r.inv_root, r.support) < 1e-8);
    CHECK(oracle::max_diff(r.support * a, a) < 1e-8);
    CHECK(oracle::max_diff(r.root * r.root, a) < 1e-8);
    CHECK(oracle::numerical_rank(r.support) == oracle::numerical_rank(g));
  }
}

TEST_CASE("op_norm examples") {
  CHECK(op_norm(ComplexMatrix::Zero(2, 3)) == 0.0);
  CHECK(op_norm(mat({{0, 2}, {0, 0}})) == doctest::Approx(2.0));
  Sampler s(2);
  CHECK(op_norm(s.unitary(3)) == doctest::Approx(1.0));
}

TEST_CASE("op_norm agrees with the block-certificate bisection") {
  Sampler s(13);
  for (int i = 0; i < 500; ++i) {
    const ComplexMatrix a = s.gaussian(1 + i % 4, 1 + (i / 4) % 4);
    CHECK(std::abs(op_norm(a) - oracle::bisection_norm(a)) <= 1e-6);
  }
}

TEST_CASE("polar_abs is the PSD root of a* a") {
  Sampler s(17);
  for (int i = 0; i < 100; ++i) {
    const ComplexMatrix a = s.gaussian(1 + i % 5, 1 + (i / 5) % 5);
    CHECK(oracle::abs_defect(polar_abs(a), a) < 1e-8);
  }
}

TEST_CASE("assemble") {
  BlockGrid diag;
  diag[0][0] = mat({{1}});
  diag[1][1] = mat({{2}});
  CHECK(assemble(diag) == mat({{1, 0}, {0, 2}}));

  BlockGrid full;
  full[0][0] = mat({{1}});
  full[0][1] = mat({{2}});
  full[1][0] = mat({{3}});
  full[1][1] = mat({{4}});
  CHECK(assemble(full) == mat({{1, 2}, {3, 4}}));

  const ComplexMatrix x = mat({{1, 0}, {0, 0.5}});
  const ComplexMatrix y = mat({{0, 1}, {1, 0}});
  BlockGrid cert;
  cert[0][0] = 2.0 * x;
  cert[0][1] = y;
  cert[1][0] = y.adjoint();
  cert[1][1] = 2.0 * x;
  CHECK(assemble(cert) == oracle::block_certificate(2.0 * x, y, 2.0 * x));

  BlockGrid bad;
  bad[0][0] = mat({{1, 2}});
  bad[0][1] = mat({{1}, {2}});
  bad[1][1] = mat({{1}});
  CHECK(kind_of([&] { assemble(bad); }) == ErrorKind::ShapeMismatch);
}

TEST_CASE("repeat_diagonal and kron_identity") {
  const ComplexMatrix a = mat({{1, 2}, {3, 4}});
  const ComplexMatrix r = repeat_diagonal(a, 2);
  CHECK(r.rows() == 4);
  CHECK(r.block(2, 2, 2, 2) == a);
  CHECK(r.block(0, 2, 2, 2).cwiseAbs().maxCoeff() == 0.0);
  const ComplexMatrix k = kron_identity(mat({{0, 1}}), 2);
  CHECK(k == mat({{0, 0, 1, 0}, {0, 0, 0, 1}}));
}

TEST_CASE("tolerances validate") {
  CHECK_NOTHROW(Tolerances{}.validate());
  CHECK(kind_of([] { Tolerances{-1.0, 1e-8, 1e-10}.validate(); }) == ErrorKind::ValidationError);
  CHECK(kind_of([] { Tolerances{1e-9, 1e-8, 0.0}.validate(); }) == ErrorKind::ValidationError);
}
