#include <doctest.h>

#include <cmath>

#include "sdenkf/rng.hpp"
#include "sdenkf/transforms.hpp"

using namespace sdenkf;

namespace {

SpectralTransform make(TransformKind kind, int n) {
  switch (kind) {
    case TransformKind::Identity:
      return SpectralTransform::identity(n);
    case TransformKind::DCT:
      return SpectralTransform::dct(n);
    case TransformKind::DST:
      return SpectralTransform::dst(n);
    case TransformKind::DWT:
      return SpectralTransform::dwt(n);
  }
  throw std::logic_error("unreachable");
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("round trip and Parseval, 1-D") {
  Rng rng(7);
  for (auto kind : {TransformKind::Identity, TransformKind::DCT,
                    TransformKind::DST, TransformKind::DWT}) {
    for (int n : {8, 16, 64, 256}) {
      const SpectralTransform f = make(kind, n);
      for (int rep = 0; rep < 20; ++rep) {
        const Eigen::VectorXd v = rng.normal_vector(n);
        const Eigen::VectorXd w = f.forward(v);
        CHECK(std::abs(w.norm() - v.norm()) < 1e-10 * v.norm());
        CHECK((f.inverse(w) - v).norm() < 1e-10 * v.norm());
      }
    }
  }
}

TEST_CASE("dense matrix is orthonormal") {
  for (auto kind :
       {TransformKind::DCT, TransformKind::DST, TransformKind::DWT}) {
    for (int n : {8, 16, 64}) {
      const Eigen::MatrixXd fd = make(kind, n).dense_matrix();
      const Eigen::MatrixXd gram = fd * fd.transpose();
      CHECK(max_abs(gram - Eigen::MatrixXd::Identity(n, n)) < 1e-10);
    }
  }
}

TEST_CASE("dense matrix matches forward action") {
  Rng rng(11);
  for (auto kind :
       {TransformKind::DCT, TransformKind::DST, TransformKind::DWT}) {
    const SpectralTransform f = make(kind, 32);
    const Eigen::VectorXd v = rng.normal_vector(32);
    CHECK((f.dense_matrix() * v - f.forward(v)).norm() < 1e-12);
  }
}

TEST_CASE("orthonormal DCT at n = 2 has the known entries") {
  const SpectralTransform f = SpectralTransform::dct(2);
  Eigen::VectorXd e0(2), e1(2);
  e0 << 1, 0;
  e1 << 0, 1;
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(f.forward(e0)(0) == doctest::Approx(s).epsilon(1e-12));
  CHECK(f.forward(e0)(1) == doctest::Approx(s).epsilon(1e-12));
  CHECK(f.forward(e1)(0) == doctest::Approx(s).epsilon(1e-12));
  CHECK(f.forward(e1)(1) == doctest::Approx(-s).epsilon(1e-12));
}

TEST_CASE("2-D tensor transform equals row pass then column pass") {
  Rng rng(13);
  const int nx = 8, ny = 8;
  for (auto kind :
       {TransformKind::DCT, TransformKind::DST, TransformKind::DWT}) {
    const SpectralTransform f2 = SpectralTransform::tensor2d(kind, nx, ny);
    const Eigen::MatrixXd f1 = make(kind, nx).dense_matrix();
    Eigen::MatrixXd grid(nx, ny);
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) grid(i, j) = rng.normal();
    // rows (fixed i, varying j) then columns
    const Eigen::MatrixXd two_pass = f1 * grid * f1.transpose();
    Eigen::VectorXd flat(nx * ny);
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) flat(i * ny + j) = grid(i, j);
    const Eigen::VectorXd w = f2.forward(flat);
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j)
        CHECK(w(i * ny + j) ==
              doctest::Approx(two_pass(i, j)).epsilon(1e-10));
    CHECK((f2.inverse(w) - flat).norm() < 1e-10 * flat.norm());
  }
}

TEST_CASE("wavelet options") {
  Rng rng(17);
  const Eigen::VectorXd v = rng.normal_vector(64);

  SUBCASE("zero levels is the identity") {
    const SpectralTransform f = SpectralTransform::dwt(64, 0);
    CHECK((f.forward(v) - v).norm() == 0.0);
  }
  SUBCASE("partial depth still orthonormal") {
    const SpectralTransform f = SpectralTransform::dwt(64, 2);
    CHECK(std::abs(f.forward(v).norm() - v.norm()) < 1e-10);
    CHECK((f.inverse(f.forward(v)) - v).norm() < 1e-10 * v.norm());
  }
  SUBCASE("alternate family round trips") {
    const SpectralTransform f =
        SpectralTransform::dwt(64, -1, Wavelet::Daubechies2);
    const Eigen::MatrixXd fd = f.dense_matrix();
    CHECK(max_abs(fd * fd.transpose() - Eigen::MatrixXd::Identity(64, 64)) <
          1e-10);
  }
  SUBCASE("non power of two rejected") {
    CHECK_THROWS_AS(SpectralTransform::dwt(48), std::invalid_argument);
  }
}

TEST_CASE("ensemble application is column-wise") {
  Rng rng(19);
  const SpectralTransform f = SpectralTransform::dct(16);
  const Eigen::MatrixXd e = rng.normal_matrix(16, 5);
  const Eigen::MatrixXd w = f.forward_ensemble(e);
  for (int j = 0; j < 5; ++j)
    CHECK((w.col(j) - f.forward(e.col(j))).norm() < 1e-13);
  CHECK((f.inverse_ensemble(w) - e).norm() < 1e-10);
}

TEST_CASE("block transform acts per variable block") {
  Rng rng(23);
  const SpectralTransform f = SpectralTransform::dst(16);
  const BlockTransform b(f, 3);
  CHECK(b.length() == 48);
  const Eigen::VectorXd v = rng.normal_vector(48);
  const Eigen::VectorXd w = b.forward(v);
  for (int i = 0; i < 3; ++i)
    CHECK((w.segment(16 * i, 16) - f.forward(v.segment(16 * i, 16))).norm() <
          1e-13);
  CHECK((b.inverse(w) - v).norm() < 1e-10);
  const Eigen::MatrixXd bd = b.dense_matrix();
  CHECK(max_abs(bd * bd.transpose() - Eigen::MatrixXd::Identity(48, 48)) <
        1e-10);
}
