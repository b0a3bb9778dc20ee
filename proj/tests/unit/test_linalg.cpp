#include <cmath>
#include <random>

#include "doctest.h"

#include "core/error.hpp"
#include "linalg/decompositions.hpp"
#include "linalg/impute.hpp"
#include "linalg/pca.hpp"
#include "linalg/sparse_matrix.hpp"
#include "linalg/ssvd.hpp"
#include "linalg/tensor.hpp"
#include "oracles.hpp"

using namespace mccf;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

double orthonormality_gap(const MatrixXd& q) {
  return (q.transpose() * q - MatrixXd::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
}

Tensor3 random_tensor(Dims3 dims, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> n;
  Tensor3 t(dims);
  for (double& v : t.data()) v = n(gen);
  return t;
}

oracle::Cube to_cube(const Tensor3& t) {
  oracle::Cube c(static_cast<int>(t.dim(1)), static_cast<int>(t.dim(2)), static_cast<int>(t.dim(3)));
  for (int i = 0; i < c.d1; ++i)
    for (int j = 0; j < c.d2; ++j)
      for (int l = 0; l < c.d3; ++l)
        c.at(i, j, l) = t(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                          static_cast<std::size_t>(l));
  return c;
}

double relative_error(const Tensor3& a, const Tensor3& b) {
  double e = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    e += (a.data()[k] - b.data()[k]) * (a.data()[k] - b.data()[k]);
  return std::sqrt(e) / a.norm();
}

}  // namespace

TEST_SUITE("linalg") {
  TEST_CASE("householder basis and completion are orthonormal") {
    MatrixXd y = oracle::gaussian(8, 3, 1);
    y.col(2) = y.col(0) * 2.0;  // dependent column
    const MatrixXd q = householder_orthonormal_basis(y);
    CHECK(q.rows() == 8);
    CHECK(q.cols() == 3);
    CHECK(orthonormality_gap(q) < 1e-12);
    // Span of the first column is preserved.
    CHECK(std::abs(std::abs(q.col(0).dot(y.col(0).normalized())) - 1.0) < 1e-12);

    const MatrixXd full = orthonormal_completion(q.leftCols(2), 6);
    CHECK(full.cols() == 6);
    CHECK(orthonormality_gap(full) < 1e-12);
    CHECK((full.leftCols(2) - q.leftCols(2)).norm() == 0.0);

    CHECK(orthonormality_gap(householder_orthonormal_basis(MatrixXd::Zero(5, 2))) < 1e-12);
  }

  TEST_CASE("jacobi eigen matches the dense oracle") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const MatrixXd a = oracle::gaussian(7, 7, seed);
      const MatrixXd s = a + a.transpose();
      const SymmetricEigen e = symmetric_eigen(s);
      Eigen::SelfAdjointEigenSolver<MatrixXd> ref(s);
      const VectorXd expect = ref.eigenvalues().reverse();
      CHECK((e.values - expect).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(orthonormality_gap(e.vectors) < 1e-10);
      CHECK((s * e.vectors - e.vectors * e.values.asDiagonal()).norm() < 1e-9);
    }
  }

  TEST_CASE("column sign convention") {
    MatrixXd m(3, 2);
    m << 1, -1, -3, 2, 2, 1;
    const VectorXd signs = fix_column_signs(m);
    CHECK(signs(0) == -1.0);
    CHECK(signs(1) == 1.0);
    CHECK(m(1, 0) == 3.0);
  }

  TEST_CASE("ssvd identity") {
    SsvdOptions o;
    o.oversample = 0;
    const FactorModel f = ssvd(MatrixXd::Identity(3, 3), 3, o);
    CHECK((f.sigma - VectorXd::Ones(3)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((f.reconstruct() - MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("ssvd diagonal rank one") {
    MatrixXd a(2, 2);
    a << 3, 0, 0, 2;
    SsvdOptions o;
    o.oversample = 1;
    const FactorModel f = ssvd(a, 1, o);
    CHECK(f.sigma(0) == doctest::Approx(3.0).epsilon(1e-12));
    MatrixXd expect(2, 2);
    expect << 3, 0, 0, 0;
    CHECK((f.reconstruct() - expect).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("ssvd singular values on a 20x15 matrix") {
    const MatrixXd a = oracle::gaussian(20, 15, 42);
    SsvdOptions o;
    o.oversample = 10;
    o.power_iters = 2;
    o.seed = 5;
    const FactorModel f = ssvd(a, 5, o);
    const VectorXd ref = oracle::singular_values(a);
    for (int k = 0; k < 5; ++k) CHECK(std::abs(f.sigma(k) - ref(k)) <= 1e-6 * ref(k));
    CHECK(orthonormality_gap(f.u) < 1e-10);
    CHECK(orthonormality_gap(f.v) < 1e-10);
  }

  TEST_CASE("ssvd exact rank and full rank") {
    const MatrixXd a = oracle::gaussian(12, 1, 1) * oracle::gaussian(1, 9, 2) +
                       oracle::gaussian(12, 1, 3) * oracle::gaussian(1, 9, 4);
    const FactorModel f = ssvd(a, 2, {4, 2, 9});
    CHECK((f.reconstruct() - a).norm() <= 1e-8 * a.norm());

    const MatrixXd b = oracle::gaussian(9, 6, 8);
    const FactorModel g = truncated_svd(b, 6);
    CHECK((g.reconstruct() - b).norm() <= 1e-8 * b.norm());
  }

  TEST_CASE("ssvd frobenius error near the optimum") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const MatrixXd a = oracle::gaussian(30, 20, 100 + seed);
      const FactorModel f = ssvd(a, 5, {10, 2, seed});
      CHECK((f.reconstruct() - a).norm() <= 1.1 * oracle::eckart_young(a, 5));
    }
  }

  TEST_CASE("ssvd zero matrix pads with orthonormal completion") {
    const FactorModel f = ssvd(MatrixXd::Zero(6, 4), 2, {2, 1, 0});
    CHECK(f.sigma.cwiseAbs().maxCoeff() == 0.0);
    CHECK(orthonormality_gap(f.u) < 1e-12);
    CHECK(orthonormality_gap(f.v) < 1e-12);
  }

  TEST_CASE("ssvd rank errors") {
    const MatrixXd a = oracle::gaussian(5, 4, 0);
    CHECK_THROWS_AS(ssvd(a, 0), Error);
    CHECK_THROWS_AS(ssvd(a, 5, {0, 1, 0}), Error);
    CHECK_THROWS_AS(ssvd(a, 3, {10, 1, 0}), Error);
  }

  TEST_CASE("ssvd is deterministic for a seed") {
    const MatrixXd a = oracle::gaussian(25, 18, 3);
    const FactorModel f = ssvd(a, 4, {6, 2, 77});
    const FactorModel g = ssvd(a, 4, {6, 2, 77});
    CHECK(f.u == g.u);
    CHECK(f.sigma == g.sigma);
    CHECK(f.v == g.v);
  }

  TEST_CASE("pca on two points") {
    MatrixXd x(2, 2);
    x << -1, 0, 1, 0;
    const PcaModel m = pca(x, 1);
    CHECK(std::abs(m.components(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(m.components(1, 0)) < 1e-12);
    CHECK(m.eigenvalues(0) == doctest::Approx(2.0));
  }

  TEST_CASE("pca against the covariance oracle") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      MatrixXd x = oracle::gaussian(50, 4, seed);
      x.col(1) += 0.8 * x.col(0);
      x.col(3) = 0.5 * x.col(2) - x.col(1) + 0.1 * x.col(3);
      const PcaModel m = pca(x, 4);
      const VectorXd ref = oracle::covariance_eigenvalues(x);
      CHECK((m.eigenvalues - ref).cwiseAbs().maxCoeff() < 1e-8);
      CHECK(orthonormality_gap(m.components) < 1e-10);
      CHECK(m.eigenvalues.sum() == doctest::Approx(oracle::covariance(x).trace()).epsilon(1e-10));
      CHECK((pca_reconstruct(m, pca_project(m, x)) - x).cwiseAbs().maxCoeff() < 1e-8);
    }
  }

  TEST_CASE("pca constant column and discarded mass") {
    MatrixXd x = oracle::gaussian(40, 3, 9);
    x.col(2).setConstant(7.0);
    const PcaModel m = pca(x, 2);
    CHECK(m.components.row(2).cwiseAbs().maxCoeff() < 1e-10);
    const MatrixXd back = pca_reconstruct(m, pca_project(m, x));
    CHECK((back.col(2).array() - 7.0).abs().maxCoeff() < 1e-12);

    // Rank one plus noise: squared residual / (n - 1) is the discarded mass.
    MatrixXd y = oracle::gaussian(60, 1, 1) * oracle::gaussian(1, 3, 2) +
                 0.05 * oracle::gaussian(60, 3, 3);
    const PcaModel one = pca(y, 1);
    const double resid = (pca_reconstruct(one, pca_project(one, y)) - y).squaredNorm() / 59.0;
    const VectorXd ev = oracle::covariance_eigenvalues(y);
    CHECK(std::abs(resid - (ev(1) + ev(2))) < 1e-6);
  }

  TEST_CASE("pca errors") {
    CHECK_THROWS_AS(pca(MatrixXd::Ones(1, 3), 1), Error);
    CHECK_THROWS_AS(pca(oracle::gaussian(5, 3, 0), 4), Error);
    const PcaModel m = pca(oracle::gaussian(5, 3, 0), 2);
    CHECK_THROWS_AS(pca_project(m, MatrixXd::Ones(2, 4)), Error);
  }

  TEST_CASE("mode unfolding by index enumeration") {
    Tensor3 t({2, 2, 2});
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t l = 0; l < 2; ++l) t(i, j, l) = 4.0 * i + 2.0 * j + l + 1.0;
    const MatrixXd m1 = mode_unfold(t, 1);
    CHECK(m1.rows() == 2);
    CHECK(m1.cols() == 4);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t l = 0; l < 2; ++l) {
          CHECK(m1(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l * 2 + j)) == t(i, j, l));
          CHECK(mode_unfold(t, 2)(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i * 2 + l)) ==
                t(i, j, l));
          CHECK(mode_unfold(t, 3)(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j * 2 + i)) ==
                t(i, j, l));
        }
  }

  TEST_CASE("unfold refold round trip and scalar tensor") {
    const Tensor3 t = random_tensor({3, 4, 2}, 1);
    for (int mode = 1; mode <= 3; ++mode) {
      const Tensor3 back = mode_refold(mode_unfold(t, mode), mode, t.dims());
      CHECK(std::equal(back.data().begin(), back.data().end(), t.data().begin()));
    }
    Tensor3 s({1, 1, 1}, 2.5);
    for (int mode = 1; mode <= 3; ++mode) CHECK(mode_unfold(s, mode)(0, 0) == 2.5);
    CHECK_THROWS_AS(mode_unfold(t, 4), Error);
  }

  TEST_CASE("mode product") {
    const Tensor3 t = random_tensor({3, 4, 2}, 2);
    const Tensor3 same = mode_product(t, MatrixXd::Identity(4, 4), 2);
    CHECK(relative_error(t, same) == 0.0);

    Tensor3 one({1, 1, 1}, 2.0);
    CHECK(mode_product(one, MatrixXd::Constant(1, 1, 3.0), 1)(0, 0, 0) == 6.0);

    const MatrixXd m = oracle::gaussian(5, 3, 3);
    const Tensor3 p = mode_product(t, m, 1);
    const oracle::Cube ref = oracle::multiply(to_cube(t), m, 1);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t l = 0; l < 2; ++l)
          CHECK(std::abs(p(i, j, l) - ref.at(static_cast<int>(i), static_cast<int>(j), static_cast<int>(l))) < 1e-12);
    CHECK_THROWS_AS(mode_product(t, oracle::gaussian(2, 5, 0), 1), Error);
  }

  TEST_CASE("hosvd of an outer product") {
    VectorXd a(3), b(4), c(2);
    a << 1, 2, 2;
    b << 0, 3, 0, 4;
    c << 1, 1;
    Tensor3 t({3, 4, 2});
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t l = 0; l < 2; ++l)
          t(i, j, l) = a(static_cast<Eigen::Index>(i)) * b(static_cast<Eigen::Index>(j)) *
                       c(static_cast<Eigen::Index>(l));
    const TuckerModel m = hosvd(t, {1, 1, 1});
    CHECK(m.core.size() == 1);
    CHECK(std::abs(m.core(0, 0, 0)) == doctest::Approx(a.norm() * b.norm() * c.norm()));
    CHECK(relative_error(t, tucker_reconstruct(m)) < 1e-8);
  }

  TEST_CASE("hosvd full rank is lossless and truncation tracks the oracle") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Tensor3 t = random_tensor({3, 4, 2}, seed);
      const TuckerModel full = hosvd(t, {3, 4, 2});
      CHECK(relative_error(t, tucker_reconstruct(full)) < 1e-8);
      for (const auto& f : full.factors) CHECK(orthonormality_gap(f) < 1e-10);

      const Tensor3 u = random_tensor({4, 4, 3}, 50 + seed);
      const TuckerModel cut = hosvd(u, {2, 2, 1}, {10, 2, seed});
      CHECK(relative_error(u, tucker_reconstruct(cut)) <=
            oracle::hosvd_error(to_cube(u), 2, 2, 1) + 1e-6);
    }
    CHECK_THROWS_AS(hosvd(random_tensor({3, 3, 3}, 0), {4, 1, 1}), Error);
    CHECK_THROWS_AS(hosvd(random_tensor({3, 3, 3}, 0), {0, 1, 1}), Error);
  }

  TEST_CASE("tucker reconstruct with identity factors and zero core") {
    TuckerModel m;
    m.core = random_tensor({2, 3, 2}, 4);
    m.factors = {MatrixXd::Identity(2, 2), MatrixXd::Identity(3, 3), MatrixXd::Identity(2, 2)};
    CHECK(relative_error(m.core, tucker_reconstruct(m)) == 0.0);
    m.core = Tensor3({2, 3, 2}, 0.0);
    CHECK(tucker_reconstruct(m).norm() == 0.0);
  }

  TEST_CASE("imputation strategies") {
    // Column 0 has {2, 4}; column 2 is empty.
    SparseMatrix s(3, 3, {{0, 0, 2.0}, {1, 0, 4.0}, {0, 1, 5.0}, {2, 1, 1.0}});
    const MatrixXd item = impute_missing(s, ImputeStrategy::item_mean);
    CHECK(item(2, 0) == 3.0);
    CHECK(item(1, 1) == 3.0);
    const double global = (2.0 + 4.0 + 5.0 + 1.0) / 4.0;
    for (int u = 0; u < 3; ++u) CHECK(item(u, 2) == global);
    CHECK(item(0, 0) == 2.0);

    const MatrixXd zero = impute_missing(s, ImputeStrategy::zero);
    CHECK(zero(2, 0) == 0.0);
    CHECK(zero(2, 2) == 0.0);

    const MatrixXd user = impute_missing(s, ImputeStrategy::user_mean);
    CHECK(user(0, 2) == 3.5);
    CHECK(user(1, 1) == 4.0);

    CHECK_THROWS_AS(impute_missing(SparseMatrix(2, 2, {}), ImputeStrategy::item_mean), Error);
    CHECK(parse_impute_strategy("item_mean") == ImputeStrategy::item_mean);
  }
}
