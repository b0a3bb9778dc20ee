#include "linalg/decompositions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "core/error.hpp"

namespace mccf {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd householder_orthonormal_basis(const MatrixXd& y) {
  const Index m = y.rows();
  const Index l = y.cols();
  if (l > m) fail(ErrorCode::dimension_mismatch, "orthonormal basis needs rows >= cols");

  MatrixXd a = y;
  std::vector<VectorXd> reflectors(static_cast<std::size_t>(l));
  for (Index j = 0; j < l; ++j) {
    VectorXd x = a.col(j).tail(m - j);
    const double norm = x.norm();
    if (norm == 0.0) continue;  // identity reflector
    const double alpha = x(0) >= 0.0 ? -norm : norm;
    x(0) -= alpha;
    const double vnorm = x.norm();
    if (vnorm == 0.0) continue;
    x /= vnorm;
    // H = I - 2 v v^T on the trailing block.
    auto block = a.bottomRightCorner(m - j, l - j);
    block.noalias() -= 2.0 * x * (x.transpose() * block);
    reflectors[static_cast<std::size_t>(j)] = std::move(x);
  }

  // Q = H_0 H_1 ... H_{l-1} applied to the first l columns of the identity.
  MatrixXd q = MatrixXd::Identity(m, l);
  for (Index j = l - 1; j >= 0; --j) {
    const VectorXd& v = reflectors[static_cast<std::size_t>(j)];
    if (v.size() == 0) continue;
    auto block = q.bottomRows(m - j);
    block.noalias() -= 2.0 * v * (v.transpose() * block);
  }
  return q;
}

MatrixXd orthonormal_completion(const MatrixXd& q, std::size_t cols) {
  const Index m = q.rows();
  const Index want = static_cast<Index>(cols);
  if (want > m) fail(ErrorCode::rank, "cannot complete beyond the row dimension");
  if (want <= q.cols()) return q.leftCols(want);

  MatrixXd padded = MatrixXd::Zero(m, want);
  padded.leftCols(q.cols()) = q;
  MatrixXd basis = householder_orthonormal_basis(padded);
  // The Householder basis reproduces q's columns up to sign; keep q exactly.
  basis.leftCols(q.cols()) = q;
  return basis;
}

VectorXd fix_column_signs(MatrixXd& m) {
  VectorXd signs = VectorXd::Ones(m.cols());
  for (Index j = 0; j < m.cols(); ++j) {
    Index arg = 0;
    double best = -1.0;
    for (Index i = 0; i < m.rows(); ++i) {
      if (std::abs(m(i, j)) > best) {
        best = std::abs(m(i, j));
        arg = i;
      }
    }
    if (m.rows() > 0 && m(arg, j) < 0.0) {
      m.col(j) *= -1.0;
      signs(j) = -1.0;
    }
  }
  return signs;
}

SymmetricEigen symmetric_eigen(const MatrixXd& s) {
  if (s.rows() != s.cols()) fail(ErrorCode::dimension_mismatch, "eigensolver needs a square matrix");
  const Index n = s.rows();
  MatrixXd a = s.triangularView<Eigen::Upper>();
  a.triangularView<Eigen::StrictlyLower>() = a.transpose().triangularView<Eigen::StrictlyLower>();
  MatrixXd v = MatrixXd::Identity(n, n);

  const double scale = a.norm();
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && scale > 0.0; ++sweep) {
    double off = 0.0;
    for (Index p = 0; p < n; ++p)
      for (Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= 1e-15 * scale) break;

    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&a](Index x, Index y) { return a(x, x) > a(y, y); });

  SymmetricEigen out{VectorXd(n), MatrixXd(n, n)};
  for (Index j = 0; j < n; ++j) {
    out.values(j) = a(order[static_cast<std::size_t>(j)], order[static_cast<std::size_t>(j)]);
    out.vectors.col(j) = v.col(order[static_cast<std::size_t>(j)]);
  }
  fix_column_signs(out.vectors);
  return out;
}

}  // namespace mccf
