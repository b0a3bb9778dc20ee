// Test-only reference implementations. Everything here works on dense
// matrices with NaN for missing cells and uses plain loops or Eigen's own
// solvers, never the library's kernels.
#ifndef MCCF_TESTS_SUPPORT_ORACLES_HPP
#define MCCF_TESTS_SUPPORT_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool has(const MatrixXd& r, Eigen::Index u, Eigen::Index i) { return !std::isnan(r(u, i)); }

// ---- random data ----------------------------------------------------------

inline MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  MatrixXd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = n(gen);
  return m;
}

// ---- dense linear algebra -------------------------------------------------

/// Singular values of `a`, descending, from the eigenvalues of A^T A.
inline VectorXd singular_values(const MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a.transpose() * a);
  VectorXd ev = es.eigenvalues().reverse();
  for (Eigen::Index k = 0; k < ev.size(); ++k) ev(k) = std::sqrt(std::max(0.0, ev(k)));
  return ev;
}

/// Frobenius error of the best rank-k approximation.
inline double eckart_young(const MatrixXd& a, Eigen::Index k) {
  const VectorXd s = singular_values(a);
  double tail = 0.0;
  for (Eigen::Index i = k; i < s.size(); ++i) tail += s(i) * s(i);
  return std::sqrt(tail);
}

/// Leading `r` eigenvectors of the symmetric m.
inline MatrixXd leading_eigenvectors(const MatrixXd& m, Eigen::Index r) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m);
  return es.eigenvectors().rowwise().reverse().leftCols(r);
}

struct Cube {
  int d1 = 0, d2 = 0, d3 = 0;
  std::vector<double> v;  // v[(i * d2 + j) * d3 + l]

  Cube(int a, int b, int c) : d1(a), d2(b), d3(c), v(static_cast<std::size_t>(a * b * c), 0.0) {}
  double& at(int i, int j, int l) { return v[static_cast<std::size_t>((i * d2 + j) * d3 + l)]; }
  double at(int i, int j, int l) const {
    return v[static_cast<std::size_t>((i * d2 + j) * d3 + l)];
  }
  double norm() const {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  }
};

/// Rows index mode `mode`; columns enumerate the other two indices in any
/// fixed order (the Gram matrix does not depend on it).
inline MatrixXd flatten(const Cube& t, int mode) {
  const int rows = mode == 1 ? t.d1 : mode == 2 ? t.d2 : t.d3;
  MatrixXd m(rows, static_cast<Eigen::Index>(t.v.size()) / rows);
  std::vector<int> col(static_cast<std::size_t>(rows), 0);
  for (int i = 0; i < t.d1; ++i)
    for (int j = 0; j < t.d2; ++j)
      for (int l = 0; l < t.d3; ++l) {
        const int r = mode == 1 ? i : mode == 2 ? j : l;
        m(r, col[static_cast<std::size_t>(r)]++) = t.at(i, j, l);
      }
  return m;
}

/// T x_mode M by direct summation.
inline Cube multiply(const Cube& t, const MatrixXd& m, int mode) {
  const int n = static_cast<int>(m.rows());
  Cube out(mode == 1 ? n : t.d1, mode == 2 ? n : t.d2, mode == 3 ? n : t.d3);
  for (int i = 0; i < out.d1; ++i)
    for (int j = 0; j < out.d2; ++j)
      for (int l = 0; l < out.d3; ++l) {
        double s = 0.0;
        if (mode == 1)
          for (int a = 0; a < t.d1; ++a) s += m(i, a) * t.at(a, j, l);
        else if (mode == 2)
          for (int a = 0; a < t.d2; ++a) s += m(j, a) * t.at(i, a, l);
        else
          for (int a = 0; a < t.d3; ++a) s += m(l, a) * t.at(i, j, a);
        out.at(i, j, l) = s;
      }
  return out;
}

/// Relative reconstruction error of an eigensolver-based HOSVD.
inline double hosvd_error(const Cube& t, int r1, int r2, int r3) {
  const int ranks[3] = {r1, r2, r3};
  MatrixXd u[3];
  for (int s = 0; s < 3; ++s) {
    const MatrixXd f = flatten(t, s + 1);
    u[s] = leading_eigenvectors(f * f.transpose(), ranks[s]);
  }
  Cube core = t;
  for (int s = 0; s < 3; ++s) core = multiply(core, u[s].transpose(), s + 1);
  Cube back = core;
  for (int s = 0; s < 3; ++s) back = multiply(back, u[s], s + 1);
  double e = 0.0;
  for (std::size_t k = 0; k < t.v.size(); ++k) e += (t.v[k] - back.v[k]) * (t.v[k] - back.v[k]);
  return std::sqrt(e) / t.norm();
}

/// Sample covariance (divisor obs - 1) by explicit loops.
inline MatrixXd covariance(const MatrixXd& x) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  VectorXd mean = VectorXd::Zero(p);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < p; ++c) mean(c) += x(r, c);
  mean /= static_cast<double>(n);
  MatrixXd cov = MatrixXd::Zero(p, p);
  for (Eigen::Index a = 0; a < p; ++a)
    for (Eigen::Index b = 0; b < p; ++b) {
      double s = 0.0;
      for (Eigen::Index r = 0; r < n; ++r) s += (x(r, a) - mean(a)) * (x(r, b) - mean(b));
      cov(a, b) = s / static_cast<double>(n - 1);
    }
  return cov;
}

inline VectorXd covariance_eigenvalues(const MatrixXd& x) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(covariance(x));
  return es.eigenvalues().reverse();
}

// ---- similarity -----------------------------------------------------------

enum class Kind { pearson, euclidean, loglikelihood, tanimoto, adjusted_cosine, cosine };

/// G statistic in entropy form: 2 N (H(rows) + H(cols) - H(cells)), each
/// N H term computed as N ln N - sum x ln x.
inline double llr_entropy(double k11, double k12, double k21, double k22) {
  auto xlx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
  auto ent = [&](std::initializer_list<double> xs) {
    double sum = 0.0;
    double acc = 0.0;
    for (double x : xs) {
      sum += x;
      acc += xlx(x);
    }
    return xlx(sum) - acc;
  };
  const double row = ent({k11 + k12, k21 + k22});
  const double col = ent({k11 + k21, k12 + k22});
  const double mat = ent({k11, k12, k21, k22});
  return std::max(0.0, 2.0 * (row + col - mat));
}

inline double user_mean(const MatrixXd& r, Eigen::Index u) {
  double s = 0.0;
  int n = 0;
  for (Eigen::Index i = 0; i < r.cols(); ++i)
    if (has(r, u, i)) {
      s += r(u, i);
      ++n;
    }
  return n ? s / n : 0.0;
}

/// Similarity of items i and j with the library's defaults: min co-ratings
/// of 2 for value kinds and 1 for set kinds, normalised euclidean.
inline std::optional<double> similarity(const MatrixXd& r, Kind kind, Eigen::Index i,
                                        Eigen::Index j) {
  std::vector<double> x, y, mu;
  int only_i = 0, only_j = 0;
  for (Eigen::Index u = 0; u < r.rows(); ++u) {
    const bool a = has(r, u, i);
    const bool b = has(r, u, j);
    if (a && b) {
      x.push_back(r(u, i));
      y.push_back(r(u, j));
      mu.push_back(user_mean(r, u));
    } else if (a) {
      ++only_i;
    } else if (b) {
      ++only_j;
    }
  }
  const double n = static_cast<double>(x.size());
  if (kind == Kind::tanimoto || kind == Kind::loglikelihood) {
    if (x.empty()) return std::nullopt;
    if (kind == Kind::tanimoto) return n / (n + only_i + only_j);
    const double rest = static_cast<double>(r.rows()) - n - only_i - only_j;
    const double llr = llr_entropy(n, only_i, only_j, rest);
    return 1.0 - 1.0 / (1.0 + llr);
  }
  if (x.size() < 2) return std::nullopt;
  if (kind == Kind::euclidean) {
    double d = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) d += (x[k] - y[k]) * (x[k] - y[k]);
    return 1.0 / (1.0 + std::sqrt(d) / std::sqrt(n));
  }
  double cx = 0.0, cy = 0.0;
  if (kind == Kind::pearson) {
    for (std::size_t k = 0; k < x.size(); ++k) {
      cx += x[k] / n;
      cy += y[k] / n;
    }
  }
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double ox = kind == Kind::adjusted_cosine ? mu[k] : cx;
    const double oy = kind == Kind::adjusted_cosine ? mu[k] : cy;
    sxy += (x[k] - ox) * (y[k] - oy);
    sxx += (x[k] - ox) * (x[k] - ox);
    syy += (y[k] - oy) * (y[k] - oy);
  }
  if (sxx < 1e-12 || syy < 1e-12) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

using SimTable = std::map<std::pair<Eigen::Index, Eigen::Index>, double>;

inline SimTable all_pairs(const MatrixXd& r, Kind kind) {
  SimTable out;
  for (Eigen::Index i = 0; i < r.cols(); ++i)
    for (Eigen::Index j = 0; j < r.cols(); ++j)
      if (i != j)
        if (auto s = similarity(r, kind, i, j)) out[{i, j}] = *s;
  return out;
}

// ---- prediction -----------------------------------------------------------

enum class Weights { positive, signed_abs, signed_sum };

struct Spec {
  Weights weights = Weights::positive;
  std::size_t min_support = 1;
  std::size_t max_neighbors = 0;  // 0 = all
  double lo = 1.0;
  double hi = 5.0;
};

inline std::optional<double> predict(const MatrixXd& r, const SimTable& sims, Eigen::Index u,
                                     Eigen::Index i, const Spec& spec) {
  std::vector<std::pair<double, Eigen::Index>> cand;  // (sim, item)
  for (Eigen::Index j = 0; j < r.cols(); ++j) {
    if (j == i || !has(r, u, j)) continue;
    auto it = sims.find({i, j});
    if (it == sims.end()) continue;
    if (spec.weights == Weights::positive && it->second <= 0.0) continue;
    cand.push_back({it->second, j});
  }
  if (spec.max_neighbors && cand.size() > spec.max_neighbors) {
    std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    cand.resize(spec.max_neighbors);
  }
  if (cand.empty() || cand.size() < spec.min_support) return std::nullopt;
  double num = 0.0, den = 0.0;
  for (const auto& [s, j] : cand) {
    num += s * r(u, j);
    den += spec.weights == Weights::signed_sum ? s : std::abs(s);
  }
  if (std::abs(den) < 1e-12) return std::nullopt;
  return std::clamp(num / den, spec.lo, spec.hi);
}

/// (item, value) for every unrated item, ordered by value then item.
inline std::vector<std::pair<Eigen::Index, double>> top_n(const MatrixXd& r, const SimTable& sims,
                                                          Eigen::Index u, const Spec& spec,
                                                          std::size_t n) {
  std::vector<std::pair<Eigen::Index, double>> out;
  for (Eigen::Index i = 0; i < r.cols(); ++i) {
    if (has(r, u, i)) continue;
    if (auto p = predict(r, sims, u, i, spec)) out.push_back({i, *p});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (out.size() > n) out.resize(n);
  return out;
}

// ---- density filter ------------------------------------------------------

/// Largest record subset in which every remaining user and item meets its
/// threshold, by enumerating user and item subsets. Records are (user, item)
/// pairs over small integer ids.
inline std::set<std::pair<int, int>> filter_fixpoint(const std::vector<std::pair<int, int>>& recs,
                                                     int users, int items, std::size_t min_user,
                                                     std::size_t min_item) {
  std::set<std::pair<int, int>> best;
  for (int um = 0; um < (1 << users); ++um)
    for (int im = 0; im < (1 << items); ++im) {
      std::set<std::pair<int, int>> kept;
      std::vector<std::size_t> uc(static_cast<std::size_t>(users), 0);
      std::vector<std::size_t> ic(static_cast<std::size_t>(items), 0);
      for (const auto& [u, i] : recs)
        if ((um >> u & 1) && (im >> i & 1)) {
          kept.insert({u, i});
          ++uc[static_cast<std::size_t>(u)];
          ++ic[static_cast<std::size_t>(i)];
        }
      bool ok = true;
      for (const auto& [u, i] : kept)
        if (uc[static_cast<std::size_t>(u)] < min_user || ic[static_cast<std::size_t>(i)] < min_item)
          ok = false;
      if (ok && kept.size() > best.size()) best = kept;
    }
  return best;
}

}  // namespace oracle

#endif
