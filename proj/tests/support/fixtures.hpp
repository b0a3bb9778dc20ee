#ifndef MCCF_TESTS_SUPPORT_FIXTURES_HPP
#define MCCF_TESTS_SUPPORT_FIXTURES_HPP

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "core/dataset.hpp"
#include "oracles.hpp"

namespace fixture {

inline constexpr double X = oracle::kMissing;

/// Row-major users x items table; ids "u<n>" and "i<n>". Users and items are
/// inserted in index order so dense and library indices agree.
inline mccf::Dataset dataset(const Eigen::MatrixXd& r,
                             const mccf::RatingScale& scale = mccf::RatingScale::one_to_five()) {
  mccf::IdIndex users;
  mccf::IdIndex items;
  for (Eigen::Index u = 0; u < r.rows(); ++u) users.insert("u" + std::to_string(u));
  for (Eigen::Index i = 0; i < r.cols(); ++i) items.insert("i" + std::to_string(i));
  std::vector<mccf::Triplet> t;
  for (Eigen::Index u = 0; u < r.rows(); ++u)
    for (Eigen::Index i = 0; i < r.cols(); ++i)
      if (!std::isnan(r(u, i)))
        t.push_back({static_cast<mccf::Index>(u), static_cast<mccf::Index>(i), r(u, i)});
  return mccf::Dataset::from_indexed(users, items, std::move(t), scale);
}

/// Fixed 6-user x 8-item desk dataset on 1..5.
inline Eigen::MatrixXd desk() {
  Eigen::MatrixXd r(6, 8);
  r << 5, 3, 4, X, 1, 2, X, 4,
       4, X, 4, 2, 1, X, 3, 5,
       1, 1, X, 5, 4, 4, 2, X,
       X, 2, 3, 4, X, 5, 1, 2,
       2, 4, 5, X, 2, 1, 4, 4,
       3, X, 1, 4, 5, 3, X, 1;
  return r;
}

/// 4 users x 5 items.
inline Eigen::MatrixXd small_desk() {
  Eigen::MatrixXd r(4, 5);
  r << 5, 3, X, 1, 4,
       4, X, 2, 1, 5,
       1, 1, 5, X, 2,
       X, 1, 4, 5, 1;
  return r;
}

}  // namespace fixture

#endif
