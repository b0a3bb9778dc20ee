#include "ingest/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "core/error.hpp"
#include "linalg/decompositions.hpp"

namespace mccf {

using Eigen::MatrixXd;

namespace {

MatrixXd gaussian(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = normal(rng);
  return m;
}

// Orthonormal columns spanning the all-ones vector, so a constant offset
// stays inside the Tucker model.
MatrixXd factor_with_constant(std::mt19937_64& rng, std::size_t rows, std::size_t rank) {
  MatrixXd m = gaussian(rng, rows, rank);
  m.col(0).setOnes();
  return householder_orthonormal_basis(m);
}

}  // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  const int k = spec.criteria;
  if (k < 1) fail(ErrorCode::invalid_argument, "need at least one criterion");
  if (spec.users < 1 || spec.items < 1) fail(ErrorCode::invalid_argument, "empty shape");
  const auto kk = static_cast<std::size_t>(k);
  const auto [r1, r2, r3] = spec.ranks;
  if (r1 < 1 || r1 > spec.users || r2 < 1 || r2 > spec.items || r3 < 1 || r3 > kk)
    fail(ErrorCode::rank, "synthetic ranks do not fit the shape");
  if (!(spec.density > 0.0 && spec.density <= 1.0))
    fail(ErrorCode::invalid_argument, "density must lie in (0, 1]");
  if (!(spec.noise >= 0.0)) fail(ErrorCode::invalid_argument, "noise must be non-negative");

  std::mt19937_64 rng(spec.seed);
  const MatrixXd u1 = factor_with_constant(rng, spec.users, r1);
  const MatrixXd u2 = factor_with_constant(rng, spec.items, r2);
  MatrixXd w = gaussian(rng, kk, r3);
  w.col(0).setOnes();
  MatrixXd w3(static_cast<Eigen::Index>(kk + 1), static_cast<Eigen::Index>(r3));
  w3.row(0) = w.colwise().mean();
  w3.bottomRows(static_cast<Eigen::Index>(kk)) = w;

  Tensor3 core({r1, r2, r3});
  {
    const MatrixXd g = gaussian(rng, r1 * r2 * r3, 1);
    std::copy(g.data(), g.data() + g.size(), core.data().begin());
  }
  Tensor3 truth = mode_product(core, u1, 1);
  truth = mode_product(truth, u2, 2);
  truth = mode_product(truth, w3, 3);

  // Affine map into the scale: centred, spread one sixth of the range, shrunk
  // further if any value would leave the range.
  auto values = truth.data();
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  double max_dev = 0.0;
  for (double v : values) {
    var += (v - mean) * (v - mean);
    max_dev = std::max(max_dev, std::abs(v - mean));
  }
  const double sd = std::sqrt(var / static_cast<double>(values.size()));
  const double lo = spec.scale.min_value();
  const double hi = spec.scale.max_value();
  const double centre = 0.5 * (lo + hi);
  double gain = sd > 0.0 ? (hi - lo) / 6.0 / sd : 0.0;
  if (max_dev > 0.0) gain = std::min(gain, 0.49 * (hi - lo) / max_dev);
  for (double& v : values) v = centre + gain * (v - mean);

  SyntheticData out;
  std::bernoulli_distribution observe(spec.density);
  std::normal_distribution<double> noise(0.0, spec.noise > 0.0 ? spec.noise : 1.0);
  for (std::size_t u = 0; u < spec.users; ++u)
    for (std::size_t i = 0; i < spec.items; ++i) {
      if (!observe(rng)) continue;
      CriteriaRecord r;
      r.user_id = "u" + std::to_string(u);
      r.item_id = "i" + std::to_string(i);
      auto draw = [&](double v) {
        return spec.noise > 0.0 ? spec.scale.clamp(v + noise(rng)) : v;
      };
      r.overall = draw(truth(u, i, 0));
      r.criteria.resize(kk);
      for (std::size_t c = 1; c <= kk; ++c) r.criteria[c - 1] = draw(truth(u, i, c));
      out.records.push_back(std::move(r));
    }
  out.truth = std::move(truth);
  return out;
}

std::optional<SyntheticSpec> synthetic_preset(std::string_view name) {
  SyntheticSpec spec;
  spec.criteria = 4;
  spec.ranks = {3, 3, 4};
  spec.scale = RatingScale::letter13();
  if (name == "ym20") {
    spec.users = 429;
    spec.items = 491;
    spec.density = 18405.0 / (429.0 * 491.0);
  } else if (name == "ym10") {
    spec.users = 1827;
    spec.items = 1471;
    spec.density = 48026.0 / (1827.0 * 1471.0);
  } else if (name == "ym5") {
    spec.users = 5978;
    spec.items = 3079;
    spec.density = 82599.0 / (5978.0 * 3079.0);
  } else {
    return std::nullopt;
  }
  return spec;
}

}  // namespace mccf
