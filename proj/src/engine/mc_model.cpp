#include "engine/mc_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "core/error.hpp"

namespace mccf {

using Eigen::MatrixXd;

std::optional<SimSpace> parse_sim_space(std::string_view name) {
  if (name == "latent") return SimSpace::latent;
  if (name == "reconstructed") return SimSpace::reconstructed;
  return std::nullopt;
}

std::string_view to_string(SimSpace s) {
  return s == SimSpace::latent ? "latent" : "reconstructed";
}

std::optional<Decomposition> parse_decomposition(std::string_view name) {
  if (name == "tucker") return Decomposition::tucker;
  if (name == "per-slice" || name == "per_slice") return Decomposition::per_slice;
  return std::nullopt;
}

std::string_view to_string(Decomposition d) {
  return d == Decomposition::tucker ? "tucker" : "per-slice";
}

std::optional<CriteriaMode> parse_criteria_mode(std::string_view name) {
  if (name == "residual") return CriteriaMode::residual;
  if (name == "plain") return CriteriaMode::plain;
  return std::nullopt;
}

std::string_view to_string(CriteriaMode m) {
  return m == CriteriaMode::residual ? "residual" : "plain";
}

namespace {

struct Workspace {
  Dims3 dims;
  std::vector<bool> observed;  // users x items, user fastest

  bool is_observed(std::size_t u, std::size_t i) const { return observed[u + dims[0] * i]; }
};

Tensor3 initial_imputation(const CriteriaTensor& t, Workspace& ws) {
  const std::size_t users = t.num_users();
  const std::size_t items = t.num_items();
  const std::size_t slices = t.slices();
  ws.dims = {users, items, slices};
  ws.observed.assign(users * items, false);

  MatrixXd sum = MatrixXd::Zero(static_cast<Eigen::Index>(items), static_cast<Eigen::Index>(slices));
  std::vector<std::size_t> count(items, 0);
  Eigen::VectorXd slice_sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(slices));
  for (std::size_t cell = 0; cell < t.num_cells(); ++cell) {
    const auto c = t.cells()[cell];
    const auto v = t.values(cell);
    ws.observed[c.user + users * c.item] = true;
    ++count[c.item];
    for (std::size_t s = 0; s < slices; ++s) {
      sum(c.item, static_cast<Eigen::Index>(s)) += v[s];
      slice_sum(static_cast<Eigen::Index>(s)) += v[s];
    }
  }
  const Eigen::VectorXd slice_mean = slice_sum / static_cast<double>(t.num_cells());

  Tensor3 x(ws.dims);
  for (std::size_t s = 0; s < slices; ++s)
    for (std::size_t i = 0; i < items; ++i) {
      const double fill = count[i] > 0 ? sum(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s)) /
                                             static_cast<double>(count[i])
                                       : slice_mean(static_cast<Eigen::Index>(s));
      for (std::size_t u = 0; u < users; ++u) x(u, i, s) = fill;
    }
  for (std::size_t cell = 0; cell < t.num_cells(); ++cell) {
    const auto c = t.cells()[cell];
    const auto v = t.values(cell);
    for (std::size_t s = 0; s < slices; ++s) x(c.user, c.item, s) = v[s];
  }
  return x;
}

MatrixXd column_means(const Tensor3& x) {
  const auto [users, items, slices] = x.dims();
  MatrixXd means(static_cast<Eigen::Index>(items), static_cast<Eigen::Index>(slices));
  for (std::size_t s = 0; s < slices; ++s)
    for (std::size_t i = 0; i < items; ++i) {
      double acc = 0.0;
      for (std::size_t u = 0; u < users; ++u) acc += x(u, i, s);
      means(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s)) = acc / static_cast<double>(users);
    }
  return means;
}

void add_column_means(Tensor3& x, const MatrixXd& means, double sign) {
  const auto [users, items, slices] = x.dims();
  for (std::size_t s = 0; s < slices; ++s)
    for (std::size_t i = 0; i < items; ++i) {
      const double m = sign * means(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s));
      for (std::size_t u = 0; u < users; ++u) x(u, i, s) += m;
    }
}

MatrixXd slice_matrix(const Tensor3& x, std::size_t s) {
  const auto [users, items, slices] = x.dims();
  MatrixXd m(static_cast<Eigen::Index>(users), static_cast<Eigen::Index>(items));
  for (std::size_t i = 0; i < items; ++i)
    for (std::size_t u = 0; u < users; ++u)
      m(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(i)) = x(u, i, s);
  return m;
}

// One decomposition pass. Stores the factors in `model` and returns the
// reconstruction (means restored).
Tensor3 decompose(const Tensor3& x, McModel& model) {
  const McConfig& cfg = model.config;
  Tensor3 work = x;
  if (cfg.pca_option) {
    model.slice_means = column_means(x);
    add_column_means(work, model.slice_means, -1.0);
  } else {
    model.slice_means = MatrixXd::Zero(static_cast<Eigen::Index>(x.dim(2)), static_cast<Eigen::Index>(x.dim(3)));
  }

  Tensor3 recon;
  if (cfg.decomposition == Decomposition::tucker) {
    model.tucker = hosvd(work, cfg.ranks, cfg.ssvd);
    recon = tucker_reconstruct(*model.tucker);
  } else {
    const auto [users, items, slices] = x.dims();
    const std::size_t limit = std::min(users, items);
    const std::size_t rank = cfg.ranks[1];
    if (rank < 1 || rank > limit)
      fail(ErrorCode::rank, "per-slice rank " + std::to_string(rank) + " outside 1.." +
                                std::to_string(limit));
    model.slice_factors.clear();
    recon = Tensor3(x.dims());
    for (std::size_t s = 0; s < slices; ++s) {
      SsvdOptions opts = cfg.ssvd;
      opts.oversample = std::min(opts.oversample, limit - rank);
      opts.seed = cfg.ssvd.seed + s;
      model.slice_factors.push_back(ssvd(slice_matrix(work, s), rank, opts));
      const MatrixXd r = model.slice_factors.back().reconstruct();
      for (std::size_t i = 0; i < items; ++i)
        for (std::size_t u = 0; u < users; ++u)
          recon(u, i, s) = r(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(i));
    }
  }
  if (cfg.pca_option) add_column_means(recon, model.slice_means, 1.0);
  return recon;
}

// Latent item vectors for slice s: rows are items.
MatrixXd latent_item_vectors(const McModel& model, std::size_t s) {
  if (model.config.decomposition == Decomposition::per_slice)
    return item_latent_vectors(model.slice_factors.at(s));
  const TuckerModel& tk = *model.tucker;
  Tensor3 partial = mode_product(tk.core, tk.factors[1], 2);
  partial = mode_product(partial, tk.factors[2], 3);
  const std::size_t r1 = partial.dim(1);
  const std::size_t items = partial.dim(2);
  MatrixXd out(static_cast<Eigen::Index>(items), static_cast<Eigen::Index>(r1));
  for (std::size_t i = 0; i < items; ++i)
    for (std::size_t a = 0; a < r1; ++a)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) = partial(a, i, s);
  return out;
}

Dataset reconstructed_slice(const McModel& model, const CriteriaTensor& t, std::size_t s) {
  std::vector<Triplet> triplets;
  triplets.reserve(t.num_cells());
  for (const auto& c : t.cells())
    triplets.push_back({c.user, c.item, model.scale.clamp(model.denoised(c.user, c.item, s))});
  return Dataset::from_indexed(t.users(), t.items(), std::move(triplets), model.scale);
}

void check_indices(const McModel& model, Index user, Index item) {
  if (user >= model.users.size() || item >= model.items.size())
    fail(ErrorCode::not_found, "user or item outside the model");
}

}  // namespace

McModel build_mc_model(const CriteriaTensor& t, const McConfig& config) {
  if (t.num_cells() == 0) fail(ErrorCode::empty_input, "tensor has no observed cells");
  validate(config.neighborhood);
  const double cells = static_cast<double>(t.num_users()) * static_cast<double>(t.num_items()) *
                       static_cast<double>(t.slices());
  if (cells > config.memory_budget)
    fail(ErrorCode::memory_guard, "dense tensor of " + std::to_string(cells) +
                                      " cells exceeds the budget of " +
                                      std::to_string(config.memory_budget));
  if (config.decomposition == Decomposition::tucker) {
    const Dims3 dims{t.num_users(), t.num_items(), t.slices()};
    for (std::size_t s = 0; s < 3; ++s)
      if (config.ranks[s] < 1 || config.ranks[s] > dims[s])
        fail(ErrorCode::rank, "mode-" + std::to_string(s + 1) + " rank " +
                                  std::to_string(config.ranks[s]) + " outside 1.." +
                                  std::to_string(dims[s]));
  }

  McModel model;
  model.config = config;
  model.scale = t.scale();
  model.criteria = t.criteria();
  model.users = t.users();
  model.items = t.items();

  Workspace ws;
  Tensor3 x = initial_imputation(t, ws);
  const auto [users, items, slices] = ws.dims;
  const std::size_t max_iters = std::max<std::size_t>(1, config.max_impute_iterations);
  Tensor3 recon;
  for (std::size_t iter = 1; iter <= max_iters; ++iter) {
    recon = decompose(x, model);
    model.impute_iterations = iter;
    double delta = 0.0;
    double norm = 0.0;
    for (std::size_t s = 0; s < slices; ++s)
      for (std::size_t i = 0; i < items; ++i)
        for (std::size_t u = 0; u < users; ++u) {
          if (ws.is_observed(u, i)) continue;
          const double diff = recon(u, i, s) - x(u, i, s);
          delta += diff * diff;
          norm += x(u, i, s) * x(u, i, s);
          x(u, i, s) = recon(u, i, s);
        }
    if (std::sqrt(delta) <= config.impute_tolerance * std::sqrt(norm)) break;
  }
  model.denoised = std::move(recon);

  for (int c = 1; c <= t.criteria(); ++c) {
    const auto s = static_cast<std::size_t>(c);
    model.criteria_data.push_back(t.criteria_slice(c));
    if (config.sim_space == SimSpace::latent) {
      model.similarities.push_back(
          latent_similarity_matrix(latent_item_vectors(model, s), config.similarity.threads));
    } else {
      model.similarities.push_back(
          item_similarity_matrix(reconstructed_slice(model, t, s), config.kind, config.similarity));
    }
  }
  model.aggregation = fit_aggregation(t);
  return model;
}

CriteriaEstimate predict_criteria(const McModel& model, Index user, Index item) {
  check_indices(model, user, item);
  const auto k = static_cast<std::size_t>(model.criteria);
  CriteriaEstimate out;
  out.values.resize(k);
  out.support.assign(k, 0);
  const auto& spec = model.config.neighborhood;
  for (std::size_t c = 0; c < k; ++c) {
    const Dataset& data = model.criteria_data[c];
    const SimilarityStore& sims = model.similarities[c];
    const double base = model.denoised(user, item, c + 1);
    out.values[c] = model.scale.clamp(base);
    if (model.config.criteria_mode == CriteriaMode::plain) {
      if (auto p = predict_single(user, item, data, sims, spec)) {
        out.values[c] = p->value;
        out.support[c] = p->support;
      }
      continue;
    }
    auto neighbors = select_neighbors(user, item, data, sims, spec);
    if (neighbors.size() < spec.min_support) continue;
    for (auto& n : neighbors) n.rating -= model.denoised(user, n.item, c + 1);
    if (auto shift = weighted_average(neighbors, spec.weighting)) {
      out.values[c] = model.scale.clamp(base + *shift);
      out.support[c] = neighbors.size();
    }
  }
  return out;
}

std::optional<double> predict_overall(const McModel& model, Index user, Index item) {
  const CriteriaEstimate est = predict_criteria(model, user, item);
  if (!model.config.fallback_to_denoised)
    for (std::size_t s : est.support)
      if (s == 0) return std::nullopt;
  return aggregate_overall(model.aggregation, est.values, model.scale);
}

std::vector<Prediction> recommend_top_n(const McModel& model, Index user, std::size_t n) {
  if (n == 0) fail(ErrorCode::invalid_argument, "N must be at least 1");
  std::vector<Prediction> out;
  if (user >= model.users.size() || model.criteria_data.empty()) return out;
  const Dataset& first = model.criteria_data.front();
  std::vector<bool> rated(model.items.size(), false);
  for (const auto& e : first.user_ratings(user)) rated[e.index] = true;
  for (Index i = 0; i < model.items.size(); ++i) {
    if (rated[i]) continue;
    const CriteriaEstimate est = predict_criteria(model, user, i);
    if (!model.config.fallback_to_denoised &&
        std::find(est.support.begin(), est.support.end(), 0) != est.support.end())
      continue;
    std::size_t support = 0;
    for (std::size_t s : est.support) support = std::max(support, s);
    out.push_back({user, i, aggregate_overall(model.aggregation, est.values, model.scale),
                   std::max<std::size_t>(support, 1)});
  }
  rank_top_n(out, n);
  return out;
}

std::string model_summary(const McModel& model) {
  std::ostringstream os;
  os.precision(6);
  const auto& cfg = model.config;
  os << "decomposition=" << to_string(cfg.decomposition) << '\n'
     << "ranks=" << cfg.ranks[0] << ',' << cfg.ranks[1] << ',' << cfg.ranks[2] << '\n'
     << "pca_option=" << (cfg.pca_option ? "on" : "off") << '\n'
     << "sim_space=" << to_string(cfg.sim_space) << '\n'
     << "similarity=" << to_string(cfg.sim_space == SimSpace::latent ? SimilarityKind::latent_cosine
                                                                     : cfg.kind)
     << '\n'
     << "criteria_mode=" << to_string(cfg.criteria_mode) << '\n'
     << "criteria=" << model.criteria << '\n'
     << "users=" << model.users.size() << '\n'
     << "items=" << model.items.size() << '\n'
     << "impute_iterations=" << model.impute_iterations << '\n';
  os << "weights=";
  for (Eigen::Index c = 0; c < model.aggregation.w.size(); ++c)
    os << (c ? "," : "") << model.aggregation.w(c);
  os << '\n' << "weights_fallback=" << (model.aggregation.fallback ? 1 : 0) << '\n';
  std::size_t pairs = 0;
  for (const auto& s : model.similarities) pairs += s.num_pairs();
  os << "similarity_pairs=" << pairs << '\n';
  return os.str();
}

}  // namespace mccf
