#include "cli_app.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "mccf/mccf.h"

namespace mccf_cli {

namespace {

struct DatasetDeleter {
  void operator()(mccf_dataset* d) const { mccf_dataset_free(d); }
};
struct ReportDeleter {
  void operator()(mccf_report* r) const { mccf_report_free(r); }
};
struct RecommenderDeleter {
  void operator()(mccf_recommender* r) const { mccf_recommender_free(r); }
};
using DatasetPtr = std::unique_ptr<mccf_dataset, DatasetDeleter>;
using ReportPtr = std::unique_ptr<mccf_report, ReportDeleter>;
using RecommenderPtr = std::unique_ptr<mccf_recommender, RecommenderDeleter>;

// Library failure carrying the status; mapped to an exit code in run().
struct Failure : std::runtime_error {
  mccf_status status;
  Failure(mccf_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(mccf_status s) {
  if (s != MCCF_OK) throw Failure(s, std::string(mccf_status_name(s)) + ": " + mccf_last_error());
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ',');)
    if (!part.empty()) out.push_back(part);
  return out;
}

void parse_ranks(const std::string& text, size_t ranks[3]) {
  const auto parts = split_list(text);
  if (parts.size() != 3) throw UsageError("--ranks expects R1,R2,R3");
  for (std::size_t s = 0; s < 3; ++s) {
    const auto& p = parts[s];
    auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), ranks[s]);
    if (ec != std::errc() || ptr != p.data() + p.size() || ranks[s] == 0)
      throw UsageError("--ranks expects three positive integers");
  }
}

double check_fraction(double v) {
  if (!(v > 0.0 && v < 1.0)) throw UsageError("train fraction must lie in (0, 1)");
  return v;
}

double parse_fraction(const std::string& text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw UsageError("bad train fraction '" + text + "'");
  return check_fraction(v);
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

bool given(const CLI::App* sub, const char* flag) {
  const CLI::Option* opt = sub->get_option_no_throw(flag);
  return opt && opt->count() > 0;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Failure(MCCF_IO, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Failure(MCCF_IO, "write to '" + path + "' failed");
}

}  // namespace

Cli::Cli() : app_(std::make_unique<CLI::App>("Multi-criteria item-based collaborative filtering")) {
  CLI::App& app = *app_;
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every command");

  const std::vector<std::string> kinds{"pearson",  "euclidean",       "loglikelihood",
                                       "tanimoto", "adjusted-cosine", "cosine", "latent"};
  auto input = [this](CLI::App* s, bool required) {
    auto* opt = s->add_option("--input", o_.input, "Ratings file");
    if (required) opt->required();
  };
  auto data_format = [this](CLI::App* s) {
    s->add_option("--format", o_.format, "Input format")
        ->check(CLI::IsMember({"movielens", "mc-csv"}))
        ->capture_default_str();
    s->add_option("--criteria", o_.criteria, "Criteria per rating (mc-csv)")
        ->check(CLI::Range(1, 64))
        ->capture_default_str();
    s->add_option("--scale", o_.scale, "Rating scale (mc-csv)")
        ->check(CLI::IsMember({"1-5", "letter13"}))
        ->capture_default_str();
  };
  auto filter = [this](CLI::App* s) {
    s->add_option("--min-user", o_.min_user, "Minimum ratings per user")->capture_default_str();
    s->add_option("--min-item", o_.min_item, "Minimum ratings per item")->capture_default_str();
  };
  auto seed = [this](CLI::App* s, bool required) {
    auto* opt = s->add_option("--seed", o_.seed, "Seed for the split and SSVD sketches");
    if (required) opt->required();
  };
  auto fraction = [this](CLI::App* s) {
    s->add_option("--train-fraction", o_.train_fraction, "Training share of each split")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
  };
  auto neighborhood = [this, kinds](CLI::App* s) {
    s->add_option("--sim", o_.sim, "Item similarity")
        ->check(CLI::IsMember(kinds))
        ->capture_default_str();
    s->add_option("--weighting", o_.weighting,
                  "Neighbour weighting: positive, signed-abs or signed")
        ->check(CLI::IsMember({"positive", "signed-abs", "signed"}));
    s->add_option("--max-neighbors", o_.max_neighbors, "Neighbourhood size, 0 for all")
        ->capture_default_str();
  };
  auto top_n = [this](CLI::App* s) {
    s->add_option("--top-n", o_.top_n, "Length of recommendation lists")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}))
        ->capture_default_str();
  };
  auto relevance = [this](CLI::App* s) {
    s->add_option("--relevance-threshold", o_.relevance_threshold,
                  "Rating at or above which a test item is relevant (default: top third)");
  };
  auto threads = [this](CLI::App* s) {
    s->add_option("--threads", o_.threads, "Worker threads")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1024}))
        ->capture_default_str();
  };
  auto output = [this](CLI::App* s, bool required, const char* what) {
    auto* opt = s->add_option("--output", o_.output, what);
    if (required) opt->required();
  };
  auto mc = [this, kinds](CLI::App* s) {
    s->add_option("--ranks", o_.ranks, "Tucker ranks R1,R2,R3")->capture_default_str();
    s->add_option("--pca-option", o_.pca_option, "Center item columns before factoring")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    s->add_option("--sim-space", o_.sim_space, "Similarity space")
        ->check(CLI::IsMember({"latent", "reconstructed"}))
        ->capture_default_str();
    s->add_option("--decomposition", o_.decomposition, "tucker or per-slice")
        ->check(CLI::IsMember({"tucker", "per-slice"}))
        ->capture_default_str();
    s->add_option("--criteria-mode", o_.criteria_mode, "residual or plain")
        ->check(CLI::IsMember({"residual", "plain"}))
        ->capture_default_str();
    s->add_option("--fallback", o_.fallback, "Use denoised values when no neighbour predicts")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
  };

  CLI::App* stats = app.add_subcommand("stats", "Print user, item and rating counts");
  input(stats, true);
  data_format(stats);

  CLI::App* filt = app.add_subcommand("filter", "Keep users and items with enough ratings");
  input(filt, true);
  data_format(filt);
  filter(filt);
  output(filt, true, "Filtered ratings file");

  CLI::App* split = app.add_subcommand("split", "Write a seeded train/test split");
  input(split, true);
  data_format(split);
  fraction(split);
  seed(split, true);
  output(split, true, "Prefix; writes PREFIX.train and PREFIX.test");

  CLI::App* decompose = app.add_subcommand("decompose", "Factor the ratings and dump the model");
  input(decompose, true);
  data_format(decompose);
  mc(decompose);
  decompose->add_option("--sim", o_.sim, "Similarity in the reconstructed space (mc-csv)")
      ->check(CLI::IsMember(kinds))
      ->capture_default_str();
  seed(decompose, true);
  threads(decompose);
  output(decompose, true, "Model dump");

  CLI::App* evaluate = app.add_subcommand("evaluate", "Single-criterion benchmark run");
  input(evaluate, true);
  data_format(evaluate);
  filter(evaluate);
  fraction(evaluate);
  seed(evaluate, true);
  neighborhood(evaluate);
  evaluate->add_option("--latent-rank", o_.latent_rank, "SSVD rank behind --sim latent")
      ->capture_default_str();
  top_n(evaluate);
  relevance(evaluate);
  threads(evaluate);
  output(evaluate, false, "Also write the report here");

  CLI::App* sweep = app.add_subcommand("sweep", "Grid of benchmark runs as CSV");
  input(sweep, false);
  data_format(sweep);
  sweep->add_option("--fractions", o_.fractions, "Comma-separated train fractions")
      ->capture_default_str();
  sweep->add_option("--sims", o_.sims, "Comma-separated similarities")->capture_default_str();
  sweep->add_option("--config", o_.config,
                    "File with one experiment per line: dataset kind fraction seed");
  seed(sweep, false);
  sweep->add_option("--weighting", o_.weighting,
                    "Neighbour weighting: positive, signed-abs or signed")
      ->check(CLI::IsMember({"positive", "signed-abs", "signed"}));
  top_n(sweep);
  relevance(sweep);
  threads(sweep);
  output(sweep, false, "Also write the CSV here");

  CLI::App* recommend = app.add_subcommand("recommend", "Top-N list for one user");
  input(recommend, true);
  data_format(recommend);
  recommend->add_option("--user", o_.user, "User id")->required();
  top_n(recommend);
  neighborhood(recommend);
  recommend->add_option("--latent-rank", o_.latent_rank, "SSVD rank behind --sim latent")
      ->capture_default_str();
  mc(recommend);
  seed(recommend, false);
  threads(recommend);

  CLI::App* mce = app.add_subcommand("mc-evaluate", "Multi-criteria benchmark run");
  input(mce, false);
  data_format(mce);
  mce->add_option("--synthetic", o_.synthetic,
                  "Generated data instead of --input: small, ym20, ym10 or ym5")
      ->check(CLI::IsMember({"small", "ym20", "ym10", "ym5"}));
  mce->add_option("--noise", o_.noise, "Noise level of --synthetic data")->capture_default_str();
  filter(mce);
  fraction(mce);
  seed(mce, true);
  mc(mce);
  mce->add_option("--sim", o_.sim, "Similarity in the reconstructed space")
      ->check(CLI::IsMember(kinds))
      ->capture_default_str();
  mce->add_option("--weighting", o_.weighting,
                  "Neighbour weighting: positive, signed-abs or signed")
      ->check(CLI::IsMember({"positive", "signed-abs", "signed"}));
  mce->add_option("--max-neighbors", o_.max_neighbors, "Neighbourhood size, 0 for all")
      ->capture_default_str();
  top_n(mce);
  relevance(mce);
  threads(mce);
  output(mce, false, "Also write the report here");
}

int Cli::run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    app_->parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app_->exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  try {
    return dispatch(out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Failure& e) {
    err << "error: " << e.what() << "\n";
    return e.status == MCCF_INVALID_ARGUMENT ? kUsage : kData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  }
}

int Cli::dispatch(std::ostream& out, std::ostream& err) {
  (void)err;
  const CLI::App* sub = app_->get_subcommands().front();
  const std::string verb = sub->get_name();
  const bool multi = o_.format == "mc-csv";

  auto load = [&](const std::string& path) {
    mccf_dataset* raw = nullptr;
    if (multi)
      check(mccf_dataset_load_multicriteria(path.c_str(), o_.criteria, o_.scale.c_str(), &raw));
    else
      check(mccf_dataset_load_movielens(path.c_str(), &raw));
    return DatasetPtr(raw);
  };
  auto cf_options = [&](const char* default_weighting) {
    mccf_cf_options opts;
    mccf_cf_options_init(&opts);
    opts.similarity = o_.sim.c_str();
    opts.weighting = o_.weighting.empty() ? default_weighting : o_.weighting.c_str();
    if (!o_.weighting.empty() && o_.weighting != "signed") opts.min_support = 1;
    opts.max_neighbors = o_.max_neighbors;
    opts.latent_rank = o_.latent_rank;
    opts.train_fraction = o_.train_fraction;
    opts.seed = o_.seed;
    opts.top_n = o_.top_n;
    opts.has_relevance_threshold = given(sub, "--relevance-threshold") ? 1 : 0;
    opts.relevance_threshold = o_.relevance_threshold;
    opts.threads = o_.threads;
    return opts;
  };
  auto mc_options = [&]() {
    mccf_mc_options opts;
    mccf_mc_options_init(&opts);
    parse_ranks(o_.ranks, opts.ranks);
    opts.pca_option = o_.pca_option == "on" ? 1 : 0;
    opts.sim_space = o_.sim_space.c_str();
    opts.similarity = o_.sim.c_str();
    opts.decomposition = o_.decomposition.c_str();
    opts.criteria_mode = o_.criteria_mode.c_str();
    if (!o_.weighting.empty()) opts.weighting = o_.weighting.c_str();
    opts.max_neighbors = o_.max_neighbors;
    opts.fallback_to_denoised = o_.fallback == "on" ? 1 : 0;
    opts.train_fraction = o_.train_fraction;
    opts.seed = o_.seed;
    opts.top_n = o_.top_n;
    opts.has_relevance_threshold = given(sub, "--relevance-threshold") ? 1 : 0;
    opts.relevance_threshold = o_.relevance_threshold;
    opts.threads = o_.threads;
    return opts;
  };

  if (verb == "stats") {
    auto d = load(o_.input);
    mccf_stats s;
    check(mccf_dataset_stats(d.get(), &s));
    out << "users=" << s.users << " items=" << s.items << " ratings=" << s.ratings << "\n";
    out << "density=" << format_value(s.density) << "\n";
    return kOk;
  }

  if (verb == "filter") {
    auto d = load(o_.input);
    mccf_dataset* raw = nullptr;
    check(mccf_dataset_filter(d.get(), o_.min_user, o_.min_item, &raw));
    DatasetPtr kept(raw);
    check(mccf_dataset_write(kept.get(), o_.output.c_str()));
    mccf_stats s;
    check(mccf_dataset_stats(kept.get(), &s));
    out << "users=" << s.users << " items=" << s.items << " ratings=" << s.ratings << "\n";
    return kOk;
  }

  if (verb == "split") {
    check_fraction(o_.train_fraction);
    auto d = load(o_.input);
    mccf_dataset* tr = nullptr;
    mccf_dataset* te = nullptr;
    check(mccf_dataset_split(d.get(), o_.train_fraction, o_.seed, &tr, &te));
    DatasetPtr train(tr);
    DatasetPtr test(te);
    check(mccf_dataset_write(train.get(), (o_.output + ".train").c_str()));
    check(mccf_dataset_write(test.get(), (o_.output + ".test").c_str()));
    mccf_stats a, b;
    check(mccf_dataset_stats(train.get(), &a));
    check(mccf_dataset_stats(test.get(), &b));
    out << "train=" << a.ratings << " test=" << b.ratings << "\n";
    return kOk;
  }

  if (verb == "decompose") {
    auto d = load(o_.input);
    mccf_recommender* raw = nullptr;
    if (multi) {
      const auto opts = mc_options();
      check(mccf_recommender_create_mc(d.get(), &opts, &raw));
    } else {
      auto opts = cf_options("positive");
      size_t ranks[3];
      parse_ranks(o_.ranks, ranks);
      opts.similarity = "latent";
      opts.latent_rank = ranks[0];
      check(mccf_recommender_create(d.get(), &opts, &raw));
    }
    RecommenderPtr rec(raw);
    check(mccf_recommender_write_model(rec.get(), o_.output.c_str()));
    out << "model=" << o_.output << "\n";
    return kOk;
  }

  if (verb == "evaluate") {
    if (multi) throw UsageError("evaluate reads single-criterion data; use mc-evaluate");
    check_fraction(o_.train_fraction);
    auto d = load(o_.input);
    if (o_.min_user > 0 || o_.min_item > 0) {
      mccf_dataset* raw = nullptr;
      check(mccf_dataset_filter(d.get(), o_.min_user, o_.min_item, &raw));
      d.reset(raw);
    }
    const auto opts = cf_options("signed");
    mccf_report* raw = nullptr;
    check(mccf_run_benchmark(d.get(), o_.input.c_str(), &opts, &raw));
    ReportPtr report(raw);
    out << mccf_report_text(report.get());
    if (!o_.output.empty()) write_text(o_.output, mccf_report_text(report.get()));
    return kOk;
  }

  if (verb == "sweep") {
    if (multi) throw UsageError("sweep reads single-criterion data");
    struct Run {
      std::string dataset;
      std::string sim;
      double fraction;
      std::uint64_t seed;
    };
    std::vector<Run> runs;
    if (!o_.config.empty()) {
      mccf_sweep* raw = nullptr;
      check(mccf_sweep_load(o_.config.c_str(), &raw));
      std::unique_ptr<mccf_sweep, void (*)(mccf_sweep*)> cfg(raw, mccf_sweep_free);
      for (size_t k = 0; k < mccf_sweep_size(cfg.get()); ++k) {
        mccf_sweep_entry e;
        check(mccf_sweep_entry_at(cfg.get(), k, &e));
        runs.push_back({e.dataset, e.similarity, e.train_fraction, e.seed});
      }
    } else {
      if (o_.input.empty()) throw UsageError("sweep needs --input or --config");
      if (!given(sub, "--seed")) throw UsageError("sweep needs --seed (or seeds in --config)");
      const auto sims = split_list(o_.sims);
      const auto fractions = split_list(o_.fractions);
      if (sims.empty() || fractions.empty()) throw UsageError("empty --sims or --fractions");
      for (const auto& f : fractions) {
        const double fr = parse_fraction(f);
        for (const auto& s : sims) runs.push_back({o_.input, s, fr, o_.seed});
      }
    }
    std::map<std::string, DatasetPtr> cache;
    std::string csv = std::string(mccf_report_csv_header()) + "\n";
    out << mccf_report_csv_header() << "\n";
    for (const auto& run : runs) {
      auto& d = cache[run.dataset];
      if (!d) d = load(run.dataset);
      auto opts = cf_options("signed");
      opts.similarity = run.sim.c_str();
      opts.train_fraction = run.fraction;
      opts.seed = run.seed;
      mccf_report* raw = nullptr;
      check(mccf_run_benchmark(d.get(), run.dataset.c_str(), &opts, &raw));
      ReportPtr report(raw);
      const std::string row = mccf_report_csv_row(report.get());
      out << row << "\n" << std::flush;
      csv += row + "\n";
    }
    if (!o_.output.empty()) write_text(o_.output, csv);
    return kOk;
  }

  if (verb == "recommend") {
    const bool randomized = multi || o_.sim == "latent";
    if (randomized && !given(sub, "--seed"))
      throw UsageError("--seed is required with --sim latent or --format mc-csv");
    auto d = load(o_.input);
    mccf_recommender* raw = nullptr;
    if (multi) {
      const auto opts = mc_options();
      check(mccf_recommender_create_mc(d.get(), &opts, &raw));
    } else {
      const auto opts = cf_options("positive");
      check(mccf_recommender_create(d.get(), &opts, &raw));
    }
    RecommenderPtr rec(raw);
    std::vector<mccf_recommendation> list(o_.top_n);
    size_t count = 0;
    check(mccf_recommend(rec.get(), o_.user.c_str(), o_.top_n, list.data(), &count));
    for (size_t k = 0; k < count; ++k)
      out << list[k].rank << '\t' << list[k].item_id << '\t' << format_value(list[k].value)
          << "\n";
    return kOk;
  }

  if (verb == "mc-evaluate") {
    check_fraction(o_.train_fraction);
    DatasetPtr d;
    std::string label = o_.input;
    if (!o_.synthetic.empty()) {
      if (!o_.input.empty()) throw UsageError("give either --input or --synthetic");
      mccf_synthetic_options syn;
      mccf_synthetic_options_init(&syn);
      if (o_.synthetic != "small") check(mccf_synthetic_options_preset(&syn, o_.synthetic.c_str()));
      syn.noise = o_.noise;
      syn.seed = o_.seed;
      mccf_dataset* raw = nullptr;
      check(mccf_dataset_synthetic(&syn, &raw));
      d.reset(raw);
      label = "synthetic-" + o_.synthetic;
    } else {
      if (o_.input.empty()) throw UsageError("mc-evaluate needs --input or --synthetic");
      if (!multi) throw UsageError("mc-evaluate reads --format mc-csv");
      d = load(o_.input);
    }
    if (o_.min_user > 0 || o_.min_item > 0) {
      mccf_dataset* raw = nullptr;
      check(mccf_dataset_filter(d.get(), o_.min_user, o_.min_item, &raw));
      d.reset(raw);
    }
    const auto opts = mc_options();
    mccf_report* raw = nullptr;
    check(mccf_run_mc_benchmark(d.get(), label.c_str(), &opts, &raw));
    ReportPtr report(raw);
    out << mccf_report_text(report.get());
    if (!o_.output.empty()) write_text(o_.output, mccf_report_text(report.get()));
    return kOk;
  }

  throw UsageError("unknown command '" + verb + "'");
}

}  // namespace mccf_cli
