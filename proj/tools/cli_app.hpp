#ifndef MCCF_TOOLS_CLI_APP_HPP
#define MCCF_TOOLS_CLI_APP_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>

#include "CLI11.hpp"

namespace mccf_cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2 };

struct Options {
  std::string input;
  std::string format = "movielens";
  int criteria = 4;
  std::string scale = "1-5";
  std::size_t min_user = 0;
  std::size_t min_item = 0;
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  std::string sim = "pearson";
  std::string ranks = "3,3,3";
  std::string pca_option = "off";
  std::string sim_space = "latent";
  std::size_t top_n = 10;
  double relevance_threshold = 0.0;
  std::size_t threads = 1;
  std::string output;

  std::string weighting;  // empty: per-verb default
  std::size_t max_neighbors = 0;
  std::size_t latent_rank = 20;
  std::string fractions = "0.7,0.8";
  std::string sims = "pearson,euclidean,loglikelihood,tanimoto";
  std::string config;
  std::string user;
  std::string synthetic;
  double noise = 0.1;
  std::string decomposition = "tucker";
  std::string criteria_mode = "residual";
  std::string fallback = "on";
};

class Cli {
 public:
  Cli();

  CLI::App& app() { return *app_; }

  /// Parses and runs one command. Never throws.
  int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

 private:
  int dispatch(std::ostream& out, std::ostream& err);

  std::unique_ptr<CLI::App> app_;
  Options o_;
};

}  // namespace mccf_cli

#endif
