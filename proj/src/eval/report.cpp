#include "eval/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace mccf {

namespace {

std::string exact(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fixed4(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string to_text(const EvalReport& r) {
  std::string out;
  auto line = [&out](const char* key, const std::string& value) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  };
  line("dataset", r.dataset);
  line("similarity", r.similarity);
  line("weighting", r.weighting);
  line("train_fraction", exact(r.train_fraction));
  line("seed", std::to_string(r.seed));
  if (!r.ranks.empty()) line("ranks", r.ranks);
  line("top_n", std::to_string(r.top_n));
  line("relevance_threshold", exact(r.relevance_threshold));
  line("mae", exact(r.mae));
  line("rmse", exact(r.rmse));
  line("bias", exact(r.bias));
  line("precision", exact(r.precision));
  line("recall", exact(r.recall));
  line("f1", exact(r.f1));
  line("prediction_coverage", exact(r.prediction_coverage));
  line("catalog_coverage", exact(r.catalog_coverage));
  line("pair_count", std::to_string(r.pair_count));
  line("no_prediction_count", std::to_string(r.no_prediction_count));
  if (!r.criterion_mae.empty()) {
    std::string joined;
    for (std::size_t c = 0; c < r.criterion_mae.size(); ++c)
      joined += (c ? "," : "") + exact(r.criterion_mae[c]);
    line("criterion_mae", joined);
    line("baseline_mae", exact(r.baseline_mae));
  }
  return out;
}

std::string csv_header() {
  return "dataset,similarity,train_fraction,seed,ranks,mae,rmse,bias,precision,recall,f1,"
         "prediction_coverage,catalog_coverage,pair_count,no_prediction_count";
}

std::string to_csv_row(const EvalReport& r) {
  std::string out = csv_field(r.dataset) + ',' + r.similarity + ',' + fixed4(r.train_fraction) +
                    ',' + std::to_string(r.seed) + ',' + csv_field(r.ranks);
  for (double v : {r.mae, r.rmse, r.bias, r.precision, r.recall, r.f1, r.prediction_coverage,
                   r.catalog_coverage})
    out += ',' + fixed4(v);
  out += ',' + std::to_string(r.pair_count) + ',' + std::to_string(r.no_prediction_count);
  return out;
}

}  // namespace mccf
