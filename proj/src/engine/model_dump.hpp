#ifndef MCCF_ENGINE_MODEL_DUMP_HPP
#define MCCF_ENGINE_MODEL_DUMP_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "core/dataset.hpp"
#include "engine/mc_model.hpp"
#include "linalg/ssvd.hpp"
#include "similarity/similarity.hpp"

namespace mccf {

inline constexpr int kModelSchemaVersion = 1;

/// Structured-text model:
///
///   # mccf-model
///   schema_version=1
///   key=value ...
///   matrix NAME rows=R cols=C
///   <R lines of C values, row-major>
///   similarities NAME
///   item_a,item_b,kind,value ...
///   end
struct ModelDump {
  struct SimilarityRow {
    std::string item_a;
    std::string item_b;
    std::string kind;
    double value = 0.0;
  };
  struct SimilarityBlock {
    std::string name;
    std::vector<SimilarityRow> rows;
  };

  int schema_version = kModelSchemaVersion;
  std::vector<std::pair<std::string, std::string>> fields;
  std::vector<std::pair<std::string, Eigen::MatrixXd>> matrices;
  std::vector<SimilarityBlock> similarities;

  const std::string* field(const std::string& key) const;
  const Eigen::MatrixXd* matrix(const std::string& name) const;
};

void write_model_dump(std::ostream& out, const ModelDump& dump);
/// Throws ParseError on malformed input or an unknown schema version.
ModelDump read_model_dump(std::istream& in);

/// Single-criterion model: counts, the similarity store and, when given, the
/// SSVD factors behind it.
ModelDump dump_item_model(const Dataset& d, const SimilarityStore& sims,
                          const FactorModel* factors = nullptr);
/// Tucker factors and the core's mode-1 unfolding (or per-slice factors),
/// aggregation weights and every criterion's similarity store.
ModelDump dump_mc_model(const McModel& model);

}  // namespace mccf

#endif
