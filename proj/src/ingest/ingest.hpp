#ifndef MCCF_INGEST_INGEST_HPP
#define MCCF_INGEST_INGEST_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "core/dataset.hpp"
#include "core/rating_scale.hpp"

namespace mccf {

// MovieLens u.data: user<TAB>item<TAB>rating<TAB>timestamp, scale 1..5.
std::vector<RatingRecord> parse_movielens(std::istream& in);
std::vector<RatingRecord> read_movielens(const std::filesystem::path& path);
void write_movielens(std::ostream& out, std::span<const RatingRecord> records);

// Multi-criteria CSV: user,item,c1..ck,overall. Lines starting with '#' are
// skipped. Values are numbers or grade labels of the scale.
std::vector<CriteriaRecord> parse_multicriteria(std::istream& in, int criteria,
                                                const RatingScale& scale);
std::vector<CriteriaRecord> read_multicriteria(const std::filesystem::path& path, int criteria,
                                               const RatingScale& scale);
void write_multicriteria(std::ostream& out, std::span<const CriteriaRecord> records);

double grade_to_number(std::string_view grade, const RatingScale& scale);

struct DensityFilterSpec {
  std::size_t min_user_ratings = 0;
  std::size_t min_item_ratings = 0;
};

/// Drops users then items below their thresholds, repeating until nothing
/// changes. The result is the largest record subset satisfying both.
template <class Record>
std::vector<Record> density_filter(std::span<const Record> records, DensityFilterSpec spec);

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

void validate(const SplitSpec& spec);

/// Train membership for one cell. Keyed on (seed, user, item) only, so the
/// assignment is independent of file order.
bool assign_to_train(std::string_view user_id, std::string_view item_id, const SplitSpec& spec);

template <class Record>
std::pair<std::vector<Record>, std::vector<Record>> split_train_test(
    std::span<const Record> records, const SplitSpec& spec);

}  // namespace mccf

#endif
