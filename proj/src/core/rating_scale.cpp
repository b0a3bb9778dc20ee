#include "core/rating_scale.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace mccf {

RatingScale::RatingScale(double min_value, double max_value, int levels,
                         std::vector<std::string> labels)
    : min_(min_value), max_(max_value), levels_(levels), labels_(std::move(labels)) {}

RatingScale RatingScale::make(double min_value, double max_value, int levels,
                              std::vector<std::string> grade_labels) {
  if (!std::isfinite(min_value) || !std::isfinite(max_value) || !(min_value < max_value))
    fail(ErrorCode::invalid_argument, "rating scale requires min < max");
  if (levels < 2) fail(ErrorCode::invalid_argument, "rating scale needs at least 2 levels");
  if (!grade_labels.empty()) {
    if (static_cast<int>(grade_labels.size()) != levels)
      fail(ErrorCode::invalid_argument, "grade label count must equal levels");
    if (max_value - min_value + 1.0 != static_cast<double>(levels))
      fail(ErrorCode::invalid_argument, "graded scale must satisfy levels = max - min + 1");
  }
  return RatingScale(min_value, max_value, levels, std::move(grade_labels));
}

RatingScale RatingScale::one_to_five() { return make(1.0, 5.0, 5); }

RatingScale RatingScale::letter13() {
  return make(1.0, 13.0, 13,
              {"F", "D-", "D", "D+", "C-", "C", "C+", "B-", "B", "B+", "A-", "A", "A+"});
}

double RatingScale::clamp(double v) const noexcept { return std::clamp(v, min_, max_); }

double RatingScale::grade_to_number(std::string_view grade) const {
  auto it = std::find(labels_.begin(), labels_.end(), grade);
  if (it == labels_.end())
    fail(ErrorCode::unknown_grade, "unknown grade '" + std::string(grade) + "'");
  return min_ + static_cast<double>(it - labels_.begin());
}

}  // namespace mccf
