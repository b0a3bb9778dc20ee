#ifndef MCCF_CORE_RATING_SCALE_HPP
#define MCCF_CORE_RATING_SCALE_HPP

#include <string>
#include <string_view>
#include <vector>

namespace mccf {

/// Bounds of a rating domain, optionally with textual grades ordered worst to
/// best. Grade g at position p maps to min_value + p.
class RatingScale {
 public:
  static RatingScale make(double min_value, double max_value, int levels,
                          std::vector<std::string> grade_labels = {});

  /// Numeric 1..5 stars (MovieLens).
  static RatingScale one_to_five();
  /// F, D-, D, D+, C-, C, C+, B-, B, B+, A-, A, A+ mapped to 1..13.
  static RatingScale letter13();

  double min_value() const noexcept { return min_; }
  double max_value() const noexcept { return max_; }
  int levels() const noexcept { return levels_; }
  const std::vector<std::string>& grade_labels() const noexcept { return labels_; }
  bool has_grades() const noexcept { return !labels_.empty(); }

  bool contains(double v) const noexcept { return v >= min_ && v <= max_; }
  double clamp(double v) const noexcept;

  /// Throws Error(unknown_grade) for labels not on the ladder.
  double grade_to_number(std::string_view grade) const;

  bool operator==(const RatingScale&) const = default;

 private:
  RatingScale(double min_value, double max_value, int levels,
              std::vector<std::string> labels);

  double min_;
  double max_;
  int levels_;
  std::vector<std::string> labels_;
};

}  // namespace mccf

#endif
