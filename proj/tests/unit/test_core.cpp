#include <vector>

#include "doctest.h"

#include "core/dataset.hpp"
#include "core/error.hpp"
#include "core/rating_scale.hpp"
#include "linalg/sparse_matrix.hpp"

using namespace mccf;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an mccf::Error");
  return ErrorCode::invalid_argument;
}

CriteriaRecord cr(const char* u, const char* i, std::vector<double> c, double overall) {
  return {u, i, std::move(c), overall};
}

}  // namespace

TEST_SUITE("core") {
  TEST_CASE("rating scale bounds and clamping") {
    const auto s = RatingScale::one_to_five();
    CHECK(s.min_value() == 1.0);
    CHECK(s.max_value() == 5.0);
    CHECK(s.levels() == 5);
    CHECK(s.contains(1.0));
    CHECK_FALSE(s.contains(5.5));
    CHECK(s.clamp(7.0) == 5.0);
    CHECK(s.clamp(-2.0) == 1.0);
    CHECK(s.clamp(3.25) == 3.25);
    CHECK(code_of([] { RatingScale::make(5, 1, 5); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { RatingScale::make(1, 5, 1); }) == ErrorCode::invalid_argument);
  }

  TEST_CASE("letter grades map onto 1..13") {
    const auto s = RatingScale::letter13();
    CHECK(s.levels() == 13);
    CHECK(s.grade_to_number("F") == 1.0);
    CHECK(s.grade_to_number("D-") == 2.0);
    CHECK(s.grade_to_number("C") == 6.0);
    CHECK(s.grade_to_number("B") == 9.0);
    CHECK(s.grade_to_number("A+") == 13.0);
    CHECK(code_of([&] { s.grade_to_number("B?"); }) == ErrorCode::unknown_grade);
    for (std::size_t p = 0; p < s.grade_labels().size(); ++p)
      CHECK(s.grade_to_number(s.grade_labels()[p]) == 1.0 + static_cast<double>(p));
  }

  TEST_CASE("id index is a bijection in first-appearance order") {
    IdIndex ids;
    CHECK(ids.insert("b") == 0);
    CHECK(ids.insert("a") == 1);
    CHECK(ids.insert("b") == 0);
    CHECK(ids.size() == 2);
    CHECK(ids.external(1) == "a");
    CHECK(*ids.find("a") == 1);
    CHECK_FALSE(ids.find("c"));
  }

  TEST_CASE("sparse matrix traversal both ways") {
    SparseMatrix m(3, 4, {{2, 1, 5.0}, {0, 3, 1.0}, {0, 1, 2.0}, {1, 0, 4.0}});
    CHECK(m.nnz() == 4);
    REQUIRE(m.row(0).size() == 2);
    CHECK(m.row(0)[0].index == 1);
    CHECK(m.row(0)[1].index == 3);
    REQUIRE(m.col(1).size() == 2);
    CHECK(m.col(1)[0].index == 0);
    CHECK(m.col(1)[1].index == 2);
    CHECK(*m.at(2, 1) == 5.0);
    CHECK_FALSE(m.at(2, 2));
    CHECK(m.to_dense()(1, 0) == 4.0);
    const auto t = m.triplets();
    CHECK(t.front().row == 0);
    CHECK(t.back().row == 2);
    CHECK(code_of([] { SparseMatrix(2, 2, {{2, 0, 1.0}}); }) == ErrorCode::dimension_mismatch);
    CHECK(code_of([] { SparseMatrix(2, 2, {{0, 0, 1.0}, {0, 0, 2.0}}); }) ==
          ErrorCode::invalid_argument);
  }

  TEST_CASE("dataset stats") {
    const auto empty = dataset_stats(Dataset());
    CHECK(empty.users == 0);
    CHECK(empty.items == 0);
    CHECK(empty.ratings == 0);
    CHECK(empty.density == 0.0);

    std::vector<RatingRecord> recs{{"u1", "a", 4, {}}, {"u1", "b", 3, {}}, {"u2", "a", 5, {}}};
    const auto d = Dataset::from_records(recs, RatingScale::one_to_five());
    const auto s = dataset_stats(d);
    CHECK(s.users == 2);
    CHECK(s.items == 2);
    CHECK(s.ratings == 3);
    CHECK(s.density == doctest::Approx(0.75));
    CHECK(d.user_mean(0) == 3.5);
    CHECK(d.global_mean() == 4.0);
  }

  TEST_CASE("dataset duplicates overwrite and out-of-scale values are rejected") {
    std::vector<RatingRecord> recs{{"u", "a", 2, {}}, {"u", "a", 5, {}}};
    IngestReport rep;
    const auto d = Dataset::from_records(recs, RatingScale::one_to_five(), &rep);
    CHECK(d.num_ratings() == 1);
    CHECK(*d.rating(0, 0) == 5.0);
    CHECK(rep.duplicates == 1);
    std::vector<RatingRecord> bad{{"u", "a", 6, {}}};
    CHECK(code_of([&] { Dataset::from_records(bad, RatingScale::one_to_five()); }) ==
          ErrorCode::out_of_scale);
  }

  TEST_CASE("criteria tensor slices") {
    std::vector<CriteriaRecord> recs{cr("u", "m", {3, 5, 4, 4}, 4), cr("u", "n", {1, 2, 3, 4}, 2),
                                     cr("v", "m", {5, 5, 5, 5}, 5)};
    const auto t = CriteriaTensor::from_records(recs, 4, RatingScale::one_to_five());
    CHECK(t.num_cells() == 3);
    CHECK(t.slices() == 5);
    const auto overall = t.overall_slice();
    CHECK(*overall.rating(0, 0) == 4.0);
    CHECK(dataset_stats(overall).ratings == 3);
    CHECK(*t.criteria_slice(2).rating(0, 0) == 5.0);
    CHECK(code_of([&] { t.criteria_slice(0); }) == ErrorCode::criterion_out_of_range);
    CHECK(code_of([&] { t.criteria_slice(5); }) == ErrorCode::criterion_out_of_range);
    CHECK(t.records().size() == 3);

    const auto empty = CriteriaTensor::from_records({}, 4, RatingScale::one_to_five());
    CHECK(empty.overall_slice().num_ratings() == 0);
  }

  TEST_CASE("criteria tensor rejects partial cells") {
    std::vector<CriteriaRecord> short_rec{cr("u", "m", {3, 5, 4}, 4)};
    CHECK(code_of([&] {
            CriteriaTensor::from_records(short_rec, 4, RatingScale::one_to_five());
          }) == ErrorCode::invalid_argument);
    std::vector<CriteriaRecord> out{cr("u", "m", {3, 5, 4, 9}, 4)};
    CHECK(code_of([&] { CriteriaTensor::from_records(out, 4, RatingScale::one_to_five()); }) ==
          ErrorCode::out_of_scale);
  }
}
