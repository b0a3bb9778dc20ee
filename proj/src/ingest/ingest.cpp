#include "ingest/ingest.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>

#include "core/error.hpp"

namespace mccf {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\n')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open '" + path.string() + "'");
  return in;
}

// Checked value parse for the multi-criteria format.
double parse_value(std::string_view field, const RatingScale& scale, std::size_t line_no) {
  double v = 0.0;
  if (!parse_number(field, v)) {
    if (!scale.has_grades())
      throw ParseError(ErrorCode::parse, line_no, "not a number: '" + std::string(field) + "'");
    try {
      v = scale.grade_to_number(field);
    } catch (const Error& e) {
      throw ParseError(e.code(), line_no, e.what());
    }
  }
  if (!scale.contains(v))
    throw ParseError(ErrorCode::out_of_scale, line_no,
                     "value " + std::string(field) + " outside rating scale");
  return v;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::vector<RatingRecord> parse_movielens(std::istream& in) {
  const RatingScale scale = RatingScale::one_to_five();
  std::vector<RatingRecord> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 4)
      throw ParseError(ErrorCode::parse, line_no,
                       "expected 4 tab-separated fields, got " + std::to_string(fields.size()));
    RatingRecord r;
    r.user_id = std::string(fields[0]);
    r.item_id = std::string(fields[1]);
    if (r.user_id.empty() || r.item_id.empty())
      throw ParseError(ErrorCode::parse, line_no, "empty user or item id");
    if (!parse_number(fields[2], r.overall))
      throw ParseError(ErrorCode::parse, line_no, "bad rating '" + std::string(fields[2]) + "'");
    if (!scale.contains(r.overall))
      throw ParseError(ErrorCode::out_of_scale, line_no,
                       "rating " + std::string(fields[2]) + " outside 1-5");
    std::int64_t ts = 0;
    if (!parse_number(fields[3], ts))
      throw ParseError(ErrorCode::parse, line_no, "bad timestamp '" + std::string(fields[3]) + "'");
    r.timestamp = ts;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RatingRecord> read_movielens(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_movielens(in);
}

void write_movielens(std::ostream& out, std::span<const RatingRecord> records) {
  for (const auto& r : records) {
    out << r.user_id << '\t' << r.item_id << '\t' << r.overall << '\t' << r.timestamp.value_or(0)
        << '\n';
  }
}

std::vector<CriteriaRecord> parse_multicriteria(std::istream& in, int criteria,
                                                const RatingScale& scale) {
  if (criteria < 1) fail(ErrorCode::invalid_argument, "criteria count must be at least 1");
  const std::size_t expected = static_cast<std::size_t>(criteria) + 3;
  std::vector<CriteriaRecord> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fields = split(line, ',');
    if (fields.size() != expected)
      throw ParseError(ErrorCode::parse, line_no,
                       "expected " + std::to_string(expected) + " fields, got " +
                           std::to_string(fields.size()));
    CriteriaRecord r;
    r.user_id = std::string(fields[0]);
    r.item_id = std::string(fields[1]);
    if (r.user_id.empty() || r.item_id.empty())
      throw ParseError(ErrorCode::parse, line_no, "empty user or item id");
    r.criteria.reserve(static_cast<std::size_t>(criteria));
    for (std::size_t c = 0; c < static_cast<std::size_t>(criteria); ++c)
      r.criteria.push_back(parse_value(fields[2 + c], scale, line_no));
    r.overall = parse_value(fields.back(), scale, line_no);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CriteriaRecord> read_multicriteria(const std::filesystem::path& path, int criteria,
                                               const RatingScale& scale) {
  auto in = open_input(path);
  return parse_multicriteria(in, criteria, scale);
}

void write_multicriteria(std::ostream& out, std::span<const CriteriaRecord> records) {
  out << "# user,item,criteria...,overall\n";
  for (const auto& r : records) {
    out << r.user_id << ',' << r.item_id;
    for (double c : r.criteria) out << ',' << c;
    out << ',' << r.overall << '\n';
  }
}

double grade_to_number(std::string_view grade, const RatingScale& scale) {
  return scale.grade_to_number(grade);
}

template <class Record>
std::vector<Record> density_filter(std::span<const Record> records, DensityFilterSpec spec) {
  std::vector<const Record*> kept;
  kept.reserve(records.size());
  for (const auto& r : records) kept.push_back(&r);

  auto drop_below = [&kept](auto key, std::size_t threshold) {
    if (threshold == 0) return false;
    std::unordered_map<std::string_view, std::size_t> counts;
    for (const Record* r : kept) ++counts[key(*r)];
    std::size_t before = kept.size();
    std::erase_if(kept, [&](const Record* r) { return counts[key(*r)] < threshold; });
    return kept.size() != before;
  };
  auto user = [](const Record& r) -> std::string_view { return r.user_id; };
  auto item = [](const Record& r) -> std::string_view { return r.item_id; };

  bool changed = true;
  while (changed) {
    bool users_dropped = drop_below(user, spec.min_user_ratings);
    bool items_dropped = drop_below(item, spec.min_item_ratings);
    changed = users_dropped || items_dropped;
  }

  std::vector<Record> out;
  out.reserve(kept.size());
  for (const Record* r : kept) out.push_back(*r);
  return out;
}

void validate(const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
    fail(ErrorCode::invalid_argument, "train fraction must lie strictly between 0 and 1");
}

bool assign_to_train(std::string_view user_id, std::string_view item_id, const SplitSpec& spec) {
  std::uint64_t h = splitmix64(spec.seed);
  h = splitmix64(h ^ fnv1a(user_id));
  h = splitmix64(h ^ fnv1a(item_id));
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  return u < spec.train_fraction;
}

template <class Record>
std::pair<std::vector<Record>, std::vector<Record>> split_train_test(
    std::span<const Record> records, const SplitSpec& spec) {
  validate(spec);
  std::pair<std::vector<Record>, std::vector<Record>> out;
  for (const auto& r : records) {
    if (assign_to_train(r.user_id, r.item_id, spec))
      out.first.push_back(r);
    else
      out.second.push_back(r);
  }
  return out;
}

template std::vector<RatingRecord> density_filter(std::span<const RatingRecord>, DensityFilterSpec);
template std::vector<CriteriaRecord> density_filter(std::span<const CriteriaRecord>,
                                                    DensityFilterSpec);
template std::pair<std::vector<RatingRecord>, std::vector<RatingRecord>> split_train_test(
    std::span<const RatingRecord>, const SplitSpec&);
template std::pair<std::vector<CriteriaRecord>, std::vector<CriteriaRecord>> split_train_test(
    std::span<const CriteriaRecord>, const SplitSpec&);

}  // namespace mccf
