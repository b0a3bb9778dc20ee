#include "engine/model_dump.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "core/error.hpp"

namespace mccf {

using Eigen::MatrixXd;

namespace {

void put_double(std::ostream& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, ptr - buf);
}

bool read_double(std::string_view s, double& v) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }
  [[noreturn]] void error(const std::string& what) const {
    throw ParseError(ErrorCode::parse, line_no_, what);
  }
  std::size_t line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

std::size_t parse_dim(const LineReader& r, std::string_view token, std::string_view key) {
  if (!starts_with(token, key)) r.error("expected '" + std::string(key) + "'");
  token.remove_prefix(key.size());
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) r.error("bad dimension");
  return v;
}

MatrixXd read_matrix(LineReader& r, std::size_t rows, std::size_t cols) {
  MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::string line;
  for (std::size_t i = 0; i < rows; ++i) {
    if (!r.next(line)) r.error("truncated matrix");
    std::istringstream row(line);
    std::string tok;
    for (std::size_t j = 0; j < cols; ++j) {
      double v = 0.0;
      if (!(row >> tok) || !read_double(tok, v)) r.error("bad matrix row");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
    if (row >> tok) r.error("matrix row too long");
  }
  return m;
}

ModelDump::SimilarityBlock similarity_block(std::string name, const SimilarityStore& store,
                                            const IdIndex& items) {
  ModelDump::SimilarityBlock block{std::move(name), {}};
  const std::string kind(to_string(store.kind()));
  for (const auto& p : store.pairs())
    block.rows.push_back({items.external(p.a), items.external(p.b), kind, p.value});
  return block;
}

std::string join_dims(const Dims3& d) {
  return std::to_string(d[0]) + "," + std::to_string(d[1]) + "," + std::to_string(d[2]);
}

}  // namespace

const std::string* ModelDump::field(const std::string& key) const {
  for (const auto& [k, v] : fields)
    if (k == key) return &v;
  return nullptr;
}

const MatrixXd* ModelDump::matrix(const std::string& name) const {
  for (const auto& [k, m] : matrices)
    if (k == name) return &m;
  return nullptr;
}

void write_model_dump(std::ostream& out, const ModelDump& dump) {
  out << "# mccf-model\n" << "schema_version=" << dump.schema_version << '\n';
  for (const auto& [k, v] : dump.fields) out << k << '=' << v << '\n';
  for (const auto& [name, m] : dump.matrices) {
    out << "matrix " << name << " rows=" << m.rows() << " cols=" << m.cols() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (j) out << ' ';
        put_double(out, m(i, j));
      }
      out << '\n';
    }
  }
  for (const auto& block : dump.similarities) {
    out << "similarities " << block.name << '\n';
    for (const auto& row : block.rows) {
      out << row.item_a << ',' << row.item_b << ',' << row.kind << ',';
      put_double(out, row.value);
      out << '\n';
    }
  }
  out << "end\n";
}

ModelDump read_model_dump(std::istream& in) {
  LineReader r(in);
  std::string line;
  if (!r.next(line) || line != "# mccf-model") r.error("missing '# mccf-model' header");
  if (!r.next(line) || !starts_with(line, "schema_version=")) r.error("missing schema_version");
  ModelDump dump;
  {
    std::string_view v(line);
    v.remove_prefix(std::string_view("schema_version=").size());
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), dump.schema_version);
    if (ec != std::errc() || ptr != v.data() + v.size()) r.error("bad schema_version");
    if (dump.schema_version != kModelSchemaVersion)
      r.error("unsupported schema_version " + std::to_string(dump.schema_version));
  }

  ModelDump::SimilarityBlock* block = nullptr;
  bool ended = false;
  while (r.next(line)) {
    if (line == "end") {
      ended = true;
      break;
    }
    if (starts_with(line, "matrix ")) {
      std::istringstream head(line.substr(7));
      std::string name, rows, cols;
      if (!(head >> name >> rows >> cols)) r.error("bad matrix header");
      const std::size_t nr = parse_dim(r, rows, "rows=");
      const std::size_t nc = parse_dim(r, cols, "cols=");
      dump.matrices.emplace_back(name, read_matrix(r, nr, nc));
      block = nullptr;
    } else if (starts_with(line, "similarities ")) {
      dump.similarities.push_back({line.substr(13), {}});
      block = &dump.similarities.back();
    } else if (block) {
      std::string_view rest(line);
      std::vector<std::string_view> parts;
      for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
        parts.push_back(rest.substr(0, pos));
        rest.remove_prefix(pos + 1);
      }
      parts.push_back(rest);
      double v = 0.0;
      if (parts.size() != 4 || !read_double(parts[3], v)) r.error("bad similarity row");
      block->rows.push_back(
          {std::string(parts[0]), std::string(parts[1]), std::string(parts[2]), v});
    } else {
      const auto eq = line.find('=');
      if (eq == std::string::npos || eq == 0) r.error("expected key=value");
      if (!dump.matrices.empty()) r.error("field after matrix data");
      dump.fields.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
  }
  if (!ended) r.error("missing 'end'");
  return dump;
}

ModelDump dump_item_model(const Dataset& d, const SimilarityStore& sims,
                          const FactorModel* factors) {
  ModelDump dump;
  dump.fields = {{"model", factors ? "svd" : "neighborhood"},
                 {"rank", std::to_string(factors ? factors->rank() : 0)},
                 {"users", std::to_string(d.num_users())},
                 {"items", std::to_string(d.num_items())},
                 {"ratings", std::to_string(d.num_ratings())},
                 {"similarity", std::string(to_string(sims.kind()))},
                 {"similarity_pairs", std::to_string(sims.num_pairs())}};
  if (factors) {
    dump.matrices.emplace_back("u", factors->u);
    dump.matrices.emplace_back("sigma", MatrixXd(factors->sigma.transpose()));
    dump.matrices.emplace_back("v", factors->v);
  }
  dump.similarities.push_back(similarity_block("overall", sims, d.items()));
  return dump;
}

ModelDump dump_mc_model(const McModel& model) {
  ModelDump dump;
  const auto& cfg = model.config;
  std::ostringstream weights;
  weights.precision(17);
  for (Eigen::Index c = 0; c < model.aggregation.w.size(); ++c)
    weights << (c ? "," : "") << model.aggregation.w(c);
  dump.fields = {{"model", "multi-criteria"},
                 {"decomposition", std::string(to_string(cfg.decomposition))},
                 {"ranks", join_dims(cfg.ranks)},
                 {"pca_option", cfg.pca_option ? "on" : "off"},
                 {"sim_space", std::string(to_string(cfg.sim_space))},
                 {"criteria_mode", std::string(to_string(cfg.criteria_mode))},
                 {"criteria", std::to_string(model.criteria)},
                 {"users", std::to_string(model.users.size())},
                 {"items", std::to_string(model.items.size())},
                 {"impute_iterations", std::to_string(model.impute_iterations)},
                 {"weights", weights.str()}};
  if (model.tucker) {
    const auto& tk = *model.tucker;
    dump.fields.emplace_back("core_dims", join_dims(tk.core.dims()));
    dump.matrices.emplace_back("core_mode1", mode_unfold(tk.core, 1));
    for (std::size_t s = 0; s < 3; ++s)
      dump.matrices.emplace_back("factor" + std::to_string(s + 1), tk.factors[s]);
  }
  for (std::size_t s = 0; s < model.slice_factors.size(); ++s) {
    const auto& f = model.slice_factors[s];
    const std::string tag = std::to_string(s);
    dump.matrices.emplace_back("u_slice" + tag, f.u);
    dump.matrices.emplace_back("sigma_slice" + tag, MatrixXd(f.sigma.transpose()));
    dump.matrices.emplace_back("v_slice" + tag, f.v);
  }
  if (cfg.pca_option) dump.matrices.emplace_back("slice_means", model.slice_means);
  for (std::size_t c = 0; c < model.similarities.size(); ++c)
    dump.similarities.push_back(similarity_block("criterion" + std::to_string(c + 1),
                                                 model.similarities[c], model.items));
  return dump;
}

}  // namespace mccf
