#include <sstream>
#include <string>

#include "doctest.h"

#include "core/error.hpp"
#include "engine/model_dump.hpp"
#include "fixtures.hpp"
#include "ingest/synthetic.hpp"

using namespace mccf;
using Eigen::MatrixXd;

TEST_SUITE("model_dump") {
  TEST_CASE("round trip keeps every value bit for bit") {
    ModelDump d;
    d.fields = {{"model", "test"}, {"note", "a=b"}};
    MatrixXd m(2, 3);
    m << 0.1, -2.5e-300, 3.0, 1.0 / 3.0, 1e300, -0.0;
    d.matrices.emplace_back("m", m);
    d.similarities.push_back({"overall", {{"a", "b", "pearson", 0.123456789012345678}}});

    std::stringstream io;
    write_model_dump(io, d);
    const std::string text = io.str();
    CHECK(text.rfind("# mccf-model\nschema_version=1\n", 0) == 0);
    CHECK(text.size() >= 4);
    CHECK(text.substr(text.size() - 4) == "end\n");

    const ModelDump back = read_model_dump(io);
    CHECK(back.schema_version == 1);
    REQUIRE(back.field("note"));
    CHECK(*back.field("note") == "a=b");
    REQUIRE(back.matrix("m"));
    CHECK(*back.matrix("m") == m);
    REQUIRE(back.similarities.size() == 1);
    CHECK(back.similarities[0].rows[0].value == 0.123456789012345678);
    CHECK(back.similarities[0].rows[0].kind == "pearson");
  }

  TEST_CASE("malformed dumps are rejected with a line number") {
    auto line_of = [](const std::string& text) -> std::size_t {
      std::istringstream in(text);
      try {
        read_model_dump(in);
      } catch (const ParseError& e) {
        return e.line();
      }
      return 0;
    };
    CHECK(line_of("nope\n") == 1);
    CHECK(line_of("# mccf-model\nschema_version=2\nend\n") == 2);
    CHECK(line_of("# mccf-model\nschema_version=1\nmatrix m rows=1 cols=2\n1\nend\n") == 4);
    CHECK(line_of("# mccf-model\nschema_version=1\nsimilarities s\na,b,c\nend\n") == 4);
    CHECK(line_of("# mccf-model\nschema_version=1\nk=v\n") == 3);
  }

  TEST_CASE("item model dump") {
    const Dataset d = fixture::dataset(fixture::desk());
    FactorModel f;
    const SimilarityStore sims = latent_item_similarity(d, 2, 3, 1, &f);
    const ModelDump dump = dump_item_model(d, sims, &f);
    CHECK(*dump.field("model") == "svd");
    CHECK(*dump.field("items") == "8");
    CHECK(*dump.matrix("v") == f.v);
    CHECK(dump.similarities[0].rows.size() == sims.num_pairs());

    std::stringstream io;
    write_model_dump(io, dump);
    const ModelDump back = read_model_dump(io);
    CHECK(*back.matrix("u") == f.u);
    CHECK(back.matrix("sigma")->row(0).transpose() == f.sigma);
  }

  TEST_CASE("multi-criteria dump") {
    SyntheticSpec spec;
    spec.users = 20;
    spec.items = 12;
    spec.seed = 1;
    const auto t = CriteriaTensor::from_records(generate_synthetic(spec).records, 4, spec.scale);
    McConfig cfg;
    cfg.ranks = {3, 3, 3};
    cfg.pca_option = true;
    const McModel m = build_mc_model(t, cfg);
    const ModelDump dump = dump_mc_model(m);
    CHECK(*dump.field("ranks") == "3,3,3");
    CHECK(dump.matrix("core_mode1")->rows() == 3);
    CHECK(dump.matrix("factor2")->rows() == static_cast<Eigen::Index>(t.num_items()));
    CHECK(dump.matrix("slice_means"));
    CHECK(dump.similarities.size() == 4);

    std::stringstream io;
    write_model_dump(io, dump);
    const ModelDump back = read_model_dump(io);
    CHECK(*back.matrix("factor1") == m.tucker->factors[0]);
    CHECK(back.similarities[3].name == "criterion4");
  }
}
