#include <doctest.h>

#include <cstring>
#include <sstream>

#include "cnb/dataset.hpp"
#include "cnb/error.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace cnb;
using namespace cnb::testing;

namespace {

CsvSchema simple_schema() { return CsvSchema{"outcome", {"model"}, std::nullopt}; }

}  // namespace

TEST_CASE("reads the four-row demo") {
  std::istringstream in("outcome,model\n1,0.9\n0,0.2\n1,0.8\n0,0.1\n");
  const auto ds = read_csv(in, simple_schema());
  CHECK(ds.size() == 4);
  CHECK(prevalence(ds) == 0.5);
  CHECK(ds.total_weight() == 4.0);
}

TEST_CASE("out of range score names the row") {
  std::istringstream in("outcome,model\n1,0.9\n0,1.2\n");
  try {
    read_csv(in, simple_schema());
    FAIL("expected DataError");
  } catch (const DataError& e) {
    REQUIRE(e.row().has_value());
    CHECK(*e.row() == 2);
    CHECK(e.column() == std::optional<std::string>("model"));
  }
}

TEST_CASE("bad rows are rejected") {
  const char* cases[] = {
      "outcome,model\n2,0.5\n",         // outcome not binary
      "outcome,model\n1,abc\n",         // not a number
      "outcome,model\n1,nan\n",         // not finite
      "outcome,model\n1\n",             // short row
      "outcome,model\n1,-0.1\n",        // negative score
      "outcome\n1\n",                   // missing score column
  };
  for (const char* text : cases) {
    std::istringstream in(text);
    CAPTURE(text);
    CHECK_THROWS_AS(read_csv(in, simple_schema()), InputError);
  }
}

TEST_CASE("weights") {
  std::istringstream in("outcome,model,weight\n1,0.9,2\n0,0.2,1\n1,0.8,1\n0,0.1,0\n");
  const auto ds = read_csv(in, CsvSchema{"outcome", {"model"}, "weight"});
  CHECK(ds.total_weight() == 4.0);
  CHECK(prevalence(ds) == doctest::Approx(0.75));

  std::istringstream neg("outcome,model,weight\n1,0.9,-1\n");
  CHECK_THROWS_AS(read_csv(neg, CsvSchema{"outcome", {"model"}, "weight"}), DataError);
  std::istringstream zero("outcome,model,weight\n1,0.9,0\n0,0.1,0\n");
  CHECK_THROWS_AS(read_csv(zero, CsvSchema{"outcome", {"model"}, "weight"}), InputError);
}

TEST_CASE("prevalence examples") {
  EvaluationDataset all_events({"m"}, {{0.2, 0.4, 0.6}}, {1, 1, 1});
  CHECK(prevalence(all_events) == 1.0);
  EvaluationDataset weighted({"m"}, {{0.2, 0.4}}, {1, 0}, {3.0, 1.0});
  CHECK(prevalence(weighted) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(EvaluationDataset({"m"}, {{0.5}}, {1, 0}), InputError);
  CHECK_THROWS_AS(EvaluationDataset({"m", "m"}, {{0.5}, {0.5}}, {1}), InputError);
  CHECK_THROWS_AS(EvaluationDataset({"m"}, {{0.5}}, {1}, {1.0, 2.0}), InputError);
  CHECK_THROWS_AS(EvaluationDataset({}, {}, {}), InputError);
  const auto ds = demo4();
  CHECK_THROWS_AS(ds.model_index("nope"), InputError);
  CHECK(ds.model_index("model") == 0);
}

TEST_CASE("header BOM and CRLF") {
  std::istringstream in("\xEF\xBB\xBFoutcome,model\r\n1,0.9\r\n0,0.2\r\n");
  const auto ds = read_csv(in, simple_schema());
  CHECK(ds.size() == 2);
}

TEST_CASE("schema parsing and inference") {
  const auto s = parse_schema("outcome=y,scores=a:b,weight=w");
  CHECK(s.outcome == "y");
  CHECK(s.scores == std::vector<std::string>{"a", "b"});
  CHECK(s.weight == std::optional<std::string>("w"));
  CHECK_THROWS_AS(parse_schema("scores=a"), InputError);
  CHECK_THROWS_AS(parse_schema("outcome=y,bogus=1,scores=a"), InputError);

  const auto inferred = infer_schema({"id_score", "outcome", "weight", "other"});
  CHECK(inferred.outcome == "outcome");
  CHECK(inferred.weight == std::optional<std::string>("weight"));
  CHECK(inferred.scores == std::vector<std::string>{"id_score", "other"});
}

TEST_CASE("property: write then read is bit identical") {
  Rng rng(101);
  for (int rep = 0; rep < 25; ++rep) {
    DatasetShape shape;
    shape.n = 1 + rng.index(60);
    shape.models = 1 + rng.index(3);
    shape.score_lo = 0.0;
    shape.score_hi = 1.0;
    shape.weighted = rep % 2 == 0;
    const auto ds = random_dataset(rng, shape);
    std::ostringstream out;
    write_csv(out, ds);
    std::istringstream in(out.str());
    const auto back = read_csv(in, default_schema(ds));
    REQUIRE(back.size() == ds.size());
    REQUIRE(back.models() == ds.models());
    for (std::size_t m = 0; m < ds.models().size(); ++m)
      for (std::size_t i = 0; i < ds.size(); ++i)
        CHECK(std::memcmp(&back.scores(m)[i], &ds.scores(m)[i], sizeof(double)) == 0);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      CHECK(back.outcomes()[i] == ds.outcomes()[i]);
      CHECK(std::memcmp(&back.weights()[i], &ds.weights()[i], sizeof(double)) == 0);
    }
  }
}

TEST_CASE("property: prevalence invariant to weight scale and matches direct count") {
  Rng rng(7);
  for (int rep = 0; rep < 30; ++rep) {
    DatasetShape shape;
    shape.n = 2 + rng.index(40);
    shape.weighted = true;
    const auto ds = random_dataset(rng, shape);
    const double c = rng.uniform(0.01, 100.0);
    std::vector<double> w(ds.weights().begin(), ds.weights().end());
    for (double& x : w) x *= c;
    const EvaluationDataset scaled_ds({"m1", "m2"},
                                      {std::vector<double>(ds.scores(0).begin(), ds.scores(0).end()),
                                       std::vector<double>(ds.scores(1).begin(), ds.scores(1).end())},
                                      std::vector<int>(ds.outcomes().begin(), ds.outcomes().end()), w);
    CHECK(prevalence(scaled_ds) == doctest::Approx(prevalence(ds)).epsilon(1e-13));
    CHECK(prevalence(ds) == doctest::Approx(direct_prevalence(ds)).epsilon(1e-13));
  }
}

TEST_CASE("select_rows carries weights") {
  EvaluationDataset ds({"m"}, {{0.1, 0.5, 0.9}}, {0, 1, 1}, {1.0, 2.0, 3.0});
  const std::vector<std::size_t> rows = {2, 2, 0};
  const auto sub = ds.select_rows(rows);
  CHECK(sub.size() == 3);
  CHECK(sub.total_weight() == 7.0);
  CHECK(sub.scores(0)[0] == 0.9);
  CHECK(sub.outcomes()[2] == 0);
}
