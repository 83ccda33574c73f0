#include <doctest.h>

#include "cnb/confusion.hpp"
#include "cnb/error.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace cnb;
using namespace cnb::testing;

TEST_CASE("demo cells at three thresholds") {
  const auto curve = sweep(demo4(), "model");
  auto c = confusion_at(curve, 0.5);
  CHECK(c.tp == 0.5);
  CHECK(c.fp == 0.0);
  CHECK(c.fn == 0.0);
  CHECK(c.tn == 0.5);
  c = confusion_at(curve, 0.95);
  CHECK(c.tp == 0.0);
  CHECK(c.fp == 0.0);
  CHECK(c.fn == 0.5);
  CHECK(c.tn == 0.5);
  c = confusion_at(curve, 0.05);
  CHECK(c.tp == 0.5);
  CHECK(c.fp == 0.5);
  CHECK(c.fn == 0.0);
  CHECK(c.tn == 0.0);
  c = confusion_at(curve, 0.3);
  CHECK(c.tp + c.fp + c.fn + c.tn == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("score equal to threshold is not flagged") {
  EvaluationDataset ds({"m"}, {{0.3, 0.7}}, {1, 0});
  const auto curve = sweep(ds, "m");
  CHECK(curve.tp(0.3) == 0.0);
  CHECK(curve.fp(0.7) == 0.0);
  CHECK(curve.fp(std::nextafter(0.7, 0.0)) == 0.5);
}

TEST_CASE("threshold and model validation") {
  const auto curve = sweep(demo4(), "model");
  CHECK_THROWS_AS(confusion_at(curve, 0.0), InputError);
  CHECK_THROWS_AS(confusion_at(curve, 1.0), InputError);
  CHECK_THROWS_AS(confusion_at(curve, std::nan("")), InputError);
  CHECK_THROWS_AS(sweep(demo4(), "other"), InputError);
}

TEST_CASE("property: curve matches direct counting everywhere") {
  Rng rng(11);
  for (int rep = 0; rep < 40; ++rep) {
    DatasetShape shape;
    shape.n = 1 + rng.index(50);
    shape.models = 1;
    shape.weighted = rep % 3 != 0;
    shape.tie_grid = rep % 2 ? 10 : 0;
    const auto ds = random_dataset(rng, shape);
    const auto curve = sweep(ds, "m1");
    std::vector<double> probes;
    for (int k = 0; k < 30; ++k) probes.push_back(rng.uniform(1e-6, 1 - 1e-6));
    for (double f : ds.scores(0)) {
      if (f > 0 && f < 1) probes.push_back(f);
      probes.push_back(std::clamp(std::nextafter(f, 0.0), 1e-9, 1 - 1e-9));
    }
    for (double t : probes) {
      const auto c = confusion_at(curve, t);
      const auto d = count_cells(ds, 0, t);
      CHECK(c.tp == doctest::Approx(d.tp).epsilon(1e-13));
      CHECK(c.fp == doctest::Approx(d.fp).epsilon(1e-13));
      CHECK(c.fn == doctest::Approx(d.fn).epsilon(1e-13));
      CHECK(c.tn == doctest::Approx(d.tn).epsilon(1e-13));
      CHECK(c.tp + c.fp + c.fn + c.tn == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("property: TP and FP are nonincreasing in t") {
  Rng rng(12);
  for (int rep = 0; rep < 20; ++rep) {
    const auto ds = random_dataset(rng, {.n = 40, .models = 1, .weighted = true});
    const auto curve = sweep(ds, "m1");
    for (std::size_t j = 1; j < curve.tp_levels().size(); ++j) {
      CHECK(curve.tp_levels()[j] <= curve.tp_levels()[j - 1]);
      CHECK(curve.fp_levels()[j] <= curve.fp_levels()[j - 1]);
    }
    CHECK(curve.tp_levels().back() == 0.0);
    CHECK(curve.fp_levels().back() == 0.0);
    CHECK(curve.prevalence() == doctest::Approx(direct_prevalence(ds)).epsilon(1e-13));
  }
}

TEST_CASE("property: multiplying all weights leaves the curve unchanged") {
  Rng rng(13);
  for (int rep = 0; rep < 20; ++rep) {
    const auto ds = random_dataset(rng, {.n = 30, .models = 1, .weighted = true});
    const double c = rng.uniform(0.1, 50.0);
    std::vector<double> w(ds.weights().begin(), ds.weights().end());
    for (double& x : w) x *= c;
    EvaluationDataset scaled_ds({"m1"}, {std::vector<double>(ds.scores(0).begin(), ds.scores(0).end())},
                                std::vector<int>(ds.outcomes().begin(), ds.outcomes().end()), w);
    const auto a = sweep(ds, "m1");
    const auto b = sweep(scaled_ds, "m1");
    REQUIRE(a.jump_points() == b.jump_points());
    for (std::size_t j = 0; j < a.tp_levels().size(); ++j) {
      CHECK(a.tp_levels()[j] == doctest::Approx(b.tp_levels()[j]).epsilon(1e-13));
      CHECK(a.fp_levels()[j] == doctest::Approx(b.fp_levels()[j]).epsilon(1e-13));
    }
  }
}
