#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "cnb/continuous.hpp"
#include "cnb/error.hpp"
#include "cnb/net_benefit.hpp"
#include "cnb/oracle.hpp"
#include "support/check.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace cnb;
using namespace cnb::oracle;
using namespace cnb::testing;

namespace {

double own_utility(const Individual& p, double score) {
  const bool treat = score > p.t_star;
  if (treat) return p.outcome ? p.a : p.b;
  return p.outcome ? p.c : p.d;
}

// Mean utility difference over every pairing of (score, outcome, weight)
// records with (utility, t*) records.
double exhaustive_difference(const UtilityPopulation& pop, std::size_t m1, std::size_t m2) {
  const std::size_t n = pop.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double total = 0.0;
  std::size_t count = 0;
  do {
    double diff = 0.0, wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Individual& rec = pop.individuals[perm[i]];
      Individual u = pop.individuals[i];
      u.outcome = rec.outcome;
      diff += rec.weight * (own_utility(u, rec.scores[m1]) - own_utility(u, rec.scores[m2]));
      wsum += rec.weight;
    }
    total += diff / wsum;
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total / static_cast<double>(count);
}

// sum_i h_i / n * (rescaled NB_1(t_i) - rescaled NB_2(t_i)) by direct counting.
double direct_expected_difference(const UtilityPopulation& pop) {
  const auto ds = pop.dataset();
  double total = 0.0;
  for (const auto& p : pop.individuals) {
    const double h = 1.0 / (1.0 / (p.a - p.c) + 1.0 / (p.d - p.b));
    total += h * (direct_rescaled(ds, 0, p.t_star) - direct_rescaled(ds, 1, p.t_star));
  }
  return total / static_cast<double>(pop.size());
}

UtilityPopulation single(double score) {
  UtilityPopulation pop;
  pop.models = {"m"};
  Individual p;
  p.scores = {score};
  p.outcome = 1;
  p.a = 1;
  p.b = -1;
  p.c = 0;
  p.d = 0;
  p.t_star = 0.5;
  pop.individuals = {p};
  return pop;
}

}  // namespace

TEST_CASE("optimal threshold") {
  CHECK(optimal_threshold(1, -1, 0, 0) == 0.5);
  CHECK(optimal_threshold(10, -1, 1, 0) == doctest::Approx(1.0 / 10.0).epsilon(1e-15));
  CHECK_THROWS_AS(optimal_threshold(0, -1, 0, 0), InputError);
  CHECK_THROWS_AS(optimal_threshold(1, 0, 0, 0), InputError);
}

TEST_CASE("brute-force utility examples") {
  CHECK(brute_force_utility(single(0.6), "m") == 1.0);
  CHECK(brute_force_utility(single(0.4), "m") == 0.0);
  auto both = single(0.6);
  both.individuals.push_back(single(0.4).individuals[0]);
  CHECK(brute_force_utility(both, "m") == 0.5);
  both.validate();
}

TEST_CASE("generation is deterministic and consistent") {
  GeneratorConfig cfg;
  cfg.n = 50;
  cfg.seed = 99;
  cfg.utilities = ImportanceUtilities{Tabulated{{0.1, 0.5}, {1.0, 3.0}}, Tabulated::constant(0.2),
                                      Tabulated{{0.1, 0.9}, {1.0, 2.0}}};
  const auto a = generate_population(cfg);
  const auto b = generate_population(cfg);
  REQUIRE(a.size() == 50);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a.individuals[i];
    const auto& y = b.individuals[i];
    CHECK(x.scores == y.scores);
    CHECK(x.outcome == y.outcome);
    CHECK(x.a == y.a);
    CHECK(x.b == y.b);
    CHECK(x.c == y.c);
    CHECK(x.d == y.d);
    CHECK(x.t_star == y.t_star);
    CHECK(x.a > x.c);
    CHECK(x.d > x.b);
    CHECK_NEAR(x.t_star, (x.d - x.b) / ((x.a - x.c) + (x.d - x.b)), 1e-12);
  }
  a.validate();
}

TEST_CASE("constant utilities or threshold give one shared t*") {
  GeneratorConfig cfg;
  cfg.n = 20;
  cfg.utilities = ConstantUtilities{3.0, -1.0, 0.0, 0.0};
  for (const auto& p : generate_population(cfg).individuals) CHECK(p.t_star == doctest::Approx(0.25).epsilon(1e-15));
  cfg.utilities = ImportanceUtilities{};
  cfg.threshold = ConstantThreshold{0.2};
  for (const auto& p : generate_population(cfg).individuals) CHECK(p.t_star == 0.2);
}

TEST_CASE("threshold distributions stay inside (0,1)") {
  GeneratorConfig cfg;
  cfg.n = 2000;
  cfg.threshold = LogNormalThreshold{0.5, 0.4};
  for (const auto& p : generate_population(cfg).individuals) {
    CHECK(p.t_star > 0.0);
    CHECK(p.t_star < 1.0);
  }
  cfg.threshold = DiscreteThreshold{{0.1, 0.3}, {0.25, 0.75}};
  std::size_t low = 0;
  for (const auto& p : generate_population(cfg).individuals) {
    CHECK((p.t_star == 0.1 || p.t_star == 0.3));
    low += p.t_star == 0.1;
  }
  CHECK(low > 400);
  CHECK(low < 600);
}

TEST_CASE("exhaustive permutation oracle") {
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.utilities = ImportanceUtilities{Tabulated{{0.1, 0.5}, {0.5, 4.0}}, Tabulated::constant(-0.3),
                                        Tabulated::constant(0.7)};
    const auto pop = generate_population(cfg);
    const auto report = verify_expected_nb(pop, "model1", "model2");
    CHECK(report.passed);
    CHECK(report.permutations == 720);
    CHECK(report.abs_error < 1e-9);
    CHECK_NEAR(report.mean_utility_difference, exhaustive_difference(pop, 0, 1), 1e-12);
    CHECK_NEAR(report.expected_nb_difference, direct_expected_difference(pop), 1e-12);
  }
}

TEST_CASE("shared t* reduces to the point-mass identity") {
  GeneratorConfig cfg;
  cfg.utilities = ConstantUtilities{2.0, -2.0, 0.0, 0.0};
  const auto pop = generate_population(cfg);
  const auto ds = pop.dataset();
  const double expected = rescaled_net_benefit(sweep(ds, "model1"), 0.5) - rescaled_net_benefit(sweep(ds, "model2"), 0.5);
  CHECK_NEAR(expected_nb_difference(pop, "model1", "model2"), expected, 1e-15);
  CHECK_NEAR(brute_force_utility(pop, "model1") - brute_force_utility(pop, "model2"), expected, 1e-14);
  CHECK(verify_expected_nb(pop, "model1", "model2").abs_error < 1e-14);
}

TEST_CASE("exhaustive mode refuses large populations") {
  GeneratorConfig cfg;
  cfg.n = 9;
  CHECK_THROWS_AS(verify_expected_nb(generate_population(cfg), "model1", "model2"), InputError);
}

TEST_CASE("monte-carlo permutation oracle") {
  GeneratorConfig cfg;
  cfg.n = 10000;
  cfg.seed = 3;
  const auto pop = generate_population(cfg);
  VerifyOptions opts;
  opts.mode = VerifyMode::kMonteCarlo;
  opts.permutations = 200;
  const auto report = verify_expected_nb(pop, "model1", "model2", opts);
  CHECK(report.passed);
  CHECK(report.standard_error > 0.0);
  CHECK(report.abs_error <= 3.0 * report.standard_error + 1e-12);
  CHECK_NEAR(report.expected_nb_difference, direct_expected_difference(pop), 1e-12);
}

TEST_CASE("property: utility invariant to order and to a common utility shift") {
  Rng rng(51);
  for (int rep = 0; rep < 10; ++rep) {
    GeneratorConfig cfg;
    cfg.n = 40;
    cfg.seed = 100 + rep;
    auto pop = generate_population(cfg);
    const double u1 = brute_force_utility(pop, "model1");
    const double du = u1 - brute_force_utility(pop, "model2");

    auto shuffled = pop;
    std::shuffle(shuffled.individuals.begin(), shuffled.individuals.end(), rng.engine());
    CHECK_NEAR(brute_force_utility(shuffled, "model1"), u1, 1e-13);

    const double k = rng.uniform(-5.0, 5.0);
    for (auto& p : pop.individuals) {
      p.a += k;
      p.b += k;
      p.c += k;
      p.d += k;
    }
    CHECK_NEAR(brute_force_utility(pop, "model1") - brute_force_utility(pop, "model2"), du, 1e-12);
    CHECK_NEAR(brute_force_utility(pop, "model1"), u1 + k, 1e-12);
  }
}

TEST_CASE("disagreement witness") {
  const auto w = aunb_disagreement_witness();
  REQUIRE(w.has_value());
  CHECK(w->aunb_margin() > 1e-6);
  CHECK(w->aunb_alt_margin() > 1e-6);
  // recompute from the definitions on the two-atom density
  const auto& ds = w->dataset;
  auto area = [&](std::size_t m, bool alt) {
    double s = 0.0;
    for (auto [t, p] : {std::pair{w->t1, w->mix}, std::pair{w->t2, 1 - w->mix}})
      s += p * (alt ? (1 - t) / t : 1.0) * direct_nb(ds, m, t);
    return s;
  };
  CHECK_NEAR(area(0, false), w->aunb1, 1e-12);
  CHECK_NEAR(area(1, false), w->aunb2, 1e-12);
  CHECK_NEAR(area(0, true), w->aunb_alt1, 1e-12);
  CHECK_NEAR(area(1, true), w->aunb_alt2, 1e-12);
  CHECK(area(0, false) > area(1, false));
  CHECK(area(1, true) > area(0, true));
}

TEST_CASE("point-mass densities and identical models never disagree") {
  Rng rng(52);
  for (int rep = 0; rep < 200; ++rep) {
    const auto ds = random_dataset(rng, {.n = 4 + rng.index(6), .models = 2, .tie_grid = 10});
    const double t = rng.uniform(0.05, 0.95);
    const double d = aunb(ds, "m1", PointMass{t, 1.0}) - aunb(ds, "m2", PointMass{t, 1.0});
    const double d_alt = aunb_alt(ds, "m1", PointMass{t, 1.0}) - aunb_alt(ds, "m2", PointMass{t, 1.0});
    CHECK((d > 0) == (d_alt > 0));
    CHECK((d < 0) == (d_alt < 0));
    const std::vector<double> f(ds.scores(0).begin(), ds.scores(0).end());
    const EvaluationDataset twins({"a", "b"}, {f, f}, std::vector<int>(ds.outcomes().begin(), ds.outcomes().end()));
    const WeightSpec two_atoms = Mixture{{PointMass{t, 0.5}, PointMass{0.5 * t, 0.5}}};
    CHECK(aunb(twins, "a", two_atoms) - aunb(twins, "b", two_atoms) == 0.0);
    CHECK(aunb_alt(twins, "a", two_atoms) - aunb_alt(twins, "b", two_atoms) == 0.0);
  }
}

TEST_CASE("two-group scenario") {
  const auto pop = two_group_scenario();
  pop.validate();
  const auto r = analyze_two_groups(pop, "model1", "model2");
  CHECK(r.g1_share + r.g2_share == doctest::Approx(1.0));
  CHECK(r.weight_ratio == doctest::Approx(1e4 * r.g2_share / r.g1_share).epsilon(1e-12));
  CHECK(r.g2_fraction > 0.99);
  CHECK_NEAR(r.g1_contribution + r.g2_contribution, r.utility_difference, 1e-12);
  CHECK_NEAR(r.utility_difference, brute_force_utility(pop, "model1") - brute_force_utility(pop, "model2"), 1e-12);

  TwoGroupConfig equal;
  equal.g1_scale = equal.g2_scale = 1.0;
  const auto e = analyze_two_groups(two_group_scenario(equal), "model1", "model2");
  CHECK(e.g1_weight / e.g1_share == doctest::Approx(e.g2_weight / e.g2_share).epsilon(1e-12));
}
