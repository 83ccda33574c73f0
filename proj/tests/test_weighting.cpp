#include <doctest.h>

#include "cnb/continuous.hpp"
#include "cnb/error.hpp"
#include "cnb/net_benefit.hpp"
#include "cnb/weighting.hpp"
#include "support/check.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace cnb;
using namespace cnb::testing;

namespace {

// Midpoint rule with a million panels in total, spread over the pieces
// between `breaks` so no panel straddles a jump.
double riemann(const std::function<double(double)>& g, double a, double b, std::vector<double> breaks = {}) {
  constexpr int kPanels = 1000000;
  std::vector<double> cuts = {a, b};
  for (double x : breaks)
    if (x > a && x < b) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const int panels = std::max(1, static_cast<int>(kPanels * (cuts[k + 1] - cuts[k]) / (b - a)));
    const double h = (cuts[k + 1] - cuts[k]) / panels;
    double s = 0.0;
    for (int j = 0; j < panels; ++j) s += g(cuts[k] + (j + 0.5) * h);
    total += s * h;
  }
  return total;
}

}  // namespace

TEST_CASE("weight values") {
  CHECK(weight_value(Parabola{1.0}, 0.5) == 0.25);
  CHECK(weight_value(Uniform{1.0}, 0.123) == 1.0);
  const WeightSpec fp_harm = ThresholdDensityConstantFpHarm{share(Uniform{1.0})};
  CHECK(weight_value(fp_harm, 0.3) == doctest::Approx(0.7).epsilon(1e-15));
  const WeightSpec tp_benefit = ThresholdDensityConstantTpBenefit{share(Uniform{1.0})};
  CHECK(weight_value(tp_benefit, 0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK_THROWS_AS(weight_value(PointMass{0.1, 1.0}, 0.1), InputError);
  CHECK_THROWS_AS(weight_value(Parabola{1.0}, 0.0), InputError);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(WeightSpec(PointMass{0.0, 1.0}), InputError);
  CHECK_THROWS_AS(WeightSpec(PointMass{0.5, -1.0}), InputError);
  CHECK_THROWS_AS(WeightSpec(Parabola{-1.0}), InputError);
  CHECK_THROWS_AS(WeightSpec(TruncatedGaussian{0.1, 0.0, 0.0, 1.0, 1.0}), InputError);
  CHECK_THROWS_AS(WeightSpec(TruncatedGaussian{0.1, 0.02, 0.5, 0.4, 1.0}), InputError);
  CHECK_THROWS_AS(WeightSpec(Tabulated{{0.5, 0.4}, {1.0, 1.0}}), InputError);
  CHECK_THROWS_AS(WeightSpec(Tabulated{{0.5}, {-1.0}}), InputError);
  CHECK_THROWS_AS(WeightSpec(Mixture{}), InputError);
}

TEST_CASE("harmonic weight") {
  CHECK(harmonic_weight(2, 2) == 1.0);
  CHECK(harmonic_weight(10, 0.5) == doctest::Approx(1.0 / 2.1).epsilon(1e-15));
  CHECK(harmonic_weight(15, 1) == doctest::Approx(0.9375).epsilon(1e-15));
  CHECK_THROWS_AS(harmonic_weight(0, 1), InputError);
  CHECK_THROWS_AS(harmonic_weight(1, -1), InputError);
}

TEST_CASE("property: harmonic weight symmetric, bounded and monotone") {
  Rng rng(31);
  for (int k = 0; k < 2000; ++k) {
    const double x = rng.uniform(0.01, 20.0);
    const double y = rng.uniform(0.01, 20.0);
    const double dx = rng.uniform(0.0, 5.0);
    const double h = harmonic_weight(x, y);
    CHECK(h == harmonic_weight(y, x));
    CHECK(h <= std::min(x, y));
    CHECK(harmonic_weight(x + dx, y) >= h);
  }
}

TEST_CASE("cumulative examples") {
  const auto par = cumulative(Parabola{1.0});
  CHECK(par.w1(1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(par.w0(1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(par.w1(0.0) == 0.0);
  CHECK(par.method() == IntegrationMethod::kClosedForm);
  const auto pm = cumulative(PointMass{0.1, 1.0});
  CHECK(pm.w1(0.2) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(pm.w1(0.1) == 0.0);
  CHECK(pm.w0(0.2) == doctest::Approx(1.0 / 0.9).epsilon(1e-15));
  CHECK(pm.w1(0.0) == 0.0);
}

TEST_CASE("divergence is reported with its endpoint") {
  CHECK_THROWS_AS(cumulative(Uniform{1.0}), DivergenceError);
  const CumulativeWeights u(Uniform{1.0});
  CHECK(u.diverges_at_zero());
  CHECK(u.diverges_at_one());
  try {
    (void)u.w1(0.5);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.endpoint() == Endpoint::kZero);
  }
  CHECK(u.w1_between(0.2, 0.4) == doctest::Approx(std::log(2.0)).epsilon(1e-13));
  CHECK(u.w0_between(0.2, 0.4) == doctest::Approx(std::log(0.8 / 0.6)).epsilon(1e-13));

  const auto fp = cumulative(ThresholdDensityConstantTpBenefit{share(Uniform{1.0})});
  CHECK_FALSE(fp.diverges_at_zero());
  CHECK(fp.diverges_at_one());
  try {
    (void)fp.w0(1.0);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.endpoint() == Endpoint::kOne);
  }
}

TEST_CASE("normalize") {
  const auto p = normalize(Parabola{1.0});
  REQUIRE(p.get_if<Parabola>() != nullptr);
  CHECK(p.get_if<Parabola>()->scale == doctest::Approx(2.0).epsilon(1e-14));
  for (double t : {0.05, 0.1, 0.5, 0.9}) {
    const auto m = normalize(PointMass{t, 1.0});
    REQUIRE(m.get_if<PointMass>() != nullptr);
    CHECK(m.get_if<PointMass>()->mass == t);
    CHECK(normalize(m).get_if<PointMass>()->mass == t);
  }
  const auto twice = normalize(p);
  CHECK(twice.get_if<Parabola>()->scale == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(normalize(Uniform{1.0}), DivergenceError);
  const WeightSpec tg = TruncatedGaussian{0.3, 0.1, 0.05, 0.9, 1.0};
  CHECK(is_normalized(normalize(tg)));
  CHECK(cumulative(normalize(tg)).w1(1.0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_FALSE(is_normalized(tg));
}

TEST_CASE("presets") {
  const auto lifestyle = example_weight("lifestyle");
  CHECK(weight_value(lifestyle.spec, 0.12) == 0.0);
  CHECK(weight_value(lifestyle.spec, 0.08) > 0.0);
  CHECK(lifestyle.quad.epsilon.has_value());

  const auto raw = example_weight("lognormal_threshold", false);
  const auto* fp = raw.spec.get_if<ThresholdDensityConstantFpHarm>();
  REQUIRE(fp != nullptr);
  CHECK(total_mass(*fp->density) == doctest::Approx(1.0).epsilon(1e-6));
  // log-normal density from its own definition
  const double s2 = std::log(1 + 0.09);
  const double mu = std::log(0.1) - s2 / 2;
  const double t = 0.13;
  const double expected = std::exp(-std::pow(std::log(t) - mu, 2) / (2 * s2)) / (t * std::sqrt(2 * M_PI * s2));
  CHECK(weight_value(*fp->density, t) == doctest::Approx(expected).epsilon(1e-12));

  const auto statins = example_weight("statins");
  const auto ds = demo4();
  const auto curve = sweep(ds, "model");
  CHECK(continuous_net_benefit(ds, "model", statins.spec).value == net_benefit(curve, 0.1));
  CHECK(example_weights().size() == 3);
  CHECK_THROWS_AS(example_weight("nope"), InputError);
}

TEST_CASE("cumulative matches a million-panel Riemann sum") {
  struct Case {
    const char* name;
    WeightSpec spec;
    std::function<double(double)> omega;
    std::vector<double> breaks;
  };
  const auto tg_omega = [](double t) {
    if (t < 0.05 || t >= 0.15) return 0.0;
    const double z = normal_cdf(0.15, 0.1, 0.02) - normal_cdf(0.05, 0.1, 0.02);
    return normal_pdf(t, 0.1, 0.02) / z;
  };
  const auto tab_omega = [](double t) {
    if (t <= 0.2) return 0.0;
    if (t >= 0.6) return 3.0;
    return (t - 0.2) / 0.4 * 3.0;
  };
  std::vector<Case> cases = {
      {"parabola", Parabola{1.5}, [](double t) { return 1.5 * t * (1 - t); }, {}},
      {"tabulated", Tabulated{{0.2, 0.6}, {0.0, 3.0}}, tab_omega, {0.2, 0.6}},
      {"truncated_gaussian", TruncatedGaussian{0.1, 0.02, 0.05, 0.15, 1.0}, tg_omega, {0.05, 0.15}},
      {"constant_fp_harm", ThresholdDensityConstantFpHarm{share(Parabola{6.0})},
       [](double t) { return 6.0 * t * (1 - t) * (1 - t); }, {}},
  };
  for (const auto& c : cases) {
    CAPTURE(c.name);
    const auto cw = cumulative(c.spec);
    for (double x : {0.1, 0.37, 0.6, 0.95}) {
      CHECK_NEAR(cw.w1(x), riemann([&](double t) { return c.omega(t) / t; }, 0.0, x, c.breaks), 1e-6);
      CHECK_NEAR(cw.w0(x), riemann([&](double t) { return c.omega(t) / (1 - t); }, 0.0, x, c.breaks), 1e-6);
    }
  }
}

TEST_CASE("property: W1 and W0 nondecreasing and pieces additive") {
  Rng rng(32);
  const std::vector<WeightSpec> specs = {
      Parabola{1.0}, TruncatedGaussian{0.2, 0.1, 0.01, 0.6, 1.0}, LogNormalDensity{0.1, 0.03, 1.0},
      Mixture{{PointMass{0.3, 0.5}, Parabola{2.0}}}, Tabulated{{0.1, 0.5, 0.9}, {0.0, 2.0, 0.0}}};
  for (const auto& spec : specs) {
    CAPTURE(spec.kind());
    const auto cw = cumulative(spec);
    double prev1 = 0, prev0 = 0;
    for (int k = 1; k <= 50; ++k) {
      const double x = k / 51.0;
      const double a = cw.w1(x), b = cw.w0(x);
      CHECK(a >= prev1);
      CHECK(b >= prev0);
      prev1 = a;
      prev0 = b;
    }
    for (int k = 0; k < 20; ++k) {
      double x = rng.uniform(0.01, 0.99), y = rng.uniform(0.01, 0.99);
      if (x > y) std::swap(x, y);
      CHECK_NEAR(cw.w1_between(x, y), cw.w1(y) - cw.w1(x), 1e-9);
      CHECK_NEAR(cw.w0_between(x, y), cw.w0(y) - cw.w0(x), 1e-9);
    }
  }
}

TEST_CASE("canonical forms by dual computation") {
  Rng rng(33);
  const WeightSpec density = TruncatedGaussian{0.3, 0.15, 0.02, 0.9, 1.0};
  const double z = normal_cdf(0.9, 0.3, 0.15) - normal_cdf(0.02, 0.3, 0.15);
  const auto p = [&](double t) { return t < 0.02 || t >= 0.9 ? 0.0 : normal_pdf(t, 0.3, 0.15) / z; };
  for (int rep = 0; rep < 5; ++rep) {
    const auto ds = random_dataset(rng, {.n = 25, .models = 1, .weighted = true});
    // integral of p(t) NB(t) and p(t) (1-t)/t NB(t) directly on the threshold axis
    std::vector<double> cuts = {0.02, 0.9};
    for (double f : ds.scores(0))
      if (f > 0.02 && f < 0.9) cuts.push_back(f);
    std::sort(cuts.begin(), cuts.end());
    double nb_area = 0, alt_area = 0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const auto c = count_cells(ds, 0, 0.5 * (cuts[k] + cuts[k + 1]));
      nb_area += gauss_legendre([&](double t) { return p(t) * (c.tp - t / (1 - t) * c.fp); }, cuts[k], cuts[k + 1], 32);
      alt_area += gauss_legendre([&](double t) { return p(t) * ((1 - t) / t * c.tp - c.fp); }, cuts[k], cuts[k + 1], 32);
    }
    const double via_tp = continuous_net_benefit(ds, "m1", ThresholdDensityConstantTpBenefit{share(density)}).value;
    const double via_fp = continuous_net_benefit(ds, "m1", ThresholdDensityConstantFpHarm{share(density)}).value;
    CHECK_NEAR(via_tp, nb_area, 1e-8);
    CHECK_NEAR(via_fp, alt_area, 1e-8);
    CHECK_NEAR(aunb(ds, "m1", density), nb_area, 1e-8);
    CHECK_NEAR(aunb_alt(ds, "m1", density), alt_area, 1e-8);
  }
}

TEST_CASE("tabulated interpolation") {
  const Tabulated tab{{0.2, 0.6}, {1.0, 3.0}};
  CHECK(tab(0.1) == 1.0);
  CHECK(tab(0.4) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(tab(0.9) == 3.0);
}
