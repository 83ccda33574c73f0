// Acceptance checks. Prints one [PASS]/[FAIL] line per criterion and exits
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "cnb/confusion.hpp"
#include "cnb/continuous.hpp"
#include "cnb/demo.hpp"
#include "cnb/net_benefit.hpp"
#include "cnb/oracle.hpp"
#include "cnb/resample.hpp"
#include "cnb/weighting.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace cnb;
using namespace cnb::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("threw: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit_s > 0 && secs >= limit_s) {
    o.pass = false;
    o.detail += " runtime over limit";
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %2d %-44s %7.3fs  %s\n", o.pass ? "PASS" : "FAIL", id, title, secs, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::vector<EvaluationDataset> identity_datasets() {
  Rng rng(2024);
  std::vector<EvaluationDataset> out;
  for (int k = 0; k < 10; ++k) out.push_back(random_dataset(rng, {.n = 50, .models = 2}));
  return out;
}

Outcome likelihood_identity() {
  double closed = 0.0, quad = 0.0;
  for (const auto& ds : identity_datasets()) {
    const double diff = cnb_difference(ds, "m1", "m2", Uniform{1.0});
    const double ll = direct_log_likelihood(ds, 0) - direct_log_likelihood(ds, 1);
    const double q = threshold_quadrature_cnb(sweep(ds, "m1"), Uniform{1.0}, 1e-6, 1 - 1e-6) -
                     threshold_quadrature_cnb(sweep(ds, "m2"), Uniform{1.0}, 1e-6, 1 - 1e-6);
    closed = std::max(closed, std::abs(diff - ll));
    quad = std::max(quad, std::abs(q - ll));
  }
  return {closed <= 1e-12 && quad <= 1e-4, fmt("max|closed-LL| %.2e, max|quad-LL| %.2e", closed, quad)};
}

Outcome brier_identity() {
  double worst = 0.0;
  for (const auto& ds : identity_datasets())
    for (std::size_t m = 0; m < 2; ++m) {
      const double v = continuous_net_benefit(ds, ds.models()[m], Parabola{1.0}).value;
      worst = std::max(worst, std::abs(v - (-0.5 * direct_brier(ds, m) + 0.5 * direct_prevalence(ds))));
    }
  const double demo = continuous_net_benefit(demo4(), "model", Parabola{1.0}).value;
  return {worst <= 1e-12 && std::abs(demo - 0.2375) <= 1e-12, fmt("max error %.2e, demo %.10f", worst, demo)};
}

Outcome point_mass_reduction() {
  std::vector<EvaluationDataset> sets = identity_datasets();
  sets.push_back(demo4());
  int mismatches = 0, checks = 0;
  for (const auto& ds : sets) {
    const auto curve = sweep(ds, ds.models()[0]);
    for (double t : {0.05, 0.10, 0.5, 0.9}) {
      const double lhs = t * continuous_net_benefit(ds, ds.models()[0], PointMass{t, 1.0}).value;
      const double rhs = net_benefit(curve, t);
      ++checks;
      if (std::memcmp(&lhs, &rhs, sizeof(double)) != 0) ++mismatches;
    }
  }
  return {mismatches == 0, fmt("%.0f of %.0f bitwise equal", checks - mismatches, checks)};
}

Outcome permutation_oracle() {
  oracle::GeneratorConfig small;
  const auto exhaustive = oracle::verify_expected_nb(oracle::generate_population(small), "model1", "model2");
  oracle::GeneratorConfig big;
  big.n = 10000;
  oracle::VerifyOptions mc;
  mc.mode = oracle::VerifyMode::kMonteCarlo;
  mc.permutations = 200;
  const auto monte = oracle::verify_expected_nb(oracle::generate_population(big), "model1", "model2", mc);
  const bool ok = exhaustive.permutations == 720 && exhaustive.abs_error < 1e-9 &&
                  monte.abs_error <= 3.0 * monte.standard_error;
  return {ok, fmt("exhaustive |d| %.2e; monte-carlo |d|/SE %.2f", exhaustive.abs_error,
                  monte.abs_error / monte.standard_error)};
}

Outcome treat_all_closed_form() {
  Rng rng(5);
  const auto base = random_dataset(rng, {.n = 200, .models = 1, .weighted = true});
  const std::vector<double> everyone(base.size(), 1.0);
  const auto ds = base.with_single_model("all", everyone);
  const double pi = prevalence(ds);
  const auto curve = sweep(ds, "all");
  const auto table = decision_curve(ds, {"all"}, default_threshold_grid());
  double sweep_err = 0.0;
  for (std::size_t k = 0; k < table.grid.size(); ++k) {
    const double t = table.grid[k];
    const double closed = pi - t * (1 - pi) / (1 - t);
    sweep_err = std::max(sweep_err, std::abs(net_benefit(curve, t) - closed));
    sweep_err = std::max(sweep_err, std::abs(table.columns[1].net_benefit[k] - closed));
  }
  double cnb_err = 0.0;
  const auto lifestyle = example_weight("lifestyle");
  const auto lognormal = example_weight("lognormal_threshold");
  const std::vector<std::pair<WeightSpec, QuadConfig>> specs = {{Parabola{1.0}, {}},
                                                                {TruncatedGaussian{0.3, 0.1, 0.05, 0.8, 1.0}, {}},
                                                                {lifestyle.spec, lifestyle.quad},
                                                                {lognormal.spec, lognormal.quad}};
  for (const auto& [spec, quad] : specs) {
    const auto cw = cumulative(spec, quad);
    const double closed = pi * cw.w1(1.0) - (1 - pi) * cw.w0(1.0);
    cnb_err = std::max(cnb_err, std::abs(continuous_net_benefit(ds, "all", spec, quad).value - closed));
    cnb_err = std::max(cnb_err, std::abs(treat_all_cnb(pi, spec, quad) - closed));
  }
  return {sweep_err <= 1e-12 && cnb_err <= 1e-8, fmt("sweep max error %.2e, CNB max error %.2e", sweep_err, cnb_err)};
}

Outcome dual_route() {
  Rng rng(6);
  const auto ds = random_dataset(rng, {.n = 200, .models = 1});
  const WeightSpec spec = TruncatedGaussian{0.10, 0.02, 0.0, 0.10, 1.0};
  QuadConfig cfg;
  cfg.epsilon = 1e-6;
  const double subject = continuous_net_benefit(ds, "m1", spec, cfg).value;
  const double quad = threshold_quadrature_cnb(sweep(ds, "m1"), spec, 0.0, 1.0, cfg);
  const double err = std::abs(subject - quad);
  return {err <= 1e-6, fmt("per-subject %.10f, |difference| %.2e", subject, err)};
}

Outcome witness() {
  const auto w = oracle::aunb_disagreement_witness();
  if (!w) return {false, "no witness found"};
  const double a = w->aunb_margin(), b = w->aunb_alt_margin();
  return {a > 1e-6 && b > 1e-6, fmt("AUNB margin %.4f, AUNB_alt margin %.4f", a, b)};
}

Outcome hand_aunb() {
  const auto ds = demo4();
  const double v = aunb(ds, "model", Uniform{1.0});
  const double oracle = uniform_aunb(ds, 0);
  return {std::abs(v - 0.417874) <= 1e-6 && std::abs(v - oracle) <= 1e-9, fmt("AUNB %.9f, antiderivative %.9f", v, oracle)};
}

Outcome bootstrap_reproducibility() {
  Rng rng(9);
  const auto ds = random_dataset(rng, {.n = 500, .models = 1, .weighted = true});
  const auto preset = example_weight("lifestyle");
  const Statistic stat{"cnb", [&](const EvaluationDataset& d) {
                         return continuous_net_benefit(d, "m1", preset.spec, preset.quad).value;
                       }};
  BootstrapConfig cfg;
  cfg.replicates = 5000;
  const auto t0 = Clock::now();
  const auto a = bootstrap_ci(stat, ds, cfg);
  const double first = std::chrono::duration<double>(Clock::now() - t0).count();
  const auto b = bootstrap_ci(stat, ds, cfg);
  const bool same = a.values.size() == b.values.size() &&
                    std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(double)) == 0 &&
                    std::memcmp(&a.lower, &b.lower, sizeof(double)) == 0 &&
                    std::memcmp(&a.upper, &b.upper, sizeof(double)) == 0;
  const bool contains = a.lower <= a.point && a.point <= a.upper;

  const FitProcedure constant = [](std::span<const std::size_t>) -> Scorer {
    return [](std::span<const std::size_t> rows) { return std::vector<double>(rows.size(), 0.2); };
  };
  const Statistic on_scores{"cnb", [&](const EvaluationDataset& d) {
                              return continuous_net_benefit(d, kScoreColumn, preset.spec, preset.quad).value;
                            }};
  BootstrapConfig small = cfg;
  small.replicates = 200;
  const auto opt = optimism_correct(constant, on_scores, ds, small);
  const bool zero = opt.mean_optimism == 0.0 && opt.corrected == opt.apparent;
  return {same && contains && zero && first < 60.0,
          fmt("CI [%.6f, %.6f]", a.lower, a.upper) + (same ? ", bit-identical" : ", DIFFERS") +
              (contains ? ", contains point" : ", MISSES point") + fmt(", one run %.2fs", first) +
              (zero ? ", constant-model optimism 0" : ", constant-model optimism NONZERO")};
}

Outcome demo_direction() {
  int full_wins[3] = {0, 0, 0};
  int above_treat_all = 0;
  const char* components[] = {"statins", "lifestyle", "expected_nb"};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    DemoConfig cfg;
    cfg.cohort.seed = seed;
    cfg.bootstrap = 0;
    const auto rep = run_demo(cfg);
    for (int c = 0; c < 3; ++c)
      if (rep.find(components[c], "full").apparent >= rep.find(components[c], "compact").apparent) ++full_wins[c];
    const double all = rep.find("expected_nb", "treat_all").apparent;
    if (rep.find("expected_nb", "full").apparent > all && rep.find("expected_nb", "compact").apparent > all)
      ++above_treat_all;
  }
  const bool ok = full_wins[0] >= 9 && full_wins[1] >= 9 && full_wins[2] >= 9 && above_treat_all == 10;
  char buf[160];
  std::snprintf(buf, sizeof buf, "full>=compact statins %d/10, lifestyle %d/10, expected NB %d/10; above treat-all %d/10",
                full_wins[0], full_wins[1], full_wins[2], above_treat_all);
  return {ok, buf};
}

}  // namespace

int main() {
  report(1, "likelihood identity", 1.0, likelihood_identity);
  report(2, "brier identity", 1.0, brier_identity);
  report(3, "point-mass reduction", 0.0, point_mass_reduction);
  report(4, "permutation oracle", 10.0, permutation_oracle);
  report(5, "treat-all closed form", 0.0, treat_all_closed_form);
  report(6, "dual-route integrator agreement", 5.0, dual_route);
  report(7, "AUNB / AUNB_alt disagreement witness", 60.0, witness);
  report(8, "hand-integrated AUNB", 0.0, hand_aunb);
  report(9, "bootstrap reproducibility", 0.0, bootstrap_reproducibility);
  report(10, "demo pipeline direction", 0.0, demo_direction);
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
