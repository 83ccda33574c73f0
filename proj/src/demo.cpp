#include "cnb/demo.hpp"

#include <numeric>

#include "cnb/error.hpp"
#include "cnb/resample.hpp"

namespace cnb {

namespace {

struct Component {
  std::string name;
  WeightSpec spec;
  QuadConfig quad;
  CnbUnit unit;
};

std::vector<Component> components() {
  std::vector<Component> out;
  const auto statins = example_weight("statins");
  const auto lifestyle = example_weight("lifestyle");
  const auto lognormal = example_weight("lognormal_threshold");
  out.push_back({"statins", statins.spec, statins.quad, CnbUnit::kCombinedTruePositives});
  out.push_back({"lifestyle", lifestyle.spec, lifestyle.quad, CnbUnit::kCombinedTruePositives});
  out.push_back({"expected_nb", lognormal.spec, lognormal.quad, CnbUnit::kAveragedTruePositives});
  return out;
}

ConfidenceInterval to_interval(const BootstrapResult& r) {
  return ConfidenceInterval{r.lower, r.upper, r.level, "percentile-bootstrap"};
}

}  // namespace

const DemoRow& DemoReport::find(const std::string& component, const std::string& policy) const {
  for (const auto& r : rows)
    if (r.component == component && r.policy == policy) return r;
  throw InputError("no demo result for " + component + "/" + policy);
}

DemoReport run_demo(const DemoConfig& cfg) {
  const Cohort cohort = generate_cohort(cfg.cohort);
  const std::size_t n = cohort.outcomes.size();
  const std::size_t core = cohort.core_features;
  const std::size_t all_cols = static_cast<std::size_t>(cohort.features.cols());
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);

  LogisticFitOptions fit_opts;
  fit_opts.ridge = cfg.ridge;
  auto fit_on = [&](std::span<const std::size_t> rows, std::size_t columns) {
    std::vector<int> y;
    y.reserve(rows.size());
    for (std::size_t r : rows) y.push_back(cohort.outcomes[r]);
    std::vector<std::string> names(cohort.names.begin(), cohort.names.begin() + static_cast<std::ptrdiff_t>(columns));
    return fit_logistic(cohort.rows(rows, columns), y, {}, fit_opts, std::move(names));
  };

  DemoReport rep;
  rep.config = cfg;
  rep.n = n;
  rep.compact = fit_on(all, core);
  rep.full = fit_on(all, all_cols);
  const EvaluationDataset ds({"compact", "full"},
                             {predict(rep.compact, cohort.rows(all, core)), predict(rep.full, cohort.rows(all, all_cols))},
                             cohort.outcomes);
  rep.prevalence = prevalence(ds);

  BootstrapConfig boot;
  boot.replicates = cfg.bootstrap;
  boot.level = cfg.level;
  boot.seed = cfg.seed;
  boot.threads = cfg.threads;

  for (const auto& comp : components()) {
    auto model_stat = [comp](const std::string& model) {
      return Statistic{comp.name + ":" + model, [comp, model](const EvaluationDataset& d) {
                         return continuous_net_benefit(d, model, comp.spec, comp.quad).value;
                       }};
    };
    const Statistic treat_all{comp.name + ":treat_all", [comp](const EvaluationDataset& d) {
                                return treat_all_cnb(prevalence(d), comp.spec, comp.quad);
                              }};
    const Statistic diff{comp.name + ":full-compact", [comp](const EvaluationDataset& d) {
                           return continuous_net_benefit(d, "full", comp.spec, comp.quad).value -
                                  continuous_net_benefit(d, "compact", comp.spec, comp.quad).value;
                         }};

    for (const std::string model : {"compact", "full"}) {
      const auto stat = model_stat(model);
      DemoRow row{comp.name, model, comp.unit, stat.fn(ds), std::nullopt, std::nullopt};
      if (cfg.bootstrap > 0) {
        row.ci = to_interval(bootstrap_ci(stat, ds, boot));
        const std::size_t columns = model == "full" ? all_cols : core;
        const FitProcedure fit = [&, columns](std::span<const std::size_t> rows) -> Scorer {
          auto m = fit_on(rows, columns);
          return [&cohort, m, columns](std::span<const std::size_t> r) { return predict(m, cohort.rows(r, columns)); };
        };
        const Statistic score_stat{stat.name, [comp](const EvaluationDataset& d) {
                                     return continuous_net_benefit(d, kScoreColumn, comp.spec, comp.quad).value;
                                   }};
        row.corrected = optimism_correct(fit, score_stat, ds, boot).corrected;
      }
      rep.rows.push_back(std::move(row));
    }
    DemoRow ta{comp.name, "treat_all", comp.unit, treat_all.fn(ds), std::nullopt, std::nullopt};
    DemoRow df{comp.name, "full-compact", comp.unit, diff.fn(ds), std::nullopt, std::nullopt};
    if (cfg.bootstrap > 0) {
      ta.ci = to_interval(bootstrap_ci(treat_all, ds, boot));
      df.ci = to_interval(bootstrap_ci(diff, ds, boot));
      df.corrected = rep.find(comp.name, "full").corrected.value() - rep.find(comp.name, "compact").corrected.value();
    }
    rep.rows.push_back(std::move(ta));
    rep.rows.push_back(std::move(df));
  }
  return rep;
}

}  // namespace cnb
