#include "cnb/net_benefit.hpp"

#include <cmath>

#include "cnb/error.hpp"

namespace cnb {

double rescaled_net_benefit(const ClassificationCurve& curve, double t) {
  require_open_threshold(t);
  const std::size_t j = curve.level_index(t);
  return curve.tp_levels()[j] / t - curve.fp_levels()[j] / (1.0 - t);
}

double net_benefit(const ClassificationCurve& curve, double t) {
  return t * rescaled_net_benefit(curve, t);
}

double treat_all_net_benefit(double prevalence, double t) {
  require_open_threshold(t);
  return prevalence - t * (1.0 - prevalence) / (1.0 - t);
}

double treat_all_rescaled_net_benefit(double prevalence, double t) {
  require_open_threshold(t);
  return prevalence / t - (1.0 - prevalence) / (1.0 - t);
}

double combine_decisions(double nb1, double nb2, double effect_ratio) {
  if (!(effect_ratio >= 0.0) || !std::isfinite(effect_ratio))
    throw InputError("effect ratio must be a finite nonnegative number");
  return nb1 + effect_ratio * nb2;
}

std::vector<double> default_threshold_grid() {
  std::vector<double> grid;
  grid.reserve(99);
  for (int k = 1; k <= 99; ++k) grid.push_back(k / 100.0);
  return grid;
}

DecisionCurveTable decision_curve(const EvaluationDataset& ds, const std::vector<std::string>& models,
                                  const std::vector<double>& grid) {
  if (grid.empty()) throw InputError("threshold grid is empty");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] > 0.0 && grid[k] < 1.0))
      throw InputError("threshold grid must lie strictly inside (0,1)");
    if (k > 0 && !(grid[k] > grid[k - 1])) throw InputError("threshold grid must be strictly ascending");
  }

  DecisionCurveTable table;
  table.grid = grid;
  table.prevalence = prevalence(ds);

  for (const auto& model : models) {
    const auto curve = sweep(ds, model);
    DecisionCurveColumn col{model, {}, {}};
    for (double t : grid) {
      col.rescaled.push_back(rescaled_net_benefit(curve, t));
      col.net_benefit.push_back(t * col.rescaled.back());
    }
    table.columns.push_back(std::move(col));
  }

  DecisionCurveColumn all{"treat_all", {}, {}};
  DecisionCurveColumn none{"treat_none", {}, {}};
  for (double t : grid) {
    all.net_benefit.push_back(treat_all_net_benefit(table.prevalence, t));
    all.rescaled.push_back(treat_all_rescaled_net_benefit(table.prevalence, t));
    none.net_benefit.push_back(0.0);
    none.rescaled.push_back(0.0);
  }
  table.columns.push_back(std::move(all));
  table.columns.push_back(std::move(none));
  return table;
}

}  // namespace cnb
