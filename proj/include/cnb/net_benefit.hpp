#pragma once

#include <string>
#include <vector>

#include "cnb/confusion.hpp"
#include "cnb/dataset.hpp"

namespace cnb {

/// NB(t)/t = TP(t)/t - FP(t)/(1-t).
double rescaled_net_benefit(const ClassificationCurve& curve, double t);

/// Binary net benefit TP(t) - t/(1-t) FP(t), in true positives per capita.
/// Computed as t * rescaled_net_benefit(t), so the two agree bit for bit.
double net_benefit(const ClassificationCurve& curve, double t);

/// Net benefit of flagging everyone: pi - t(1-pi)/(1-t).
double treat_all_net_benefit(double prevalence, double t);

/// Rescaled treat-all net benefit: pi/t - (1-pi)/(1-t).
double treat_all_rescaled_net_benefit(double prevalence, double t);

/// Total net benefit of two non-interacting decisions, in units of the
/// first: nb1 + effect_ratio * nb2, where effect_ratio = (a2-c2)/(a1-c1).
double combine_decisions(double nb1, double nb2, double effect_ratio);

struct DecisionCurveColumn {
  std::string policy;  // model id, "treat_all" or "treat_none"
  std::vector<double> net_benefit;
  std::vector<double> rescaled;
};

struct DecisionCurveTable {
  std::vector<double> grid;
  double prevalence = 0.0;
  /// Models in request order followed by treat_all and treat_none.
  std::vector<DecisionCurveColumn> columns;
};

/// Thresholds 0.01, 0.02, ..., 0.99.
std::vector<double> default_threshold_grid();

/// Decision curves of `models` plus the treat-all / treat-none baselines.
/// The grid must be nonempty, strictly ascending and inside (0,1).
DecisionCurveTable decision_curve(const EvaluationDataset& ds, const std::vector<std::string>& models,
                                  const std::vector<double>& grid);

}  // namespace cnb
