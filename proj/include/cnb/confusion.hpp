#pragma once

#include <span>
#include <string>
#include <vector>

#include "cnb/dataset.hpp"

namespace cnb {

/// Per-capita confusion cells at one threshold; they sum to 1.
struct ConfusionCells {
  double tp = 0.0;
  double fp = 0.0;
  double fn = 0.0;
  double tn = 0.0;
};

/// Weighted per-capita TP(t) and FP(t) as right-continuous step functions.
///
/// A subject is flagged at threshold t iff its score is strictly greater
/// than t. Some decision-curve tools flag at f >= t; here a subject whose
/// score equals t is NOT flagged. Consequently the levels change exactly at
/// the distinct scores: on [jump[j-1], jump[j]) the curve takes level j,
/// below the smallest score it takes level 0 (everyone flagged) and from the
/// largest score on it is 0.
class ClassificationCurve {
 public:
  ClassificationCurve(std::span<const double> scores, std::span<const int> outcomes,
                      std::span<const double> weights);

  const std::vector<double>& jump_points() const { return jumps_; }
  /// jump_points().size() + 1 levels each.
  const std::vector<double>& tp_levels() const { return tp_; }
  const std::vector<double>& fp_levels() const { return fp_; }
  double prevalence() const { return tp_.front(); }

  /// Index of the level in force at t (number of jump points <= t).
  std::size_t level_index(double t) const;
  double tp(double t) const { return tp_[level_index(t)]; }
  double fp(double t) const { return fp_[level_index(t)]; }

  /// Unchecked evaluation; confusion_at validates the threshold.
  ConfusionCells cells(double t) const;

 private:
  std::vector<double> jumps_;
  std::vector<double> tp_;
  std::vector<double> fp_;
};

/// Classification curve of one model. Throws InputError for an unknown model.
ClassificationCurve sweep(const EvaluationDataset& ds, const std::string& model);

/// Confusion cells at t, which must lie in (0,1).
ConfusionCells confusion_at(const ClassificationCurve& curve, double t);

/// Throws InputError unless 0 < t < 1.
void require_open_threshold(double t);

}  // namespace cnb
