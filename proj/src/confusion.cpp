#include "cnb/confusion.hpp"

#include <algorithm>
#include <numeric>

#include "cnb/error.hpp"

namespace cnb {

ClassificationCurve::ClassificationCurve(std::span<const double> scores,
                                         std::span<const int> outcomes,
                                         std::span<const double> weights) {
  const std::size_t n = scores.size();
  if (n == 0 || outcomes.size() != n || weights.size() != n)
    throw InputError("scores, outcomes and weights must be nonempty and of equal length");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Ties collapse into a single jump carrying their summed mass.
  std::vector<double> pos_mass;
  std::vector<double> neg_mass;
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = order[k];
    if (jumps_.empty() || scores[i] != jumps_.back()) {
      jumps_.push_back(scores[i]);
      pos_mass.push_back(0.0);
      neg_mass.push_back(0.0);
    }
    (outcomes[i] == 1 ? pos_mass : neg_mass).back() += weights[i];
    total += weights[i];
  }
  if (!(total > 0.0)) throw InputError("total weight must be positive");

  const std::size_t k = jumps_.size();
  tp_.assign(k + 1, 0.0);
  fp_.assign(k + 1, 0.0);
  double pos = 0.0;
  double neg = 0.0;
  for (std::size_t j = k; j-- > 0;) {
    pos += pos_mass[j];
    neg += neg_mass[j];
    tp_[j] = pos / total;
    fp_[j] = neg / total;
  }
}

std::size_t ClassificationCurve::level_index(double t) const {
  return static_cast<std::size_t>(std::upper_bound(jumps_.begin(), jumps_.end(), t) - jumps_.begin());
}

ConfusionCells ClassificationCurve::cells(double t) const {
  const std::size_t j = level_index(t);
  const double pi = prevalence();
  return ConfusionCells{tp_[j], fp_[j], pi - tp_[j], 1.0 - pi - fp_[j]};
}

ClassificationCurve sweep(const EvaluationDataset& ds, const std::string& model) {
  return ClassificationCurve(ds.scores(model), ds.outcomes(), ds.weights());
}

void require_open_threshold(double t) {
  if (!(t > 0.0 && t < 1.0))
    throw InputError("threshold must lie strictly inside (0,1), got " + std::to_string(t));
}

ConfusionCells confusion_at(const ClassificationCurve& curve, double t) {
  require_open_threshold(t);
  return curve.cells(t);
}

}  // namespace cnb
