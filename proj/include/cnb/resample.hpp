#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cnb/dataset.hpp"

namespace cnb {

struct BootstrapConfig {
  std::size_t replicates = 5000;
  double level = 0.95;
  std::uint64_t seed = 20240101;
  /// 0 picks the hardware concurrency. Results never depend on it.
  unsigned threads = 0;
  /// The run fails when more than this fraction of replicates fail.
  double max_failure_fraction = 0.01;
};

/// Named deterministic function of a dataset. It must be safe to call from
/// several threads at once.
struct Statistic {
  std::string name;
  std::function<double(const EvaluationDataset&)> fn;
};

struct BootstrapResult {
  std::string statistic;
  double point = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  std::size_t replicates = 0;
  std::size_t failures = 0;
  std::uint64_t seed = 0;
  /// By replicate index; NaN marks a failed replicate.
  std::vector<double> values;
};

/// Row indices of bootstrap replicate b: n draws with replacement from a
/// random stream derived only from (seed, b).
std::vector<std::size_t> bootstrap_rows(std::size_t n, std::uint64_t seed, std::size_t replicate);

/// Empirical quantile of ascending `sorted` at probability p: linear
/// interpolation at position (B + 1) p between order statistics, clamped to
/// the extremes. Exact order statistics whenever (B + 1) p is an integer.
double quantile(std::span<const double> sorted, double p);

/// Percentile bootstrap interval of `stat`; the point estimate is computed on
/// the original data. A replicate fails when the statistic throws or returns a
/// non-finite value.
BootstrapResult bootstrap_ci(const Statistic& stat, const EvaluationDataset& ds, const BootstrapConfig& cfg = {});

/// Predicted scores for the given rows of the original data.
using Scorer = std::function<std::vector<double>(std::span<const std::size_t> rows)>;
/// Fits a model on the given rows of the original data (repetition allowed)
/// and returns its scorer.
using FitProcedure = std::function<Scorer(std::span<const std::size_t> rows)>;

/// Model column name under which optimism_correct hands scores to the statistic.
inline constexpr const char* kScoreColumn = "score";

struct OptimismResult {
  std::string statistic;
  double apparent = 0.0;
  double mean_optimism = 0.0;
  double corrected = 0.0;
  std::size_t replicates = 0;
  std::size_t failures = 0;
  std::uint64_t seed = 0;
  std::vector<double> optimism;  // by replicate index; NaN marks failure
};

/// Bootstrap optimism correction: for each replicate the model is refit on the
/// replicate, and optimism is stat(on replicate) - stat(on original data),
/// minus the same difference for the scores of the model fit on all rows
/// (zero-mean control variate; a model that ignores its training rows has
/// optimism exactly 0). The statistic sees a dataset whose only model column
/// is kScoreColumn; the outcomes and weights are those of `ds`.
OptimismResult optimism_correct(const FitProcedure& fit, const Statistic& stat, const EvaluationDataset& ds,
                                const BootstrapConfig& cfg = {});

}  // namespace cnb
