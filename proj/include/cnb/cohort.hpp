#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cnb {

/// Synthetic cohort with a block of core features and a block of extra
/// features that also carry outcome signal.
struct CohortConfig {
  std::size_t n = 4000;
  std::uint64_t seed = 1;
  double intercept = -2.6;
  std::vector<double> core_effects = {0.8, 0.6, 0.5, 0.4};
  std::vector<double> extra_effects = {0.5, 0.4, 0.3, 0.3};
  /// Correlation between each extra feature and its core counterpart.
  double correlation = 0.3;
};

struct Cohort {
  Eigen::MatrixXd features;  // core columns first
  std::vector<std::string> names;
  std::vector<int> outcomes;
  std::size_t core_features = 0;

  /// The given rows, first `columns` features.
  Eigen::MatrixXd rows(std::span<const std::size_t> rows, std::size_t columns) const;
};

Cohort generate_cohort(const CohortConfig& cfg = {});

}  // namespace cnb
