#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cnb/cohort.hpp"
#include "cnb/continuous.hpp"
#include "cnb/models.hpp"

namespace cnb {

struct DemoConfig {
  CohortConfig cohort;
  /// Bootstrap replicates for intervals and optimism; 0 skips both.
  std::size_t bootstrap = 200;
  double level = 0.95;
  std::uint64_t seed = 7;
  unsigned threads = 0;
  double ridge = 0.0;
};

/// One cell of the results table. Components: "statins" (net benefit at the
/// 10% point mass), "lifestyle" (half-Gaussian below 10%) and "expected_nb"
/// (log-normal threshold density). Policies: "compact", "full", "treat_all"
/// and "full-compact".
struct DemoRow {
  std::string component;
  std::string policy;
  CnbUnit unit = CnbUnit::kCombinedTruePositives;
  double apparent = 0.0;
  std::optional<double> corrected;
  std::optional<ConfidenceInterval> ci;
};

struct DemoReport {
  DemoConfig config;
  std::size_t n = 0;
  double prevalence = 0.0;
  LogisticModel compact;
  LogisticModel full;
  std::vector<DemoRow> rows;

  /// Throws InputError when absent.
  const DemoRow& find(const std::string& component, const std::string& policy) const;
};

/// Generates a cohort, fits the compact (core features) and full (all
/// features) logistic models and evaluates the three components for both
/// models and the treat-all policy, with percentile intervals and optimism
/// correction when bootstrap > 0.
DemoReport run_demo(const DemoConfig& cfg = {});

}  // namespace cnb
