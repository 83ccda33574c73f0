#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cnb/dataset.hpp"
#include "cnb/weighting.hpp"

namespace cnb::oracle {

/// One member of a synthetic population with personal utilities.
/// a: treated event, b: treated non-event, c: untreated event,
/// d: untreated non-event.
struct Individual {
  std::vector<double> scores;  // one per model
  int outcome = 0;
  double weight = 1.0;
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  double d = 1.0;
  double t_star = 0.5;
  int group = 0;
};

/// (d - b) / ((a - c) + (d - b)); requires a > c and d > b.
double optimal_threshold(double a, double b, double c, double d);

struct UtilityPopulation {
  std::vector<std::string> models;
  std::vector<Individual> individuals;

  std::size_t size() const { return individuals.size(); }
  std::size_t model_index(const std::string& model) const;
  /// Scores, outcomes and weights as an evaluation dataset.
  EvaluationDataset dataset() const;
  /// Throws InputError if an individual breaks a > c, d > b or the threshold
  /// formula (within 1e-12).
  void validate() const;
};

struct ConstantThreshold {
  double t = 0.1;
};
struct UniformThreshold {
  double lower = 0.05;
  double upper = 0.5;
};
/// Log-normal with the given mean and sd of the threshold itself; draws at or
/// above 1 are rejected and redrawn.
struct LogNormalThreshold {
  double mean = 0.1;
  double sd = 0.03;
};
struct DiscreteThreshold {
  std::vector<double> values;
  std::vector<double> probabilities;
};
using ThresholdDistribution = std::variant<ConstantThreshold, UniformThreshold, LogNormalThreshold, DiscreteThreshold>;

/// Utilities as functions of t*: c = g_c(t*), d = g_d(t*), and the decision
/// importance h(t*) > 0 fixes a = c + h/t*, b = d - h/(1 - t*), so the
/// harmonic weight of the two utility gaps is h(t*).
struct ImportanceUtilities {
  Tabulated importance = Tabulated::constant(1.0);
  Tabulated g_c = Tabulated::constant(0.0);
  Tabulated g_d = Tabulated::constant(0.0);
};

/// The same (a, b, c, d) for everyone. Every t* then equals the implied
/// optimal threshold and the threshold distribution is not used.
struct ConstantUtilities {
  double a = 1.0;
  double b = -1.0;
  double c = 0.0;
  double d = 0.0;
};

using UtilityModel = std::variant<ImportanceUtilities, ConstantUtilities>;

/// Score model: logistic(coefficients[0] + sum_k coefficients[k+1] x_k).
struct LogisticScoreModel {
  std::string name;
  std::vector<double> coefficients;
};

struct GeneratorConfig {
  std::size_t n = 6;
  ThresholdDistribution threshold = UniformThreshold{};
  UtilityModel utilities = ImportanceUtilities{};
  /// Number of standard-normal features (1 to 3).
  std::size_t features = 2;
  /// Outcome model: P(y = 1 | x) = logistic(intercept + beta . x).
  std::vector<double> outcome_coefficients = {-0.5, 1.2, 0.6};
  std::vector<LogisticScoreModel> models = {{"model1", {-0.5, 1.2, 0.0}}, {"model2", {-0.5, 0.4, 0.8}}};
  std::uint64_t seed = 1;
};

/// Draws features, outcomes and scores, then t* independently of them, then
/// utilities from t*. Deterministic given the seed.
UtilityPopulation generate_population(const GeneratorConfig& cfg);

/// Per-individual utility: each individual is treated iff score > own t*.
std::vector<double> utility_contributions(const UtilityPopulation& pop, const std::string& model);

/// Weighted mean of utility_contributions.
double brute_force_utility(const UtilityPopulation& pop, const std::string& model);

/// Expected net benefit difference under the empirical distribution of t*:
/// sum_i harmonic(a_i - c_i, d_i - b_i)/n times the rescaled net benefit
/// difference at t_i. Computed through cnb_difference on point masses.
double expected_nb_difference(const UtilityPopulation& pop, const std::string& model1, const std::string& model2);

enum class VerifyMode { kExhaustive, kMonteCarlo };

struct VerifyOptions {
  VerifyMode mode = VerifyMode::kExhaustive;
  double tolerance = 1e-9;  // exhaustive mode, absolute
  double standard_errors = 3.0;  // Monte-Carlo mode
  std::size_t permutations = 200;  // Monte-Carlo draws
  std::uint64_t seed = 1;
};

struct VerifyReport {
  VerifyMode mode = VerifyMode::kExhaustive;
  std::size_t n = 0;
  std::size_t permutations = 0;
  double mean_utility_difference = 0.0;
  double expected_nb_difference = 0.0;
  double abs_error = 0.0;
  double standard_error = 0.0;  // 0 in exhaustive mode
  double tolerance = 0.0;  // bound applied to abs_error
  bool passed = false;
};

/// Averages brute-force utility differences over permutations of the
/// (scores, outcome, weight) records against the fixed (utilities, t*)
/// records and compares with expected_nb_difference. Exhaustive mode visits
/// all n! permutations and requires n <= 8.
VerifyReport verify_expected_nb(const UtilityPopulation& pop, const std::string& model1, const std::string& model2,
                                const VerifyOptions& opts = {});

const char* to_string(VerifyMode mode);

struct WitnessSearchConfig {
  std::vector<double> score_grid = {0.05, 0.3, 0.55, 0.8};
  std::vector<int> outcomes = {1, 1, 0, 0};
  std::vector<double> threshold_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<double> mix_grid = {0.25, 0.5, 0.75};
  std::size_t random_budget = 200000;
  std::uint64_t seed = 1;
  double min_margin = 1e-6;
};

/// A dataset, two-atom threshold density and two models where the area under
/// the net benefit curve ranks model1 first and the false-positive-harm
/// variant ranks model2 first.
struct Witness {
  EvaluationDataset dataset;
  WeightSpec density;
  double t1 = 0.0;
  double t2 = 0.0;
  double mix = 0.0;  // probability at t1
  double aunb1 = 0.0;
  double aunb2 = 0.0;
  double aunb_alt1 = 0.0;
  double aunb_alt2 = 0.0;
  double aunb_margin() const { return aunb1 - aunb2; }
  double aunb_alt_margin() const { return aunb_alt2 - aunb_alt1; }
  std::string search_phase;  // "grid" or "random"
};

/// Grid search (largest smaller margin wins, deterministic), then random
/// search; the instance is recomputed with aunb / aunb_alt before return.
std::optional<Witness> aunb_disagreement_witness(const WitnessSearchConfig& cfg = {});

struct TwoGroupConfig {
  std::size_t n_per_group = 500;
  double g1_threshold = 0.10;
  double g2_threshold = 0.11;
  double g1_scale = 0.01;
  double g2_scale = 100.0;
  std::uint64_t seed = 11;
};

/// Two equally sized groups with thresholds 10% and 11%; utilities in each
/// group are scaled so that the harmonic weight equals the group scale.
/// Group labels are 1 and 2.
UtilityPopulation two_group_scenario(const TwoGroupConfig& cfg = {});

struct TwoGroupReport {
  double g1_share = 0.0;  // empirical p(t*) at the G1 threshold
  double g2_share = 0.0;
  double g1_weight = 0.0;  // omega_E mass at the G1 threshold
  double g2_weight = 0.0;
  double weight_ratio = 0.0;  // g2_weight / g1_weight
  double utility_difference = 0.0;
  double g1_contribution = 0.0;
  double g2_contribution = 0.0;
  double g2_fraction = 0.0;  // |g2| / (|g1| + |g2|)
};

TwoGroupReport analyze_two_groups(const UtilityPopulation& pop, const std::string& model1,
                                  const std::string& model2);

}  // namespace cnb::oracle
