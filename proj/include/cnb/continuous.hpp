#pragma once

#include <optional>
#include <string>

#include "cnb/confusion.hpp"
#include "cnb/dataset.hpp"
#include "cnb/weighting.hpp"

namespace cnb {

enum class CnbUnit {
  kCombinedTruePositives,  // normalized continuum of decisions
  kAveragedTruePositives,  // normalized expected net benefit over a threshold distribution
  kUnnormalized,
};

const char* to_string(CnbUnit unit);

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  std::string method = "percentile-bootstrap";
};

struct CnbEstimate {
  std::string model;
  double value = 0.0;
  CnbUnit unit = CnbUnit::kUnnormalized;
  WeightSpec spec = Uniform{};
  std::optional<ConfidenceInterval> ci;
};

/// Continuous net benefit: integral of omega(t) [TP(t)/t - FP(t)/(1-t)] dt.
///
/// Evaluated per subject (Fubini over the strict-inequality indicator):
///   (1/sum w) sum_i w_i [ y_i W1(f_i) - (1 - y_i) W0(f_i) ],
/// with point masses taken from the classification curve directly, so that a
/// point mass of unit mass at t* gives exactly rescaled_net_benefit(t*).
/// Throws DivergenceError for specs like Uniform whose W1 diverges; such
/// weights only support cnb_difference.
CnbEstimate continuous_net_benefit(const EvaluationDataset& ds, const std::string& model, const WeightSpec& spec,
                                   const QuadConfig& cfg = {});

/// Treat-all reference: pi W1(1) - (1 - pi) W0(1).
double treat_all_cnb(double prevalence, const WeightSpec& spec, const QuadConfig& cfg = {});

/// The same integral evaluated along the threshold axis: adaptive quadrature
/// of omega(t) * rescaled NB(t) on each step of the classification curve,
/// restricted to [lower, upper]. Independent of the per-subject route.
double threshold_quadrature_cnb(const ClassificationCurve& curve, const WeightSpec& spec, double lower = 0.0,
                                double upper = 1.0, const QuadConfig& cfg = {});

/// CNB(model1) - CNB(model2). Valid for divergent weights too: each subject
/// contributes the integral between its two scores, so the divergent end
/// cancels. Under Uniform{1} this is the per-capita log-likelihood
/// difference. Throws DivergenceError if a score sits on a divergent endpoint.
double cnb_difference(const EvaluationDataset& ds, const std::string& model1, const std::string& model2,
                      const WeightSpec& spec, const QuadConfig& cfg = {});

/// Expected net benefit over a population whose optimal thresholds follow
/// `density`, with true-positive benefit a(t)-c and false-positive harm d-b(t):
/// omega_E(t) = p(t) / (1/tp_benefit(t) + 1/fp_harm(t)). When `normalized`,
/// omega_E is scaled to unit W1(1) and the result is in averaged true
/// positives.
CnbEstimate expected_net_benefit(const EvaluationDataset& ds, const std::string& model, const WeightSpec& density,
                                 const Tabulated& tp_benefit, const Tabulated& fp_harm, bool normalized = false,
                                 const QuadConfig& cfg = {});

/// Area under the net-benefit curve under a threshold density p, assuming a
/// constant true-positive benefit: integral p(t) [TP - t/(1-t) FP] dt.
double aunb(const EvaluationDataset& ds, const std::string& model, const WeightSpec& density,
            const QuadConfig& cfg = {});

/// The constant false-positive harm variant: integral p(t) [(1-t)/t TP - FP] dt.
double aunb_alt(const EvaluationDataset& ds, const std::string& model, const WeightSpec& density,
                const QuadConfig& cfg = {});

/// Per-capita weighted log-likelihood (1/sum w) sum w [y ln f + (1-y) ln(1-f)].
/// Throws NumericError naming the subject when a term is ln(0).
double log_likelihood(const EvaluationDataset& ds, const std::string& model);

/// Per-capita weighted Brier score (1/sum w) sum w (y - f)^2.
double brier(const EvaluationDataset& ds, const std::string& model);

/// Throws InputError unless total_mass(density) is within `tol` of 1.
void require_density(const WeightSpec& density, double tol = 1e-6, const QuadConfig& cfg = {});

}  // namespace cnb
