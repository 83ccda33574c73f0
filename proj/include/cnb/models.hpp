#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cnb {

struct LogisticFitOptions {
  double ridge = 0.0;  // lambda, applied to every coefficient except the intercept
  double tol = 1e-8;   // on the largest absolute coefficient change
  int max_iter = 100;
};

struct LogisticModel {
  std::vector<std::string> feature_names;
  double intercept = 0.0;
  std::vector<double> coefficients;
  double ridge = 0.0;
  int iterations = 0;
  double last_change = 0.0;
  /// Weighted penalized log-likelihood at the solution.
  double penalized_log_likelihood = 0.0;
};

/// Weighted ridge logistic regression by iteratively reweighted least squares.
/// `features` has one row per subject and no intercept column. Empty `weights`
/// means unit weights; empty `names` yields x1, x2, ...
///
/// Throws InputError on shape mismatch, non-finite entries or a singular
/// design, and NumericError when the iteration does not converge (typically
/// separation, in which case a positive ridge helps).
LogisticModel fit_logistic(const Eigen::MatrixXd& features, std::span<const int> outcomes,
                           std::span<const double> weights = {}, const LogisticFitOptions& opts = {},
                           std::vector<std::string> names = {});

/// Inverse logit of the linear predictor for each row.
std::vector<double> predict(const LogisticModel& model, const Eigen::MatrixXd& features);

}  // namespace cnb
