#include "cnb/models.hpp"

#include <cmath>

#include "cnb/error.hpp"

namespace cnb {

namespace {

double inverse_logit(double eta) {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

}  // namespace

LogisticModel fit_logistic(const Eigen::MatrixXd& features, std::span<const int> outcomes,
                           std::span<const double> weights, const LogisticFitOptions& opts,
                           std::vector<std::string> names) {
  const Eigen::Index n = features.rows();
  const Eigen::Index k = features.cols();
  if (n == 0) throw InputError("no rows to fit");
  if (static_cast<Eigen::Index>(outcomes.size()) != n) throw InputError("outcome count differs from feature rows");
  if (!weights.empty() && static_cast<Eigen::Index>(weights.size()) != n)
    throw InputError("weight count differs from feature rows");
  if (!(opts.ridge >= 0.0 && std::isfinite(opts.ridge))) throw InputError("ridge penalty must be finite and >= 0");
  if (!(opts.tol > 0.0) || opts.max_iter < 1) throw InputError("tolerance and iteration limit must be positive");
  if (!features.allFinite()) throw InputError("features contain non-finite values");
  if (names.empty())
    for (Eigen::Index j = 0; j < k; ++j) names.push_back("x" + std::to_string(j + 1));
  if (static_cast<Eigen::Index>(names.size()) != k) throw InputError("feature name count differs from columns");

  Eigen::VectorXd y(n);
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto row = static_cast<std::size_t>(i + 1);
    if (outcomes[i] != 0 && outcomes[i] != 1) throw DataError("outcome must be 0 or 1", row, std::nullopt);
    y(i) = outcomes[i];
    w(i) = weights.empty() ? 1.0 : weights[i];
    if (!(w(i) >= 0.0 && std::isfinite(w(i)))) throw DataError("weight must be finite and >= 0", row, std::nullopt);
  }
  if (!(w.sum() > 0.0)) throw InputError("weights sum to zero");

  Eigen::MatrixXd x(n, k + 1);
  x.col(0).setOnes();
  x.rightCols(k) = features;

  Eigen::VectorXd penalty = Eigen::VectorXd::Constant(k + 1, opts.ridge);
  penalty(0) = 0.0;

  if (opts.ridge == 0.0) {
    Eigen::MatrixXd xw = x.array().colwise() * w.array().sqrt();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xw);
    if (qr.rank() < k + 1) throw InputError("singular design: features are collinear or constant");
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(k + 1);
  LogisticModel model;
  model.feature_names = std::move(names);
  model.ridge = opts.ridge;
  bool converged = false;
  for (int it = 1; it <= opts.max_iter; ++it) {
    const Eigen::VectorXd eta = x * beta;
    Eigen::VectorXd p(n);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      p(i) = inverse_logit(eta(i));
      v(i) = w(i) * p(i) * (1.0 - p(i));
    }
    const Eigen::VectorXd grad = x.transpose() * (w.cwiseProduct(y - p)) - penalty.cwiseProduct(beta);
    Eigen::MatrixXd info = x.transpose() * (x.array().colwise() * v.array()).matrix();
    info.diagonal() += penalty;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    const Eigen::VectorXd step = ldlt.solve(grad);
    if (ldlt.info() != Eigen::Success || !step.allFinite())
      throw NumericError("logistic fit failed: information matrix became singular (likely separation); "
                         "use a ridge penalty > 0");
    beta += step;
    model.iterations = it;
    model.last_change = step.cwiseAbs().maxCoeff();
    if (model.last_change < opts.tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NumericError("logistic fit did not converge in " + std::to_string(opts.max_iter) +
                       " iterations (last change " + std::to_string(model.last_change) +
                       "); the outcome may be separable, use a ridge penalty > 0");

  model.intercept = beta(0);
  model.coefficients.assign(beta.data() + 1, beta.data() + k + 1);
  const Eigen::VectorXd eta = x * beta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    // log p = -log1p(exp(-eta)), log(1-p) = -log1p(exp(eta))
    const double e = eta(i);
    const double log_p = e >= 0.0 ? -std::log1p(std::exp(-e)) : e - std::log1p(std::exp(e));
    const double log_q = log_p - e;
    ll += w(i) * (y(i) == 1.0 ? log_p : log_q);
  }
  model.penalized_log_likelihood = ll - 0.5 * (penalty.cwiseProduct(beta.cwiseProduct(beta))).sum();
  return model;
}

std::vector<double> predict(const LogisticModel& model, const Eigen::MatrixXd& features) {
  if (features.cols() != static_cast<Eigen::Index>(model.coefficients.size()))
    throw InputError("feature count " + std::to_string(features.cols()) + " differs from model's " +
                     std::to_string(model.coefficients.size()));
  std::vector<double> out(static_cast<std::size_t>(features.rows()));
  const Eigen::Map<const Eigen::VectorXd> beta(model.coefficients.data(),
                                               static_cast<Eigen::Index>(model.coefficients.size()));
  for (Eigen::Index i = 0; i < features.rows(); ++i) out[i] = inverse_logit(model.intercept + features.row(i).dot(beta));
  return out;
}

}  // namespace cnb
