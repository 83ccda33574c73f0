#include "cnb/cohort.hpp"

#include <cmath>
#include <random>

#include "cnb/error.hpp"

namespace cnb {

Eigen::MatrixXd Cohort::rows(std::span<const std::size_t> rows, std::size_t columns) const {
  if (columns > static_cast<std::size_t>(features.cols())) throw InputError("cohort has fewer feature columns");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(columns));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= static_cast<std::size_t>(features.rows())) throw InputError("cohort row out of range");
    out.row(static_cast<Eigen::Index>(r)) = features.row(static_cast<Eigen::Index>(rows[r])).head(columns);
  }
  return out;
}

Cohort generate_cohort(const CohortConfig& cfg) {
  if (cfg.n == 0) throw InputError("cohort size must be positive");
  if (cfg.core_effects.empty()) throw InputError("cohort needs at least one core feature");
  if (!(cfg.correlation > -1.0 && cfg.correlation < 1.0)) throw InputError("correlation must lie in (-1,1)");
  const std::size_t core = cfg.core_effects.size();
  const std::size_t extra = cfg.extra_effects.size();
  const std::size_t k = core + extra;

  Cohort c;
  c.core_features = core;
  c.features.resize(static_cast<Eigen::Index>(cfg.n), static_cast<Eigen::Index>(k));
  c.outcomes.resize(cfg.n);
  for (std::size_t j = 0; j < k; ++j) c.names.push_back("x" + std::to_string(j + 1));

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double rho = cfg.correlation;
  const double resid = std::sqrt(1.0 - rho * rho);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    double eta = cfg.intercept;
    for (std::size_t j = 0; j < core; ++j) {
      const double x = normal(rng);
      c.features(r, static_cast<Eigen::Index>(j)) = x;
      eta += cfg.core_effects[j] * x;
    }
    for (std::size_t j = 0; j < extra; ++j) {
      const double base = c.features(r, static_cast<Eigen::Index>(j % core));
      const double x = rho * base + resid * normal(rng);
      c.features(r, static_cast<Eigen::Index>(core + j)) = x;
      eta += cfg.extra_effects[j] * x;
    }
    c.outcomes[i] = unif(rng) < 1.0 / (1.0 + std::exp(-eta)) ? 1 : 0;
  }
  return c;
}

}  // namespace cnb
