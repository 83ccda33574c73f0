#include "cnb/continuous.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cnb/net_benefit.hpp"

namespace cnb {

const char* to_string(CnbUnit unit) {
  switch (unit) {
    case CnbUnit::kCombinedTruePositives:
      return "combined-true-positives";
    case CnbUnit::kAveragedTruePositives:
      return "averaged-true-positives";
    case CnbUnit::kUnnormalized:
      return "unnormalized";
  }
  return "unnormalized";
}

namespace {

constexpr const char* kDivergenceHint =
    "; this weight only supports model differences (cnb_difference / the compare command) "
    "unless a cutoff epsilon is configured";

double atoms_rescaled(const detail::ResolvedWeight& r, const ClassificationCurve& curve) {
  double v = 0.0;
  for (const auto& atom : r.atoms) v += atom.mass * rescaled_net_benefit(curve, atom.t);
  return v;
}

double per_subject_sum(const EvaluationDataset& ds, std::span<const double> scores, const CumulativeWeights& cw) {
  const auto y = ds.outcomes();
  const auto w = ds.weights();
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (y[i] == 0 && scores[i] == 1.0 && cw.diverges_at_one())
      throw DivergenceError(Endpoint::kOne, std::string("integral of omega(t)/(1-t) diverges at t=1 and a "
                                                        "non-event subject has score 1") +
                                                kDivergenceHint);
  const auto values = cw.continuous_at(scores);
  double sum = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i)
    sum += w[i] * (y[i] == 1 ? values.w1[i] : -values.w0[i]);
  return sum / ds.total_weight();
}

double cnb_value(const EvaluationDataset& ds, const std::string& model, const CumulativeWeights& cw) {
  const auto curve = sweep(ds, model);
  double value = atoms_rescaled(cw.resolved(), curve);
  if (cw.resolved().has_continuous_part()) {
    if (cw.diverges_at_zero())
      throw DivergenceError(Endpoint::kZero,
                            std::string("integral of omega(t)/t diverges at t=0") + kDivergenceHint);
    value += per_subject_sum(ds, ds.scores(model), cw);
  }
  return value;
}

bool unit_w1(const CumulativeWeights& cw) {
  if (cw.diverges_at_zero() && cw.resolved().has_continuous_part()) return false;
  return std::abs(cw.w1(1.0) - 1.0) <= 1e-8;
}

}  // namespace

CnbEstimate continuous_net_benefit(const EvaluationDataset& ds, const std::string& model, const WeightSpec& spec,
                                   const QuadConfig& cfg) {
  const CumulativeWeights cw(spec, cfg);
  CnbEstimate est;
  est.model = model;
  est.spec = spec;
  est.value = cnb_value(ds, model, cw);
  est.unit = unit_w1(cw) ? CnbUnit::kCombinedTruePositives : CnbUnit::kUnnormalized;
  return est;
}

double treat_all_cnb(double prevalence, const WeightSpec& spec, const QuadConfig& cfg) {
  if (!(prevalence >= 0.0 && prevalence <= 1.0)) throw InputError("prevalence must lie in [0,1]");
  const CumulativeWeights cw(spec, cfg);
  const double w1 = prevalence > 0.0 ? cw.w1(1.0) : 0.0;
  const double w0 = prevalence < 1.0 ? cw.w0(1.0) : 0.0;
  return prevalence * w1 - (1.0 - prevalence) * w0;
}

double threshold_quadrature_cnb(const ClassificationCurve& curve, const WeightSpec& spec, double lower,
                                double upper, const QuadConfig& cfg) {
  if (cfg.epsilon) {
    lower = std::max(lower, *cfg.epsilon);
    upper = std::min(upper, 1.0 - *cfg.epsilon);
  }
  if (!(lower >= 0.0 && upper <= 1.0 && lower < upper))
    throw InputError("quadrature range must satisfy 0 <= lower < upper <= 1");

  const auto r = detail::resolve(spec);
  double value = 0.0;
  for (const auto& atom : r.atoms)
    if (atom.t >= lower && atom.t <= upper) value += atom.mass * rescaled_net_benefit(curve, atom.t);

  std::vector<double> cuts{lower, upper};
  auto add_cut = [&](double x) {
    if (x > lower && x < upper) cuts.push_back(x);
  };
  for (double j : curve.jump_points()) add_cut(j);
  for (const auto& p : r.polys) {
    add_cut(p.lo);
    add_cut(p.hi);
  }
  for (const auto& s : r.smooth) {
    add_cut(s.lo);
    add_cut(s.hi);
    for (double b : s.breaks) add_cut(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double below_one = std::nextafter(1.0, 0.0);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = cuts[k + 1];
    const double mid = 0.5 * (a + b);
    const std::size_t level = curve.level_index(mid);
    const double tp = curve.tp_levels()[level];
    const double fp = curve.fp_levels()[level];
    if (tp == 0.0 && fp == 0.0) continue;

    // Pieces active over the whole segment, evaluated without their
    // half-open support test so endpoint samples use one-sided limits.
    std::vector<const detail::PolyPiece*> polys;
    std::vector<const detail::SmoothPiece*> smooth;
    for (const auto& p : r.polys)
      if (p.lo <= a && p.hi >= b) polys.push_back(&p);
    for (const auto& s : r.smooth)
      if (s.lo <= a && s.hi >= b) smooth.push_back(&s);
    if (polys.empty() && smooth.empty()) continue;

    auto omega = [&](double t) {
      double v = 0.0;
      for (const auto* p : polys) v += p->value(t);
      for (const auto* s : smooth) v += s->omega(t);
      return v;
    };
    if (a == 0.0 && tp > 0.0 && omega(0.0) > 0.0)
      throw DivergenceError(Endpoint::kZero, "threshold integral diverges at t=0");
    if (b == 1.0 && fp > 0.0 && omega(1.0) > 0.0)
      throw DivergenceError(Endpoint::kOne, "threshold integral diverges at t=1");

    auto integrand = [&](double t) {
      const double x = std::clamp(t, 1e-200, below_one);
      return omega(x) * (tp / x - fp / (1.0 - x));
    };
    value += integrate(integrand, a, b, cfg);
  }
  return value;
}

double cnb_difference(const EvaluationDataset& ds, const std::string& model1, const std::string& model2,
                      const WeightSpec& spec, const QuadConfig& cfg) {
  const CumulativeWeights cw(spec, cfg);
  const auto s1 = ds.scores(model1);
  const auto s2 = ds.scores(model2);
  const auto y = ds.outcomes();
  const auto w = ds.weights();

  bool negative_at_one = false;
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (y[i] == 0 && (s1[i] == 1.0 || s2[i] == 1.0)) negative_at_one = true;
  const bool convergent = !cw.resolved().has_continuous_part() ||
                          (!cw.diverges_at_zero() && !(cw.diverges_at_one() && negative_at_one));
  if (convergent) return cnb_value(ds, model1, cw) - cnb_value(ds, model2, cw);

  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (cw.diverges_at_zero() && (s1[i] == 0.0 || s2[i] == 0.0))
      throw DivergenceError(Endpoint::kZero, "score exactly 0 at subject " + std::to_string(i + 1) +
                                                 " under a weight that diverges at t=0");
    if (cw.diverges_at_one() && (s1[i] == 1.0 || s2[i] == 1.0))
      throw DivergenceError(Endpoint::kOne, "score exactly 1 at subject " + std::to_string(i + 1) +
                                                " under a weight that diverges at t=1");
  }

  const auto c1 = sweep(ds, model1);
  const auto c2 = sweep(ds, model2);
  double value = atoms_rescaled(cw.resolved(), c1) - atoms_rescaled(cw.resolved(), c2);
  double sum = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (s1[i] == s2[i]) continue;
    const double term = y[i] == 1 ? cw.continuous_w1_between(s2[i], s1[i]) : -cw.continuous_w0_between(s2[i], s1[i]);
    sum += w[i] * term;
  }
  return value + sum / ds.total_weight();
}

void require_density(const WeightSpec& density, double tol, const QuadConfig& cfg) {
  const double mass = total_mass(density, cfg);
  if (!(std::abs(mass - 1.0) <= tol))
    throw InputError("threshold density must integrate to 1 (got " + std::to_string(mass) + ")");
}

CnbEstimate expected_net_benefit(const EvaluationDataset& ds, const std::string& model, const WeightSpec& density,
                                 const Tabulated& tp_benefit, const Tabulated& fp_harm, bool normalized,
                                 const QuadConfig& cfg) {
  require_density(density, 1e-6, cfg);
  for (const auto* curve : {&tp_benefit, &fp_harm})
    for (double v : curve->values)
      if (!(v > 0.0)) throw InputError("utility curves must be positive");
  WeightSpec spec = HarmonicUtilities{tp_benefit, fp_harm, share(density), 1.0};
  if (normalized) spec = normalize(spec, cfg);
  auto est = continuous_net_benefit(ds, model, spec, cfg);
  est.unit = normalized ? CnbUnit::kAveragedTruePositives : CnbUnit::kUnnormalized;
  return est;
}

double aunb(const EvaluationDataset& ds, const std::string& model, const WeightSpec& density,
            const QuadConfig& cfg) {
  require_density(density, 1e-6, cfg);
  return continuous_net_benefit(ds, model, ThresholdDensityConstantTpBenefit{share(density), 1.0}, cfg).value;
}

double aunb_alt(const EvaluationDataset& ds, const std::string& model, const WeightSpec& density,
                const QuadConfig& cfg) {
  require_density(density, 1e-6, cfg);
  return continuous_net_benefit(ds, model, ThresholdDensityConstantFpHarm{share(density), 1.0}, cfg).value;
}

double log_likelihood(const EvaluationDataset& ds, const std::string& model) {
  const auto f = ds.scores(model);
  const auto y = ds.outcomes();
  const auto w = ds.weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if ((y[i] == 1 && f[i] == 0.0) || (y[i] == 0 && f[i] == 1.0))
      throw NumericError("log-likelihood is -infinity: subject " + std::to_string(i + 1) + " of model '" + model +
                         "' has score " + (f[i] == 0.0 ? "0 with outcome 1" : "1 with outcome 0"));
    sum += w[i] * (y[i] == 1 ? std::log(f[i]) : std::log1p(-f[i]));
  }
  return sum / ds.total_weight();
}

double brier(const EvaluationDataset& ds, const std::string& model) {
  const auto f = ds.scores(model);
  const auto y = ds.outcomes();
  const auto w = ds.weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double r = y[i] - f[i];
    sum += w[i] * r * r;
  }
  return sum / ds.total_weight();
}

}  // namespace cnb
