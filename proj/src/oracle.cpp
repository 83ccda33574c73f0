#include "cnb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cnb/confusion.hpp"
#include "cnb/continuous.hpp"
#include "cnb/error.hpp"
#include "cnb/net_benefit.hpp"

namespace cnb::oracle {

namespace {

double logistic(double eta) { return 1.0 / (1.0 + std::exp(-eta)); }

class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Utility earned by utility record u when paired with score record s.
double pair_utility(const Individual& u, const Individual& s, std::size_t model) {
  const bool flagged = s.scores[model] > u.t_star;
  if (s.outcome == 1) return flagged ? u.a : u.c;
  return flagged ? u.b : u.d;
}

struct Records {
  std::vector<std::vector<double>> scores;  // [i][model]
  std::vector<int> outcomes;
};

Records draw_records(std::size_t n, std::size_t features, const std::vector<double>& outcome_coefficients,
                     const std::vector<LogisticScoreModel>& models, std::mt19937_64& rng) {
  if (features < 1 || features > 3) throw InputError("population generator supports 1 to 3 features");
  if (outcome_coefficients.size() != features + 1)
    throw InputError("outcome model needs an intercept and one coefficient per feature");
  for (const auto& m : models)
    if (m.coefficients.size() != features + 1)
      throw InputError("score model '" + m.name + "' needs an intercept and one coefficient per feature");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Records r;
  r.scores.resize(n);
  r.outcomes.resize(n);
  std::vector<double> x(features);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : x) v = normal(rng);
    double eta = outcome_coefficients[0];
    for (std::size_t k = 0; k < features; ++k) eta += outcome_coefficients[k + 1] * x[k];
    r.outcomes[i] = unif(rng) < logistic(eta) ? 1 : 0;
    for (const auto& m : models) {
      double s = m.coefficients[0];
      for (std::size_t k = 0; k < features; ++k) s += m.coefficients[k + 1] * x[k];
      r.scores[i].push_back(logistic(s));
    }
  }
  return r;
}

double draw_threshold(const ThresholdDistribution& dist, std::mt19937_64& rng) {
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ConstantThreshold>) {
          return d.t;
        } else if constexpr (std::is_same_v<T, UniformThreshold>) {
          std::uniform_real_distribution<double> u(d.lower, d.upper);
          double t = u(rng);
          while (t <= 0.0) t = u(rng);
          return t;
        } else if constexpr (std::is_same_v<T, LogNormalThreshold>) {
          const double s2 = std::log1p((d.sd / d.mean) * (d.sd / d.mean));
          std::lognormal_distribution<double> ln(std::log(d.mean) - 0.5 * s2, std::sqrt(s2));
          for (int k = 0; k < 10000; ++k) {
            const double t = ln(rng);
            if (t > 0.0 && t < 1.0) return t;
          }
          throw InputError("log-normal threshold distribution puts almost no mass below 1");
        } else {
          std::discrete_distribution<std::size_t> pick(d.probabilities.begin(), d.probabilities.end());
          return d.values[pick(rng)];
        }
      },
      dist);
}

void validate_distribution(const ThresholdDistribution& dist) {
  std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        auto inside = [](double t) { return t > 0.0 && t < 1.0; };
        if constexpr (std::is_same_v<T, ConstantThreshold>) {
          if (!inside(d.t)) throw InputError("constant threshold must lie in (0,1)");
        } else if constexpr (std::is_same_v<T, UniformThreshold>) {
          if (!(d.lower >= 0.0 && d.upper <= 1.0 && d.lower < d.upper))
            throw InputError("uniform threshold range must satisfy 0 <= lower < upper <= 1");
        } else if constexpr (std::is_same_v<T, LogNormalThreshold>) {
          if (!(inside(d.mean) && d.sd > 0.0 && std::isfinite(d.sd)))
            throw InputError("log-normal threshold needs mean in (0,1) and sd > 0");
        } else {
          if (d.values.empty() || d.values.size() != d.probabilities.size())
            throw InputError("discrete threshold needs matching values and probabilities");
          double total = 0.0;
          for (std::size_t k = 0; k < d.values.size(); ++k) {
            if (!inside(d.values[k])) throw InputError("discrete threshold values must lie in (0,1)");
            if (!(d.probabilities[k] >= 0.0 && std::isfinite(d.probabilities[k])))
              throw InputError("discrete threshold probabilities must be nonnegative");
            total += d.probabilities[k];
          }
          if (!(total > 0.0)) throw InputError("discrete threshold probabilities sum to zero");
        }
      },
      dist);
}

void assign_utilities(Individual& ind, const UtilityModel& model) {
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantUtilities>) {
          ind.a = m.a;
          ind.b = m.b;
          ind.c = m.c;
          ind.d = m.d;
          ind.t_star = optimal_threshold(m.a, m.b, m.c, m.d);
        } else {
          const double t = ind.t_star;
          const double h = m.importance(t);
          if (!(h > 0.0)) throw InputError("importance function must be positive");
          ind.c = m.g_c(t);
          ind.d = m.g_d(t);
          ind.a = ind.c + h / t;
          ind.b = ind.d - h / (1.0 - t);
        }
      },
      model);
}

double mean_difference_exhaustive(const UtilityPopulation& pop, std::size_t m1, std::size_t m2, std::size_t& count) {
  const std::size_t n = pop.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double total_weight = 0.0;
  for (const auto& ind : pop.individuals) total_weight += ind.weight;
  NeumaierSum sum;
  count = 0;
  do {
    NeumaierSum diff;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& u = pop.individuals[i];
      const auto& s = pop.individuals[perm[i]];
      diff.add(s.weight * (pair_utility(u, s, m1) - pair_utility(u, s, m2)));
    }
    sum.add(diff.value() / total_weight);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum.value() / static_cast<double>(count);
}

}  // namespace

double optimal_threshold(double a, double b, double c, double d) {
  if (!(a > c && d > b)) throw InputError("utilities need a > c and d > b");
  return (d - b) / ((a - c) + (d - b));
}

std::size_t UtilityPopulation::model_index(const std::string& model) const {
  const auto it = std::find(models.begin(), models.end(), model);
  if (it == models.end()) throw InputError("unknown model '" + model + "'");
  return static_cast<std::size_t>(it - models.begin());
}

EvaluationDataset UtilityPopulation::dataset() const {
  std::vector<std::vector<double>> scores(models.size());
  std::vector<int> outcomes;
  std::vector<double> weights;
  for (const auto& ind : individuals) {
    for (std::size_t m = 0; m < models.size(); ++m) scores[m].push_back(ind.scores.at(m));
    outcomes.push_back(ind.outcome);
    weights.push_back(ind.weight);
  }
  return EvaluationDataset(models, std::move(scores), std::move(outcomes), std::move(weights));
}

void UtilityPopulation::validate() const {
  if (individuals.empty()) throw InputError("population is empty");
  for (std::size_t i = 0; i < individuals.size(); ++i) {
    const auto& ind = individuals[i];
    if (ind.scores.size() != models.size())
      throw InputError("individual " + std::to_string(i + 1) + " lacks a score per model");
    const double t = optimal_threshold(ind.a, ind.b, ind.c, ind.d);
    if (!(std::abs(t - ind.t_star) <= 1e-12))
      throw InputError("individual " + std::to_string(i + 1) + " has t_star inconsistent with its utilities");
  }
}

UtilityPopulation generate_population(const GeneratorConfig& cfg) {
  if (cfg.n == 0) throw InputError("population size must be positive");
  if (cfg.models.empty()) throw InputError("population needs at least one score model");
  validate_distribution(cfg.threshold);
  std::mt19937_64 rng(cfg.seed);
  const auto records = draw_records(cfg.n, cfg.features, cfg.outcome_coefficients, cfg.models, rng);
  UtilityPopulation pop;
  for (const auto& m : cfg.models) pop.models.push_back(m.name);
  pop.individuals.resize(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    auto& ind = pop.individuals[i];
    ind.scores = records.scores[i];
    ind.outcome = records.outcomes[i];
    ind.t_star = draw_threshold(cfg.threshold, rng);
    assign_utilities(ind, cfg.utilities);
  }
  pop.validate();
  return pop;
}

std::vector<double> utility_contributions(const UtilityPopulation& pop, const std::string& model) {
  const std::size_t m = pop.model_index(model);
  std::vector<double> out;
  out.reserve(pop.size());
  for (const auto& ind : pop.individuals) out.push_back(pair_utility(ind, ind, m));
  return out;
}

double brute_force_utility(const UtilityPopulation& pop, const std::string& model) {
  const auto u = utility_contributions(pop, model);
  NeumaierSum sum;
  double total_weight = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    sum.add(pop.individuals[i].weight * u[i]);
    total_weight += pop.individuals[i].weight;
  }
  return sum.value() / total_weight;
}

double expected_nb_difference(const UtilityPopulation& pop, const std::string& model1, const std::string& model2) {
  Mixture mix;
  const double n = static_cast<double>(pop.size());
  for (const auto& ind : pop.individuals) {
    const double h = harmonic_weight(ind.a - ind.c, ind.d - ind.b);
    mix.parts.push_back(PointMass{ind.t_star, h / n});
  }
  return cnb_difference(pop.dataset(), model1, model2, WeightSpec(std::move(mix)));
}

const char* to_string(VerifyMode mode) { return mode == VerifyMode::kExhaustive ? "exhaustive" : "monte-carlo"; }

VerifyReport verify_expected_nb(const UtilityPopulation& pop, const std::string& model1, const std::string& model2,
                                const VerifyOptions& opts) {
  pop.validate();
  const std::size_t m1 = pop.model_index(model1);
  const std::size_t m2 = pop.model_index(model2);
  VerifyReport rep;
  rep.mode = opts.mode;
  rep.n = pop.size();
  rep.expected_nb_difference = expected_nb_difference(pop, model1, model2);

  if (opts.mode == VerifyMode::kExhaustive) {
    if (pop.size() > 8)
      throw InputError("exhaustive verification supports at most 8 individuals (got " +
                       std::to_string(pop.size()) + "); use Monte-Carlo mode");
    std::size_t count = 0;
    rep.mean_utility_difference = mean_difference_exhaustive(pop, m1, m2, count);
    rep.permutations = count;
    rep.tolerance = opts.tolerance;
  } else {
    if (opts.permutations < 2) throw InputError("Monte-Carlo verification needs at least 2 permutations");
    const std::size_t n = pop.size();
    double total_weight = 0.0;
    for (const auto& ind : pop.individuals) total_weight += ind.weight;
    std::mt19937_64 rng(opts.seed);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> diffs;
    diffs.reserve(opts.permutations);
    for (std::size_t p = 0; p < opts.permutations; ++p) {
      std::shuffle(perm.begin(), perm.end(), rng);
      NeumaierSum diff;
      for (std::size_t i = 0; i < n; ++i) {
        const auto& u = pop.individuals[i];
        const auto& s = pop.individuals[perm[i]];
        diff.add(s.weight * (pair_utility(u, s, m1) - pair_utility(u, s, m2)));
      }
      diffs.push_back(diff.value() / total_weight);
    }
    NeumaierSum sum;
    for (double d : diffs) sum.add(d);
    const double mean = sum.value() / static_cast<double>(diffs.size());
    NeumaierSum ss;
    for (double d : diffs) ss.add((d - mean) * (d - mean));
    const double var = ss.value() / static_cast<double>(diffs.size() - 1);
    rep.mean_utility_difference = mean;
    rep.permutations = diffs.size();
    rep.standard_error = std::sqrt(var / static_cast<double>(diffs.size()));
    rep.tolerance = opts.standard_errors * rep.standard_error + 1e-12;
  }
  rep.abs_error = std::abs(rep.mean_utility_difference - rep.expected_nb_difference);
  rep.passed = rep.abs_error <= rep.tolerance;
  return rep;
}

namespace {

struct Candidate {
  std::vector<double> s1;
  std::vector<double> s2;
  double t1 = 0.0;
  double t2 = 0.0;
  double mix = 0.0;
  double margin = 0.0;
};

double quick_nb(const std::vector<double>& scores, const std::vector<int>& y, double t) {
  double tp = 0.0;
  double fp = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > t) (y[i] == 1 ? tp : fp) += 1.0;
  }
  const double n = static_cast<double>(scores.size());
  return tp / n - t / (1.0 - t) * fp / n;
}

// Smaller of the two ranking margins, negative when the rankings agree.
double disagreement(double nb1a, double nb1b, double nb2a, double nb2b, double t1, double t2, double q) {
  const double d1 = nb1a - nb2a;
  const double d2 = nb1b - nb2b;
  const double daunb = q * d1 + (1.0 - q) * d2;
  const double dalt = q * (1.0 - t1) / t1 * d1 + (1.0 - q) * (1.0 - t2) / t2 * d2;
  return std::min(daunb, -dalt);
}

}  // namespace

std::optional<Witness> aunb_disagreement_witness(const WitnessSearchConfig& cfg) {
  const std::size_t n = cfg.outcomes.size();
  if (n == 0 || cfg.score_grid.empty() || cfg.threshold_grid.size() < 2 || cfg.mix_grid.empty())
    throw InputError("witness search needs outcomes, a score grid, two thresholds and a mixing grid");
  for (double t : cfg.threshold_grid)
    if (!(t > 0.0 && t < 1.0)) throw InputError("witness thresholds must lie in (0,1)");
  for (double q : cfg.mix_grid)
    if (!(q > 0.0 && q < 1.0)) throw InputError("witness mixing weights must lie in (0,1)");

  std::optional<Candidate> best;
  std::string phase;

  // Grid phase: every score vector over the grid, every threshold pair.
  const std::size_t g = cfg.score_grid.size();
  std::size_t vectors = 1;
  for (std::size_t i = 0; i < n; ++i) vectors *= g;
  if (vectors <= 4096) {
    std::vector<std::vector<double>> all(vectors, std::vector<double>(n));
    for (std::size_t v = 0; v < vectors; ++v) {
      std::size_t code = v;
      for (std::size_t i = 0; i < n; ++i) {
        all[v][i] = cfg.score_grid[code % g];
        code /= g;
      }
    }
    const std::size_t k = cfg.threshold_grid.size();
    std::vector<std::vector<double>> nb(vectors, std::vector<double>(k));
    for (std::size_t v = 0; v < vectors; ++v)
      for (std::size_t j = 0; j < k; ++j) nb[v][j] = quick_nb(all[v], cfg.outcomes, cfg.threshold_grid[j]);
    for (std::size_t v1 = 0; v1 < vectors; ++v1)
      for (std::size_t v2 = 0; v2 < vectors; ++v2) {
        if (v1 == v2) continue;
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t b = a + 1; b < k; ++b)
            for (double q : cfg.mix_grid) {
              const double ta = cfg.threshold_grid[a];
              const double tb = cfg.threshold_grid[b];
              const double m = disagreement(nb[v1][a], nb[v1][b], nb[v2][a], nb[v2][b], ta, tb, q);
              if (m > cfg.min_margin && (!best || m > best->margin)) best = Candidate{all[v1], all[v2], ta, tb, q, m};
            }
      }
    if (best) phase = "grid";
  }

  if (!best) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t it = 0; it < cfg.random_budget; ++it) {
      std::vector<double> s1(n), s2(n);
      for (auto& s : s1) s = unif(rng);
      for (auto& s : s2) s = unif(rng);
      double ta = 0.01 + 0.98 * unif(rng);
      double tb = 0.01 + 0.98 * unif(rng);
      if (ta > tb) std::swap(ta, tb);
      if (ta == tb) continue;
      const double q = 0.05 + 0.9 * unif(rng);
      const double m = disagreement(quick_nb(s1, cfg.outcomes, ta), quick_nb(s1, cfg.outcomes, tb),
                                    quick_nb(s2, cfg.outcomes, ta), quick_nb(s2, cfg.outcomes, tb), ta, tb, q);
      if (m > cfg.min_margin) {
        best = Candidate{s1, s2, ta, tb, q, m};
        phase = "random";
        break;
      }
    }
  }
  if (!best) return std::nullopt;

  EvaluationDataset ds({"model1", "model2"}, {best->s1, best->s2}, cfg.outcomes);
  WeightSpec density = Mixture{{PointMass{best->t1, best->mix}, PointMass{best->t2, 1.0 - best->mix}}};
  Witness w{ds, density, best->t1, best->t2, best->mix, 0.0, 0.0, 0.0, 0.0, phase};
  w.aunb1 = aunb(ds, "model1", density);
  w.aunb2 = aunb(ds, "model2", density);
  w.aunb_alt1 = aunb_alt(ds, "model1", density);
  w.aunb_alt2 = aunb_alt(ds, "model2", density);
  if (!(w.aunb_margin() > cfg.min_margin && w.aunb_alt_margin() > cfg.min_margin))
    throw NumericError("witness candidate failed re-verification by direct integration");
  return w;
}

UtilityPopulation two_group_scenario(const TwoGroupConfig& cfg) {
  if (cfg.n_per_group == 0) throw InputError("groups must be nonempty");
  if (!(cfg.g1_scale > 0.0 && cfg.g2_scale > 0.0)) throw InputError("group utility scales must be positive");
  for (double t : {cfg.g1_threshold, cfg.g2_threshold})
    if (!(t > 0.0 && t < 1.0)) throw InputError("group thresholds must lie in (0,1)");
  std::mt19937_64 rng(cfg.seed);
  const std::vector<LogisticScoreModel> models = {{"model1", {-2.0, 1.0, 0.0}}, {"model2", {-2.0, 0.3, 0.7}}};
  const auto records = draw_records(2 * cfg.n_per_group, 2, {-2.0, 1.0, 0.5}, models, rng);
  UtilityPopulation pop;
  pop.models = {"model1", "model2"};
  for (std::size_t i = 0; i < 2 * cfg.n_per_group; ++i) {
    Individual ind;
    ind.scores = records.scores[i];
    ind.outcome = records.outcomes[i];
    ind.group = i < cfg.n_per_group ? 1 : 2;
    const double t = ind.group == 1 ? cfg.g1_threshold : cfg.g2_threshold;
    const double h = ind.group == 1 ? cfg.g1_scale : cfg.g2_scale;
    ind.t_star = t;
    ind.c = 0.0;
    ind.d = 0.0;
    ind.a = h / t;
    ind.b = -h / (1.0 - t);
    pop.individuals.push_back(std::move(ind));
  }
  return pop;
}

TwoGroupReport analyze_two_groups(const UtilityPopulation& pop, const std::string& model1,
                                  const std::string& model2) {
  TwoGroupReport r;
  double total_weight = 0.0;
  for (const auto& ind : pop.individuals) total_weight += ind.weight;
  const double n = static_cast<double>(pop.size());
  const auto u1 = utility_contributions(pop, model1);
  const auto u2 = utility_contributions(pop, model2);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const auto& ind = pop.individuals[i];
    const double h = harmonic_weight(ind.a - ind.c, ind.d - ind.b);
    const double contribution = ind.weight * (u1[i] - u2[i]) / total_weight;
    if (ind.group == 1) {
      r.g1_share += 1.0 / n;
      r.g1_weight += h / n;
      r.g1_contribution += contribution;
    } else if (ind.group == 2) {
      r.g2_share += 1.0 / n;
      r.g2_weight += h / n;
      r.g2_contribution += contribution;
    }
  }
  r.weight_ratio = r.g2_weight / r.g1_weight;
  r.utility_difference = r.g1_contribution + r.g2_contribution;
  const double denom = std::abs(r.g1_contribution) + std::abs(r.g2_contribution);
  r.g2_fraction = denom > 0.0 ? std::abs(r.g2_contribution) / denom : 0.0;
  return r;
}

}  // namespace cnb::oracle
