#include "cnb/resample.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "cnb/error.hpp"

namespace cnb {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void validate(const BootstrapConfig& cfg) {
  if (cfg.replicates < 1) throw InputError("bootstrap needs at least one replicate");
  if (!(cfg.level > 0.0 && cfg.level < 1.0)) throw InputError("confidence level must lie in (0,1)");
  if (!(cfg.max_failure_fraction >= 0.0 && cfg.max_failure_fraction < 1.0))
    throw InputError("failure fraction must lie in [0,1)");
}

// Runs task(b) for every replicate, storing the value at index b. Failures
// become NaN; the first failure message is kept for diagnostics.
std::vector<double> run_replicates(std::size_t count, unsigned threads,
                                   const std::function<double(std::size_t)>& task, std::string& first_error) {
  std::vector<double> values(count, std::numeric_limits<double>::quiet_NaN());
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t first_index = count;
  auto worker = [&] {
    for (std::size_t b = next++; b < count; b = next++) {
      try {
        values[b] = task(b);
        if (std::isfinite(values[b])) continue;
        values[b] = std::numeric_limits<double>::quiet_NaN();
        std::lock_guard lock(mu);
        if (b < first_index) {
          first_index = b;
          first_error = "non-finite value";
        }
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        if (b < first_index) {
          first_index = b;
          first_error = e.what();
        }
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_index < count) first_error = "replicate " + std::to_string(first_index) + ": " + first_error;
  return values;
}

std::size_t count_failures(const std::vector<double>& values) {
  return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [](double v) { return std::isnan(v); }));
}

void check_failures(std::size_t failures, const BootstrapConfig& cfg, const std::string& name,
                    const std::string& first_error) {
  if (failures == cfg.replicates ||
      static_cast<double>(failures) > cfg.max_failure_fraction * static_cast<double>(cfg.replicates))
    throw NumericError("bootstrap of '" + name + "': " + std::to_string(failures) + " of " +
                       std::to_string(cfg.replicates) + " replicates failed (first: " + first_error + ")");
}

}  // namespace

std::vector<std::size_t> bootstrap_rows(std::size_t n, std::uint64_t seed, std::size_t replicate) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(replicate))));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> rows(n);
  for (auto& r : rows) r = pick(rng);
  return rows;
}

double quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InputError("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) + 1.0) * p;
  if (h <= 1.0) return sorted.front();
  if (h >= static_cast<double>(sorted.size())) return sorted.back();
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const double frac = h - static_cast<double>(lo);
  const double a = sorted[lo - 1];
  if (frac == 0.0) return a;
  return a + frac * (sorted[lo] - a);
}

BootstrapResult bootstrap_ci(const Statistic& stat, const EvaluationDataset& ds, const BootstrapConfig& cfg) {
  validate(cfg);
  BootstrapResult res;
  res.statistic = stat.name;
  res.level = cfg.level;
  res.replicates = cfg.replicates;
  res.seed = cfg.seed;
  res.point = stat.fn(ds);
  std::string first_error;
  res.values = run_replicates(
      cfg.replicates, cfg.threads,
      [&](std::size_t b) {
        const auto rows = bootstrap_rows(ds.size(), cfg.seed, b);
        return stat.fn(ds.select_rows(rows));
      },
      first_error);
  res.failures = count_failures(res.values);
  check_failures(res.failures, cfg, stat.name, first_error);
  std::vector<double> ok;
  ok.reserve(res.values.size());
  for (double v : res.values)
    if (!std::isnan(v)) ok.push_back(v);
  std::sort(ok.begin(), ok.end());
  const double alpha = 1.0 - cfg.level;
  res.lower = quantile(ok, alpha / 2.0);
  res.upper = quantile(ok, 1.0 - alpha / 2.0);
  return res;
}

OptimismResult optimism_correct(const FitProcedure& fit, const Statistic& stat, const EvaluationDataset& ds,
                                const BootstrapConfig& cfg) {
  validate(cfg);
  std::vector<std::size_t> all(ds.size());
  std::iota(all.begin(), all.end(), 0);
  OptimismResult res;
  res.statistic = stat.name;
  res.replicates = cfg.replicates;
  res.seed = cfg.seed;
  const auto apparent_scores = fit(all)(all);
  res.apparent = stat.fn(ds.with_single_model(kScoreColumn, apparent_scores));
  std::string first_error;
  res.optimism = run_replicates(
      cfg.replicates, cfg.threads,
      [&](std::size_t b) {
        const auto rows = bootstrap_rows(ds.size(), cfg.seed, b);
        const auto scorer = fit(rows);
        const double on_replicate = stat.fn(ds.select_rows(rows).with_single_model(kScoreColumn, scorer(rows)));
        const double on_original = stat.fn(ds.with_single_model(kScoreColumn, scorer(all)));
        std::vector<double> fixed;
        fixed.reserve(rows.size());
        for (auto r : rows) fixed.push_back(apparent_scores[r]);
        const double fixed_on_replicate = stat.fn(ds.select_rows(rows).with_single_model(kScoreColumn, fixed));
        return (on_replicate - fixed_on_replicate) - (on_original - res.apparent);
      },
      first_error);
  res.failures = count_failures(res.optimism);
  check_failures(res.failures, cfg, stat.name, first_error);
  double sum = 0.0;
  std::size_t ok = 0;
  for (double v : res.optimism)
    if (!std::isnan(v)) {
      sum += v;
      ++ok;
    }
  res.mean_optimism = sum / static_cast<double>(ok);
  res.corrected = res.apparent - res.mean_optimism;
  return res;
}

}  // namespace cnb
