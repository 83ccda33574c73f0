#include "cnb/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace cnb {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

void validate_tabulated(const Tabulated& tab, const std::string& what) {
  require(!tab.grid.empty(), what + ": grid is empty");
  require(tab.grid.size() == tab.values.size(), what + ": grid and values differ in length");
  for (std::size_t k = 0; k < tab.grid.size(); ++k) {
    require(tab.grid[k] > 0.0 && tab.grid[k] < 1.0, what + ": grid must lie strictly inside (0,1)");
    require(k == 0 || tab.grid[k] > tab.grid[k - 1], what + ": grid must be strictly ascending");
    require(std::isfinite(tab.values[k]) && tab.values[k] >= 0.0, what + ": values must be finite and >= 0");
  }
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double truncation_mass(const TruncatedGaussian& g) {
  return normal_cdf((g.upper - g.mean) / g.sd) - normal_cdf((g.lower - g.mean) / g.sd);
}

}  // namespace

double Tabulated::operator()(double t) const {
  if (t <= grid.front()) return values.front();
  if (t >= grid.back()) return values.back();
  const auto it = std::upper_bound(grid.begin(), grid.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - grid.begin());
  const double frac = (t - grid[j - 1]) / (grid[j] - grid[j - 1]);
  return values[j - 1] + frac * (values[j] - values[j - 1]);
}

double LogNormalDensity::log_sigma() const {
  const double cv = variable_sd / variable_mean;
  return std::sqrt(std::log1p(cv * cv));
}

double LogNormalDensity::log_mu() const {
  const double s = log_sigma();
  return std::log(variable_mean) - 0.5 * s * s;
}

WeightSpec::WeightSpec(PointMass v) : v_(v) { validate(); }
WeightSpec::WeightSpec(Uniform v) : v_(v) { validate(); }
WeightSpec::WeightSpec(Parabola v) : v_(v) { validate(); }
WeightSpec::WeightSpec(TruncatedGaussian v) : v_(v) { validate(); }
WeightSpec::WeightSpec(LogNormalDensity v) : v_(v) { validate(); }
WeightSpec::WeightSpec(Tabulated v) : v_(std::move(v)) { validate(); }
WeightSpec::WeightSpec(HarmonicUtilities v) : v_(std::move(v)) { validate(); }
WeightSpec::WeightSpec(ThresholdDensityConstantTpBenefit v) : v_(std::move(v)) { validate(); }
WeightSpec::WeightSpec(ThresholdDensityConstantFpHarm v) : v_(std::move(v)) { validate(); }
WeightSpec::WeightSpec(Mixture v) : v_(std::move(v)) { validate(); }

void WeightSpec::validate() const {
  std::visit(Overloaded{
                 [](const PointMass& p) {
                   require(p.t_star > 0.0 && p.t_star < 1.0, "point_mass: t_star must lie in (0,1)");
                   require(finite_positive(p.mass), "point_mass: mass must be positive");
                 },
                 [](const Uniform& u) { require(finite_positive(u.level), "uniform: level must be positive"); },
                 [](const Parabola& p) { require(finite_positive(p.scale), "parabola: scale must be positive"); },
                 [](const TruncatedGaussian& g) {
                   require(std::isfinite(g.mean), "truncated_gaussian: mean must be finite");
                   require(finite_positive(g.sd), "truncated_gaussian: sd must be positive");
                   require(g.lower >= 0.0 && g.upper <= 1.0 && g.lower < g.upper,
                           "truncated_gaussian: need 0 <= lower < upper <= 1");
                   require(finite_positive(g.scale), "truncated_gaussian: scale must be positive");
                   require(truncation_mass(g) > 0.0, "truncated_gaussian: no probability mass on [lower, upper]");
                 },
                 [](const LogNormalDensity& l) {
                   require(finite_positive(l.variable_mean), "log_normal: mean must be positive");
                   require(finite_positive(l.variable_sd), "log_normal: sd must be positive");
                   require(finite_positive(l.scale), "log_normal: scale must be positive");
                 },
                 [](const Tabulated& t) { validate_tabulated(t, "tabulated"); },
                 [](const HarmonicUtilities& h) {
                   validate_tabulated(h.tp_benefit, "harmonic_utilities.tp_benefit");
                   validate_tabulated(h.fp_harm, "harmonic_utilities.fp_harm");
                   require(finite_positive(h.scale), "harmonic_utilities: scale must be positive");
                 },
                 [](const ThresholdDensityConstantTpBenefit& d) {
                   require(d.density != nullptr, "constant_tp_benefit: density is required");
                   require(finite_positive(d.scale), "constant_tp_benefit: scale must be positive");
                 },
                 [](const ThresholdDensityConstantFpHarm& d) {
                   require(d.density != nullptr, "constant_fp_harm: density is required");
                   require(finite_positive(d.scale), "constant_fp_harm: scale must be positive");
                 },
                 [](const Mixture& m) { require(!m.parts.empty(), "mixture: needs at least one part"); },
             },
             v_);
}

std::string WeightSpec::kind() const {
  return std::visit(Overloaded{
                        [](const PointMass&) { return std::string("point_mass"); },
                        [](const Uniform&) { return std::string("uniform"); },
                        [](const Parabola&) { return std::string("parabola"); },
                        [](const TruncatedGaussian&) { return std::string("truncated_gaussian"); },
                        [](const LogNormalDensity&) { return std::string("log_normal"); },
                        [](const Tabulated&) { return std::string("tabulated"); },
                        [](const HarmonicUtilities&) { return std::string("harmonic_utilities"); },
                        [](const ThresholdDensityConstantTpBenefit&) { return std::string("constant_tp_benefit"); },
                        [](const ThresholdDensityConstantFpHarm&) { return std::string("constant_fp_harm"); },
                        [](const Mixture&) { return std::string("mixture"); },
                    },
                    v_);
}

std::shared_ptr<const WeightSpec> share(WeightSpec spec) {
  return std::make_shared<const WeightSpec>(std::move(spec));
}

double harmonic_weight(double tp_benefit, double fp_harm) {
  if (!(tp_benefit > 0.0) || !(fp_harm > 0.0))
    throw InputError("harmonic weight needs positive true-positive benefit and false-positive harm");
  return 1.0 / (1.0 / tp_benefit + 1.0 / fp_harm);
}

WeightSpec scaled(const WeightSpec& spec, double factor) {
  require(finite_positive(factor), "scale factor must be positive");
  return std::visit(Overloaded{
                        [&](PointMass p) { p.mass *= factor; return WeightSpec(p); },
                        [&](Uniform u) { u.level *= factor; return WeightSpec(u); },
                        [&](Parabola p) { p.scale *= factor; return WeightSpec(p); },
                        [&](TruncatedGaussian g) { g.scale *= factor; return WeightSpec(g); },
                        [&](LogNormalDensity l) { l.scale *= factor; return WeightSpec(l); },
                        [&](Tabulated t) {
                          for (double& v : t.values) v *= factor;
                          return WeightSpec(std::move(t));
                        },
                        [&](HarmonicUtilities h) { h.scale *= factor; return WeightSpec(std::move(h)); },
                        [&](ThresholdDensityConstantTpBenefit d) { d.scale *= factor; return WeightSpec(std::move(d)); },
                        [&](ThresholdDensityConstantFpHarm d) { d.scale *= factor; return WeightSpec(std::move(d)); },
                        [&](Mixture m) {
                          for (auto& part : m.parts) part = scaled(part, factor);
                          return WeightSpec(std::move(m));
                        },
                    },
                    spec.variant());
}

namespace detail {

double PolyPiece::value(double t) const {
  double v = 0.0;
  for (std::size_t k = coef.size(); k-- > 0;) v = v * t + coef[k];
  return v;
}

double ResolvedWeight::density(double t) const {
  double v = 0.0;
  for (const auto& p : polys)
    if (t >= p.lo && t < p.hi) v += p.value(t);
  for (const auto& s : smooth)
    if (t >= s.lo && t < s.hi) v += s.omega(t);
  return v;
}

namespace {

std::vector<double> times_t(const std::vector<double>& c) {
  std::vector<double> out(c.size() + 1, 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) out[k + 1] = c[k];
  return out;
}

std::vector<double> times_one_minus_t(const std::vector<double>& c) {
  std::vector<double> out(c.size() + 1, 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    out[k] += c[k];
    out[k + 1] -= c[k];
  }
  return out;
}

std::vector<double> times_scalar(std::vector<double> c, double s) {
  for (double& v : c) v *= s;
  return c;
}

std::vector<PolyPiece> tabulated_pieces(const Tabulated& tab) {
  std::vector<PolyPiece> out;
  const auto& g = tab.grid;
  const auto& v = tab.values;
  out.push_back(PolyPiece{{v.front()}, 0.0, g.front()});
  for (std::size_t j = 0; j + 1 < g.size(); ++j) {
    const double slope = (v[j + 1] - v[j]) / (g[j + 1] - g[j]);
    out.push_back(PolyPiece{{v[j] - slope * g[j], slope}, g[j], g[j + 1]});
  }
  out.push_back(PolyPiece{{v.back()}, g.back(), 1.0});
  return out;
}

std::vector<double> interior_breaks(const std::vector<double>& pts, double lo, double hi) {
  std::vector<double> out;
  for (double p : pts)
    if (p > lo && p < hi) out.push_back(p);
  return out;
}

// Multiplies every continuous piece and atom by a smooth factor g(t).
ResolvedWeight multiply(ResolvedWeight r, const std::function<double(double)>& factor,
                        const std::vector<double>& factor_breaks) {
  ResolvedWeight out;
  for (const auto& a : r.atoms) out.atoms.push_back(Atom{a.t, a.mass * factor(a.t)});
  for (auto& p : r.polys) {
    SmoothPiece s;
    s.lo = p.lo;
    s.hi = p.hi;
    s.breaks = interior_breaks(factor_breaks, p.lo, p.hi);
    s.omega = [poly = std::move(p), factor](double t) { return poly.value(t) * factor(t); };
    out.smooth.push_back(std::move(s));
  }
  for (auto& s : r.smooth) {
    for (double b : interior_breaks(factor_breaks, s.lo, s.hi)) s.breaks.push_back(b);
    std::sort(s.breaks.begin(), s.breaks.end());
    s.omega = [omega = std::move(s.omega), factor](double t) { return omega(t) * factor(t); };
    out.smooth.push_back(std::move(s));
  }
  return out;
}

enum class ThresholdFactor { kT, kOneMinusT };

ResolvedWeight multiply_threshold(ResolvedWeight r, ThresholdFactor which, double scale) {
  const bool by_t = which == ThresholdFactor::kT;
  for (auto& a : r.atoms) a.mass *= scale * (by_t ? a.t : 1.0 - a.t);
  for (auto& p : r.polys) p.coef = times_scalar(by_t ? times_t(p.coef) : times_one_minus_t(p.coef), scale);
  for (auto& s : r.smooth) {
    s.omega = [omega = std::move(s.omega), by_t, scale](double t) {
      return scale * omega(t) * (by_t ? t : 1.0 - t);
    };
  }
  return r;
}

}  // namespace

ResolvedWeight resolve(const WeightSpec& spec) {
  return std::visit(
      Overloaded{
          [](const PointMass& p) {
            ResolvedWeight r;
            r.atoms.push_back(Atom{p.t_star, p.mass});
            return r;
          },
          [](const Uniform& u) {
            ResolvedWeight r;
            r.polys.push_back(PolyPiece{{u.level}, 0.0, 1.0});
            return r;
          },
          [](const Parabola& p) {
            ResolvedWeight r;
            r.polys.push_back(PolyPiece{{0.0, p.scale, -p.scale}, 0.0, 1.0});
            return r;
          },
          [](const TruncatedGaussian& g) {
            ResolvedWeight r;
            const double norm = g.scale / (g.sd * truncation_mass(g));
            SmoothPiece s;
            s.lo = g.lower;
            s.hi = g.upper;
            s.breaks = interior_breaks({g.mean}, g.lower, g.upper);
            s.omega = [g, norm](double t) { return norm * normal_pdf((t - g.mean) / g.sd); };
            r.smooth.push_back(std::move(s));
            return r;
          },
          [](const LogNormalDensity& l) {
            ResolvedWeight r;
            const double mu = l.log_mu();
            const double sigma = l.log_sigma();
            const double scale = l.scale;
            SmoothPiece s;
            s.lo = 0.0;
            s.hi = 1.0;
            // Mode, median and mean help the first subdivision find the peak.
            s.breaks = interior_breaks({std::exp(mu - sigma * sigma), std::exp(mu), l.variable_mean}, 0.0, 1.0);
            std::sort(s.breaks.begin(), s.breaks.end());
            s.breaks.erase(std::unique(s.breaks.begin(), s.breaks.end()), s.breaks.end());
            s.omega = [mu, sigma, scale](double t) {
              if (!(t > 0.0)) return 0.0;
              const double z = (std::log(t) - mu) / sigma;
              return scale * normal_pdf(z) / (t * sigma);
            };
            r.smooth.push_back(std::move(s));
            return r;
          },
          [](const Tabulated& t) {
            ResolvedWeight r;
            r.polys = tabulated_pieces(t);
            return r;
          },
          [](const HarmonicUtilities& h) {
            auto importance = [tp = h.tp_benefit, fp = h.fp_harm, scale = h.scale](double t) {
              const double a = tp(t);
              const double b = fp(t);
              if (!(a > 0.0) || !(b > 0.0)) return 0.0;
              return scale / (1.0 / a + 1.0 / b);
            };
            std::vector<double> breaks = h.tp_benefit.grid;
            breaks.insert(breaks.end(), h.fp_harm.grid.begin(), h.fp_harm.grid.end());
            std::sort(breaks.begin(), breaks.end());
            breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
            ResolvedWeight base;
            if (h.density) {
              base = resolve(*h.density);
            } else {
              base.polys.push_back(PolyPiece{{1.0}, 0.0, 1.0});
            }
            return multiply(std::move(base), importance, breaks);
          },
          [](const ThresholdDensityConstantTpBenefit& d) {
            return multiply_threshold(resolve(*d.density), ThresholdFactor::kT, d.scale);
          },
          [](const ThresholdDensityConstantFpHarm& d) {
            return multiply_threshold(resolve(*d.density), ThresholdFactor::kOneMinusT, d.scale);
          },
          [](const Mixture& m) {
            ResolvedWeight r;
            for (const auto& part : m.parts) {
              auto sub = resolve(part);
              r.atoms.insert(r.atoms.end(), sub.atoms.begin(), sub.atoms.end());
              std::move(sub.polys.begin(), sub.polys.end(), std::back_inserter(r.polys));
              std::move(sub.smooth.begin(), sub.smooth.end(), std::back_inserter(r.smooth));
            }
            return r;
          },
      },
      spec.variant());
}

}  // namespace detail

double weight_value(const WeightSpec& spec, double t) {
  require(t > 0.0 && t < 1.0, "threshold must lie strictly inside (0,1)");
  const auto r = detail::resolve(spec);
  if (!r.atoms.empty())
    throw InputError("weight '" + spec.kind() +
                     "' contains a point mass and has no density; use the cumulative integrals W1/W0");
  return r.density(t);
}

namespace {

// Evaluation points that stay off the singular endpoints; the integrands
// omega/t and omega/(1-t) are replaced by their one-sided limits there.
constexpr double kTiny = 1e-200;
const double kBelowOne = std::nextafter(1.0, 0.0);

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

// integral_a^b P(t)/t dt for 0 <= a <= b <= 1; a > 0 unless coef[0] == 0.
double poly_w1(const std::vector<double>& c, double a, double b) {
  double v = 0.0;
  if (c[0] != 0.0) v += c[0] * (std::log(b) - std::log(a));
  for (std::size_t k = 1; k < c.size(); ++k) {
    if (c[k] == 0.0) continue;
    const double kd = static_cast<double>(k);
    v += c[k] * (std::pow(b, kd) - std::pow(a, kd)) / kd;
  }
  return v;
}

// integral_a^b P(t)/(1-t) dt via u = 1 - t: P(1-u) = sum_j q_j u^j.
double poly_w0(const std::vector<double>& c, double a, double b) {
  const std::size_t deg = c.size();
  double v = 0.0;
  for (std::size_t j = 0; j < deg; ++j) {
    double q = 0.0;
    for (std::size_t k = j; k < deg; ++k) q += c[k] * binomial(k, j);
    if (j % 2 == 1) q = -q;
    if (q == 0.0) continue;
    if (j == 0) {
      v += q * (std::log1p(-a) - std::log1p(-b));
    } else {
      const double jd = static_cast<double>(j);
      v += q * (std::pow(1.0 - a, jd) - std::pow(1.0 - b, jd)) / jd;
    }
  }
  return v;
}

double poly_integral(const std::vector<double>& c, double a, double b) {
  double v = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double kd = static_cast<double>(k + 1);
    v += c[k] * (std::pow(b, kd) - std::pow(a, kd)) / kd;
  }
  return v;
}

template <class G>
double smooth_integral(const detail::SmoothPiece& s, const G& g, double a, double b, const QuadConfig& cfg) {
  const double lo = std::max(a, s.lo);
  const double hi = std::min(b, s.hi);
  if (!(hi > lo)) return 0.0;
  // Fixed cells per piece: a cell lying wholly inside [lo, hi] is integrated
  // the same way on every call, so cumulative values never decrease in x.
  std::vector<double> cuts;
  const double width = (s.hi - s.lo) / kMaxInitialPanels;
  for (int k = 0; k < kMaxInitialPanels; ++k) cuts.push_back(s.lo + k * width);
  cuts.push_back(s.hi);
  for (double brk : s.breaks)
    if (brk > s.lo && brk < s.hi) cuts.push_back(brk);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double c0 = std::max(lo, cuts[k]);
    const double c1 = std::min(hi, cuts[k + 1]);
    if (c1 > c0) total += integrate(g, c0, c1, cfg, 1);
  }
  return total;
}

auto over_t(const detail::SmoothPiece& s) {
  return [&s](double t) {
    const double x = std::max(t, kTiny);
    return s.omega(x) / x;
  };
}

auto over_one_minus_t(const detail::SmoothPiece& s) {
  return [&s](double t) {
    const double x = std::min(t, kBelowOne);
    return s.omega(x) / (1.0 - x);
  };
}

}  // namespace

CumulativeWeights::CumulativeWeights(const WeightSpec& spec, QuadConfig cfg)
    : resolved_(detail::resolve(spec)), cfg_(cfg) {
  const double lo = cfg_.epsilon.value_or(0.0);
  const double hi = 1.0 - lo;
  require(lo >= 0.0 && lo < 0.5, "epsilon must lie in [0, 0.5)");

  auto clip = [&](auto& pieces) {
    for (auto& p : pieces) {
      p.lo = std::max(p.lo, lo);
      p.hi = std::min(p.hi, hi);
    }
    pieces.erase(std::remove_if(pieces.begin(), pieces.end(), [](const auto& p) { return !(p.hi > p.lo); }),
                 pieces.end());
  };
  clip(resolved_.polys);
  clip(resolved_.smooth);

  for (const auto& p : resolved_.polys) {
    if (p.lo == 0.0 && p.coef[0] != 0.0) diverges_at_zero_ = true;
    if (p.hi == 1.0 && p.value(1.0) != 0.0) diverges_at_one_ = true;
  }
  for (const auto& s : resolved_.smooth) {
    if (s.lo == 0.0 && s.omega(0.0) > 0.0) diverges_at_zero_ = true;
    if (s.hi == 1.0 && s.omega(1.0) > 0.0) diverges_at_one_ = true;
  }
}

IntegrationMethod CumulativeWeights::method() const {
  return resolved_.smooth.empty() ? IntegrationMethod::kClosedForm : IntegrationMethod::kQuadrature;
}

double CumulativeWeights::continuous_w1(double a, double b) const {
  if (a == 0.0 && b > 0.0 && diverges_at_zero_)
    throw DivergenceError(Endpoint::kZero,
                          "integral of omega(t)/t diverges at t=0 (omega(0+) > 0); compare models by "
                          "difference or configure a lower cutoff epsilon");
  double v = 0.0;
  for (const auto& p : resolved_.polys) {
    const double lo = std::max(a, p.lo);
    const double hi = std::min(b, p.hi);
    if (hi > lo) v += poly_w1(p.coef, lo, hi);
  }
  for (const auto& s : resolved_.smooth) v += smooth_integral(s, over_t(s), a, b, cfg_);
  return v;
}

double CumulativeWeights::continuous_w0(double a, double b) const {
  if (b == 1.0 && a < 1.0 && diverges_at_one_)
    throw DivergenceError(Endpoint::kOne,
                          "integral of omega(t)/(1-t) diverges at t=1 (omega(1-) > 0); compare models by "
                          "difference or configure an upper cutoff epsilon");
  double v = 0.0;
  for (const auto& p : resolved_.polys) {
    const double lo = std::max(a, p.lo);
    const double hi = std::min(b, p.hi);
    if (hi > lo) v += poly_w0(p.coef, lo, hi);
  }
  for (const auto& s : resolved_.smooth) v += smooth_integral(s, over_one_minus_t(s), a, b, cfg_);
  return v;
}

double CumulativeWeights::w1_between(double a, double b) const {
  require(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0, "integration limits must lie in [0,1]");
  if (a > b) return -w1_between(b, a);
  double v = continuous_w1(a, b);
  for (const auto& atom : resolved_.atoms)
    if (atom.t >= a && atom.t < b) v += atom.mass / atom.t;
  return v;
}

double CumulativeWeights::w0_between(double a, double b) const {
  require(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0, "integration limits must lie in [0,1]");
  if (a > b) return -w0_between(b, a);
  double v = continuous_w0(a, b);
  for (const auto& atom : resolved_.atoms)
    if (atom.t >= a && atom.t < b) v += atom.mass / (1.0 - atom.t);
  return v;
}

double CumulativeWeights::continuous_w1_between(double a, double b) const {
  require(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0, "integration limits must lie in [0,1]");
  return a > b ? -continuous_w1(b, a) : continuous_w1(a, b);
}

double CumulativeWeights::continuous_w0_between(double a, double b) const {
  require(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0, "integration limits must lie in [0,1]");
  return a > b ? -continuous_w0(b, a) : continuous_w0(a, b);
}

double CumulativeWeights::w1(double x) const { return w1_between(0.0, x); }
double CumulativeWeights::w0(double x) const { return w0_between(0.0, x); }

CumulativeWeights::Values CumulativeWeights::continuous_at(std::span<const double> xs) const {
  Values out{std::vector<double>(xs.size(), 0.0), std::vector<double>(xs.size(), 0.0)};
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (double x : xs) {
    require(x >= 0.0 && x <= 1.0, "evaluation points must lie in [0,1]");
    if (x > 0.0 && diverges_at_zero_) (void)continuous_w1(0.0, x);  // throws
  }

  for (std::size_t i = 0; i < xs.size(); ++i) {
    const bool w0_infinite = xs[i] == 1.0 && diverges_at_one_;
    for (const auto& p : resolved_.polys) {
      const double hi1 = std::min(xs[i], p.hi);
      if (hi1 > p.lo) {
        out.w1[i] += poly_w1(p.coef, p.lo, hi1);
        if (!w0_infinite) out.w0[i] += poly_w0(p.coef, p.lo, hi1);
      }
    }
    if (w0_infinite) out.w0[i] = kInf;
  }

  if (resolved_.smooth.empty()) return out;
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  for (const auto& s : resolved_.smooth) {
    const auto g1 = over_t(s);
    const auto g0 = over_one_minus_t(s);
    double prev = 0.0;
    double acc1 = 0.0;
    double acc0 = 0.0;
    for (std::size_t i : order) {
      const double x = xs[i];
      if (x > prev) {
        acc1 += smooth_integral(s, g1, prev, x, cfg_);
        acc0 += smooth_integral(s, g0, prev, x, cfg_);
        prev = x;
      }
      out.w1[i] += acc1;
      if (!(x == 1.0 && diverges_at_one_)) out.w0[i] += acc0;
    }
  }
  return out;
}

CumulativeWeights cumulative(const WeightSpec& spec, const QuadConfig& cfg) {
  CumulativeWeights cw(spec, cfg);
  if (cw.diverges_at_zero()) (void)cw.w1(1.0);  // throws DivergenceError naming t=0
  return cw;
}

double total_mass(const WeightSpec& spec, const QuadConfig& cfg) {
  const auto r = detail::resolve(spec);
  double m = 0.0;
  for (const auto& a : r.atoms) m += a.mass;
  for (const auto& p : r.polys) m += poly_integral(p.coef, p.lo, p.hi);
  for (const auto& s : r.smooth) m += smooth_integral(s, [&s](double t) { return s.omega(t); }, s.lo, s.hi, cfg);
  return m;
}

WeightSpec normalize(const WeightSpec& spec, const QuadConfig& cfg) {
  if (const auto* p = spec.get_if<PointMass>()) return PointMass{p->t_star, p->t_star};
  const double total = cumulative(spec, cfg).w1(1.0);
  if (!(total > 0.0) || !std::isfinite(total))
    throw NumericError("cannot normalize: integral of omega(t)/t over (0,1) is zero or not finite");
  return scaled(spec, 1.0 / total);
}

bool is_normalized(const WeightSpec& spec, const QuadConfig& cfg) {
  try {
    return std::abs(CumulativeWeights(spec, cfg).w1(1.0) - 1.0) <= 1e-8;
  } catch (const DivergenceError&) {
    return false;
  }
}

std::vector<WeightPreset> example_weights(bool normalized) {
  QuadConfig lifestyle_quad;
  lifestyle_quad.epsilon = 1e-6;

  std::vector<WeightPreset> presets{
      {"statins", "point mass at the 10% statin-prescription threshold", PointMass{0.10, 1.0}, QuadConfig{}},
      {"lifestyle",
       "lifestyle and monitoring decisions: Gaussian (mean 10%, sd 2%) kept only below 10%",
       TruncatedGaussian{0.10, 0.02, 0.0, 0.10, 1.0}, lifestyle_quad},
      {"lognormal_threshold",
       "single treatment whose optimal threshold is log-normal (mean 10%, sd 3%), constant false-positive harm",
       ThresholdDensityConstantFpHarm{share(LogNormalDensity{0.10, 0.03, 1.0}), 1.0}, QuadConfig{}},
  };
  if (normalized)
    for (auto& p : presets) p.spec = normalize(p.spec, p.quad);
  return presets;
}

WeightPreset example_weight(const std::string& name, bool normalized) {
  for (auto& p : example_weights(normalized))
    if (p.name == name) return p;
  throw InputError("unknown weight preset '" + name + "' (expected statins, lifestyle or lognormal_threshold)");
}

}  // namespace cnb
