#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cnb/error.hpp"
#include "cnb/quadrature.hpp"

namespace cnb {

class WeightSpec;

/// Piecewise-linear function on a strictly ascending grid inside (0,1),
/// constant beyond the first and last grid points.
struct Tabulated {
  std::vector<double> grid;
  std::vector<double> values;

  double operator()(double t) const;
  static Tabulated constant(double value) { return Tabulated{{0.5}, {value}}; }
};

/// Dirac mass at t_star. Has no pointwise value; only its integrals exist.
struct PointMass {
  double t_star = 0.5;
  double mass = 1.0;
};

/// omega(t) = level on (0,1). Both cumulative integrals diverge; only
/// differences between models are finite.
struct Uniform {
  double level = 1.0;
};

/// omega(t) = scale * t (1 - t).
struct Parabola {
  double scale = 1.0;
};

/// scale * (normal density restricted to [lower, upper] and renormalized to
/// integrate to 1 there).
struct TruncatedGaussian {
  double mean = 0.1;
  double sd = 0.02;
  double lower = 0.0;
  double upper = 1.0;
  double scale = 1.0;
};

/// scale * log-normal density whose variable (not its logarithm) has the
/// given mean and standard deviation.
struct LogNormalDensity {
  double variable_mean = 0.1;
  double variable_sd = 0.03;
  double scale = 1.0;

  double log_mu() const;
  double log_sigma() const;
};

/// omega(t) = scale * p(t) / (1/tp_benefit(t) + 1/fp_harm(t)); without a
/// density p is taken as 1. tp_benefit is a(t) - c, fp_harm is d - b(t).
struct HarmonicUtilities {
  Tabulated tp_benefit;
  Tabulated fp_harm;
  std::shared_ptr<const WeightSpec> density;
  double scale = 1.0;
};

/// omega(t) = scale * p(t) t: threshold density under a constant true-positive
/// benefit; its continuous net benefit is the area under the net-benefit curve.
struct ThresholdDensityConstantTpBenefit {
  std::shared_ptr<const WeightSpec> density;
  double scale = 1.0;
};

/// omega(t) = scale * p(t) (1 - t): threshold density under a constant
/// false-positive harm.
struct ThresholdDensityConstantFpHarm {
  std::shared_ptr<const WeightSpec> density;
  double scale = 1.0;
};

/// Sum of weights.
struct Mixture {
  std::vector<WeightSpec> parts;
};

/// Declarative threshold-weighting function omega(t). Construction validates
/// parameters and throws InputError on violations.
class WeightSpec {
 public:
  using Variant = std::variant<PointMass, Uniform, Parabola, TruncatedGaussian, LogNormalDensity,
                               Tabulated, HarmonicUtilities, ThresholdDensityConstantTpBenefit,
                               ThresholdDensityConstantFpHarm, Mixture>;

  WeightSpec(PointMass v);
  WeightSpec(Uniform v);
  WeightSpec(Parabola v);
  WeightSpec(TruncatedGaussian v);
  WeightSpec(LogNormalDensity v);
  WeightSpec(Tabulated v);
  WeightSpec(HarmonicUtilities v);
  WeightSpec(ThresholdDensityConstantTpBenefit v);
  WeightSpec(ThresholdDensityConstantFpHarm v);
  WeightSpec(Mixture v);

  const Variant& variant() const { return v_; }
  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }

  /// Variant tag as used in JSON ("point_mass", "parabola", ...).
  std::string kind() const;

 private:
  void validate() const;
  Variant v_;
};

std::shared_ptr<const WeightSpec> share(WeightSpec spec);

/// 1 / (1/tp_benefit + 1/fp_harm); both arguments must be positive.
double harmonic_weight(double tp_benefit, double fp_harm);

/// The same spec multiplied by factor > 0.
WeightSpec scaled(const WeightSpec& spec, double factor);

/// omega(t) for 0 < t < 1. Throws InputError when the spec contains a point
/// mass (no density exists; use the cumulative integrals instead).
double weight_value(const WeightSpec& spec, double t);

/// Total mass of omega over (0,1), point masses included. Densities should
/// give 1.
double total_mass(const WeightSpec& spec, const QuadConfig& cfg = {});

namespace detail {

struct Atom {
  double t = 0.0;
  double mass = 0.0;
};

/// omega(t) = sum_k coef[k] t^k on [lo, hi).
struct PolyPiece {
  std::vector<double> coef;
  double lo = 0.0;
  double hi = 1.0;

  double value(double t) const;
};

/// Arbitrary smooth omega on [lo, hi); `breaks` are interior points where
/// omega has a kink, used to split quadrature segments.
struct SmoothPiece {
  std::function<double(double)> omega;
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> breaks;
};

/// A spec flattened into point masses, closed-form polynomial pieces and
/// quadrature pieces.
struct ResolvedWeight {
  std::vector<Atom> atoms;
  std::vector<PolyPiece> polys;
  std::vector<SmoothPiece> smooth;

  bool has_continuous_part() const { return !polys.empty() || !smooth.empty(); }
  double density(double t) const;
};

ResolvedWeight resolve(const WeightSpec& spec);

}  // namespace detail

enum class IntegrationMethod { kClosedForm, kQuadrature };

/// W1(x) = integral_0^x omega(t)/t dt and W0(x) = integral_0^x omega(t)/(1-t) dt,
/// point masses at t* contributing for x > t*. Both are nondecreasing with
/// W1(0) = W0(0) = 0.
///
/// Construction never fails on divergence; evaluating W1 at x > 0 throws
/// DivergenceError when omega(0+) > 0, and W0(1) throws when omega(1-) > 0.
/// Differences between two interior points are always finite.
class CumulativeWeights {
 public:
  explicit CumulativeWeights(const WeightSpec& spec, QuadConfig cfg = {});

  double w1(double x) const;
  double w0(double x) const;

  /// Signed integral of omega(t)/t from a to b (atoms in [a, b) when a <= b).
  double w1_between(double a, double b) const;
  double w0_between(double a, double b) const;

  /// Same as w1_between / w0_between with point masses excluded.
  double continuous_w1_between(double a, double b) const;
  double continuous_w0_between(double a, double b) const;

  struct Values {
    std::vector<double> w1;
    std::vector<double> w0;
  };
  /// Continuous part only (point masses excluded), evaluated at many points
  /// with one ascending sweep per quadrature piece. W1 at x > 0 throws when
  /// it diverges at 0; W0 at x = 1 is +infinity when it diverges at 1.
  Values continuous_at(std::span<const double> xs) const;

  bool diverges_at_zero() const { return diverges_at_zero_; }
  bool diverges_at_one() const { return diverges_at_one_; }
  IntegrationMethod method() const;
  const QuadConfig& config() const { return cfg_; }
  const detail::ResolvedWeight& resolved() const { return resolved_; }

 private:
  double continuous_w1(double a, double b) const;
  double continuous_w0(double a, double b) const;

  detail::ResolvedWeight resolved_;
  QuadConfig cfg_;
  bool diverges_at_zero_ = false;
  bool diverges_at_one_ = false;
};

/// Cumulative integrals, rejecting specs whose W1 diverges at 0.
CumulativeWeights cumulative(const WeightSpec& spec, const QuadConfig& cfg = {});

/// Spec scaled so that integral_0^1 omega(t)/t dt = 1; the continuous net benefit
/// is then in combined true positives. Throws for divergent or zero W1(1).
WeightSpec normalize(const WeightSpec& spec, const QuadConfig& cfg = {});

/// W1(1) within 1e-8 of one.
bool is_normalized(const WeightSpec& spec, const QuadConfig& cfg = {});

struct WeightPreset {
  std::string name;
  std::string description;
  WeightSpec spec;
  /// Integration settings the preset was normalized under.
  QuadConfig quad;
};

/// Cardiovascular worked-example weights:
///  - "statins": point mass at 10%;
///  - "lifestyle": Gaussian(mean 10%, sd 2%) kept below 10%. Its density is
///    positive at t = 0, so it needs a lower cutoff (epsilon = 1e-6);
///  - "lognormal_threshold": log-normal threshold density (mean 10%, sd 3%)
///    under constant false-positive harm.
std::vector<WeightPreset> example_weights(bool normalized = true);
WeightPreset example_weight(const std::string& name, bool normalized = true);

}  // namespace cnb
