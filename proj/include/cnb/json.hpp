#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "cnb/continuous.hpp"
#include "cnb/dataset.hpp"
#include "cnb/demo.hpp"
#include "cnb/models.hpp"
#include "cnb/net_benefit.hpp"
#include "cnb/oracle.hpp"
#include "cnb/resample.hpp"
#include "cnb/weighting.hpp"

namespace cnb {

using Json = nlohmann::ordered_json;

/// A weight spec read from JSON, plus the integration cutoff it asks for.
struct ParsedWeight {
  WeightSpec spec;
  std::optional<double> epsilon;
  std::string label;  // preset name or variant tag
};

/// Weight-spec JSON:
///   {"type": "point_mass", "t_star": 0.1, "mass": 1}
///   {"type": "uniform", "level": 1}
///   {"type": "parabola", "scale": 1}
///   {"type": "truncated_gaussian", "mean": 0.1, "sd": 0.02, "lower": 0, "upper": 0.1, "scale": 1}
///   {"type": "log_normal", "variable_mean": 0.1, "variable_sd": 0.03, "scale": 1}
///   {"type": "tabulated", "grid": [...], "values": [...]}
///   {"type": "harmonic_utilities", "tp_benefit": CURVE, "fp_harm": CURVE, "density": SPEC, "scale": 1}
///   {"type": "constant_tp_benefit", "density": SPEC, "scale": 1}
///   {"type": "constant_fp_harm", "density": SPEC, "scale": 1}
///   {"type": "mixture", "parts": [SPEC, ...]}
///   {"preset": "statins" | "lifestyle" | "lognormal_threshold"}
/// CURVE is a number (constant) or {"grid": [...], "values": [...]}. Parameters
/// other than "type" are optional and default as in the C++ structs. Any
/// object may add "normalize": true (for presets it defaults to true and
/// false gives the raw preset). The top level may carry "epsilon". Unknown
/// keys are rejected with InputError.
ParsedWeight parse_weight(const Json& j);
/// Parses JSON text.
ParsedWeight parse_weight(const std::string& text);
inline ParsedWeight parse_weight(const char* text) { return parse_weight(std::string(text)); }

Json to_json(const WeightSpec& spec);
Json to_json(const Tabulated& curve);
Json to_json(const QuadConfig& cfg);
Json to_json(const ConfidenceInterval& ci);
Json to_json(const CnbEstimate& est);
Json to_json(const DatasetSummary& s);
Json to_json(const DecisionCurveTable& table);
Json to_json(const LogisticModel& model);
Json to_json(const BootstrapResult& r);
Json to_json(const OptimismResult& r);
Json to_json(const oracle::VerifyReport& r);
Json to_json(const oracle::Witness& w);
Json to_json(const oracle::TwoGroupReport& r);
Json to_json(const DemoReport& r);

/// Inverse of to_json(LogisticModel).
LogisticModel logistic_model_from_json(const Json& j);

}  // namespace cnb
