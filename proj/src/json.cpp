#include "cnb/json.hpp"

#include <set>

#include "cnb/error.hpp"

namespace cnb {

namespace {

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!ok.count(key)) throw InputError("unknown key '" + key + "' in " + where);
}

double number(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) throw InputError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::vector<double> numbers(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw InputError(std::string("'") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw InputError(std::string("'") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Tabulated parse_curve(const Json& j, const std::string& where) {
  if (j.is_number()) return Tabulated::constant(j.get<double>());
  if (!j.is_object()) throw InputError(where + " must be a number or {grid, values}");
  check_keys(j, {"grid", "values"}, where);
  return Tabulated{numbers(j, "grid"), numbers(j, "values")};
}

struct Parsed {
  WeightSpec spec;
  std::optional<double> epsilon;
  std::string label;
};

Parsed parse_spec(const Json& j, bool top);

std::shared_ptr<const WeightSpec> parse_density(const Json& j, const char* key) {
  if (!j.contains(key)) return nullptr;
  return share(parse_spec(j.at(key), false).spec);
}

Parsed parse_spec(const Json& j, bool top) {
  if (!j.is_object()) throw InputError("weight spec must be a JSON object");
  if (j.contains("preset")) {
    if (top)
      check_keys(j, {"preset", "normalize", "epsilon"}, "preset weight");
    else
      check_keys(j, {"preset", "normalize"}, "preset weight");
    if (!j.at("preset").is_string()) throw InputError("'preset' must be a string");
    bool norm = true;
    if (j.contains("normalize")) {
      if (!j.at("normalize").is_boolean()) throw InputError("'normalize' must be true or false");
      norm = j.at("normalize").get<bool>();
    }
    const auto p = example_weight(j.at("preset").get<std::string>(), norm);
    return {p.spec, p.quad.epsilon, p.name};
  }
  if (!j.contains("type") || !j.at("type").is_string()) throw InputError("weight spec needs a string 'type'");
  const std::string type = j.at("type").get<std::string>();
  const auto where = "weight '" + type + "'";
  auto keys = [&](std::initializer_list<const char*> own) {
    std::vector<const char*> all(own);
    all.push_back("type");
    all.push_back("normalize");
    if (top) all.push_back("epsilon");
    const std::set<std::string> ok(all.begin(), all.end());
    for (const auto& [key, value] : j.items())
      if (!ok.count(key)) throw InputError("unknown key '" + key + "' in " + where);
  };

  std::optional<WeightSpec> spec;
  if (type == "point_mass") {
    keys({"t_star", "mass"});
    spec = PointMass{number(j, "t_star", 0.5), number(j, "mass", 1.0)};
  } else if (type == "uniform") {
    keys({"level"});
    spec = Uniform{number(j, "level", 1.0)};
  } else if (type == "parabola") {
    keys({"scale"});
    spec = Parabola{number(j, "scale", 1.0)};
  } else if (type == "truncated_gaussian") {
    keys({"mean", "sd", "lower", "upper", "scale"});
    spec = TruncatedGaussian{number(j, "mean", 0.1), number(j, "sd", 0.02), number(j, "lower", 0.0),
                             number(j, "upper", 1.0), number(j, "scale", 1.0)};
  } else if (type == "log_normal") {
    keys({"variable_mean", "variable_sd", "scale"});
    spec = LogNormalDensity{number(j, "variable_mean", 0.1), number(j, "variable_sd", 0.03), number(j, "scale", 1.0)};
  } else if (type == "tabulated") {
    keys({"grid", "values"});
    spec = Tabulated{numbers(j, "grid"), numbers(j, "values")};
  } else if (type == "harmonic_utilities") {
    keys({"tp_benefit", "fp_harm", "density", "scale"});
    if (!j.contains("tp_benefit") || !j.contains("fp_harm"))
      throw InputError(where + " needs 'tp_benefit' and 'fp_harm'");
    spec = HarmonicUtilities{parse_curve(j.at("tp_benefit"), "'tp_benefit'"), parse_curve(j.at("fp_harm"), "'fp_harm'"),
                             parse_density(j, "density"), number(j, "scale", 1.0)};
  } else if (type == "constant_tp_benefit" || type == "constant_fp_harm") {
    keys({"density", "scale"});
    auto density = parse_density(j, "density");
    if (!density) throw InputError(where + " needs a 'density'");
    if (type == "constant_tp_benefit")
      spec = ThresholdDensityConstantTpBenefit{density, number(j, "scale", 1.0)};
    else
      spec = ThresholdDensityConstantFpHarm{density, number(j, "scale", 1.0)};
  } else if (type == "mixture") {
    keys({"parts"});
    if (!j.contains("parts") || !j.at("parts").is_array()) throw InputError(where + " needs a 'parts' array");
    Mixture mix;
    for (const auto& part : j.at("parts")) mix.parts.push_back(parse_spec(part, false).spec);
    spec = std::move(mix);
  } else {
    throw InputError("unknown weight type '" + type + "'");
  }

  Parsed out{*spec, std::nullopt, type};
  if (top && j.contains("epsilon")) {
    const double eps = number(j, "epsilon", 0.0);
    if (!(eps > 0.0 && eps < 0.5)) throw InputError("'epsilon' must lie in (0, 0.5)");
    out.epsilon = eps;
  }
  if (j.contains("normalize")) {
    if (!j.at("normalize").is_boolean()) throw InputError("'normalize' must be true or false");
    if (j.at("normalize").get<bool>()) {
      QuadConfig quad;
      quad.epsilon = out.epsilon;
      out.spec = normalize(out.spec, quad);
    }
  }
  return out;
}

Json ci_or_null(const std::optional<ConfidenceInterval>& ci) { return ci ? to_json(*ci) : Json(nullptr); }

}  // namespace

ParsedWeight parse_weight(const Json& j) {
  try {
    auto p = parse_spec(j, true);
    return ParsedWeight{std::move(p.spec), p.epsilon, std::move(p.label)};
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid weight spec: ") + e.what());
  }
}

ParsedWeight parse_weight(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("weight spec is not valid JSON: ") + e.what());
  }
  return parse_weight(j);
}

Json to_json(const Tabulated& curve) { return Json{{"grid", curve.grid}, {"values", curve.values}}; }

Json to_json(const WeightSpec& spec) {
  Json j{{"type", spec.kind()}};
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          j["t_star"] = v.t_star;
          j["mass"] = v.mass;
        } else if constexpr (std::is_same_v<T, Uniform>) {
          j["level"] = v.level;
        } else if constexpr (std::is_same_v<T, Parabola>) {
          j["scale"] = v.scale;
        } else if constexpr (std::is_same_v<T, TruncatedGaussian>) {
          j["mean"] = v.mean;
          j["sd"] = v.sd;
          j["lower"] = v.lower;
          j["upper"] = v.upper;
          j["scale"] = v.scale;
        } else if constexpr (std::is_same_v<T, LogNormalDensity>) {
          j["variable_mean"] = v.variable_mean;
          j["variable_sd"] = v.variable_sd;
          j["scale"] = v.scale;
        } else if constexpr (std::is_same_v<T, Tabulated>) {
          j["grid"] = v.grid;
          j["values"] = v.values;
        } else if constexpr (std::is_same_v<T, HarmonicUtilities>) {
          j["tp_benefit"] = to_json(v.tp_benefit);
          j["fp_harm"] = to_json(v.fp_harm);
          if (v.density) j["density"] = to_json(*v.density);
          j["scale"] = v.scale;
        } else if constexpr (std::is_same_v<T, Mixture>) {
          Json parts = Json::array();
          for (const auto& p : v.parts) parts.push_back(to_json(p));
          j["parts"] = std::move(parts);
        } else {
          j["density"] = to_json(*v.density);
          j["scale"] = v.scale;
        }
      },
      spec.variant());
  return j;
}

Json to_json(const QuadConfig& cfg) {
  return Json{{"rel_tol", cfg.rel_tol},
              {"abs_tol", cfg.abs_tol},
              {"max_depth", cfg.max_depth},
              {"epsilon", cfg.epsilon ? Json(*cfg.epsilon) : Json(nullptr)}};
}

Json to_json(const ConfidenceInterval& ci) {
  return Json{{"lower", ci.lower}, {"upper", ci.upper}, {"level", ci.level}, {"method", ci.method}};
}

Json to_json(const CnbEstimate& est) {
  return Json{{"model", est.model},
              {"value", est.value},
              {"unit", to_string(est.unit)},
              {"weight", to_json(est.spec)},
              {"ci", ci_or_null(est.ci)}};
}

Json to_json(const DatasetSummary& s) {
  return Json{{"n", s.n}, {"total_weight", s.total_weight}, {"prevalence", s.prevalence}, {"models", s.models}};
}

Json to_json(const DecisionCurveTable& table) {
  Json cols = Json::array();
  for (const auto& c : table.columns)
    cols.push_back(Json{{"policy", c.policy}, {"net_benefit", c.net_benefit}, {"rescaled", c.rescaled}});
  return Json{{"prevalence", table.prevalence}, {"grid", table.grid}, {"columns", std::move(cols)}};
}

Json to_json(const LogisticModel& model) {
  return Json{{"feature_names", model.feature_names},
              {"intercept", model.intercept},
              {"coefficients", model.coefficients},
              {"ridge", model.ridge},
              {"iterations", model.iterations},
              {"last_change", model.last_change},
              {"penalized_log_likelihood", model.penalized_log_likelihood}};
}

LogisticModel logistic_model_from_json(const Json& j) {
  try {
    LogisticModel m;
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    m.intercept = j.at("intercept").get<double>();
    m.coefficients = j.at("coefficients").get<std::vector<double>>();
    m.ridge = j.value("ridge", 0.0);
    m.iterations = j.value("iterations", 0);
    m.last_change = j.value("last_change", 0.0);
    m.penalized_log_likelihood = j.value("penalized_log_likelihood", 0.0);
    if (m.feature_names.size() != m.coefficients.size())
      throw InputError("model has a different number of names and coefficients");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid model JSON: ") + e.what());
  }
}

Json to_json(const BootstrapResult& r) {
  return Json{{"statistic", r.statistic}, {"point", r.point},           {"lower", r.lower},
              {"upper", r.upper},         {"level", r.level},           {"replicates", r.replicates},
              {"failures", r.failures},   {"seed", r.seed},             {"method", "percentile-bootstrap"}};
}

Json to_json(const OptimismResult& r) {
  return Json{{"statistic", r.statistic},   {"apparent", r.apparent}, {"mean_optimism", r.mean_optimism},
              {"corrected", r.corrected},   {"replicates", r.replicates}, {"failures", r.failures},
              {"seed", r.seed}};
}

Json to_json(const oracle::VerifyReport& r) {
  return Json{{"mode", oracle::to_string(r.mode)},
              {"n", r.n},
              {"permutations", r.permutations},
              {"mean_utility_difference", r.mean_utility_difference},
              {"expected_nb_difference", r.expected_nb_difference},
              {"abs_error", r.abs_error},
              {"standard_error", r.standard_error},
              {"tolerance", r.tolerance},
              {"passed", r.passed}};
}

Json to_json(const oracle::Witness& w) {
  Json scores = Json::object();
  for (const auto& m : w.dataset.models()) {
    const auto s = w.dataset.scores(m);
    scores[m] = std::vector<double>(s.begin(), s.end());
  }
  const auto y = w.dataset.outcomes();
  return Json{{"outcomes", std::vector<int>(y.begin(), y.end())},
              {"scores", std::move(scores)},
              {"density", to_json(w.density)},
              {"aunb", {{"model1", w.aunb1}, {"model2", w.aunb2}, {"margin", w.aunb_margin()}}},
              {"aunb_alt", {{"model1", w.aunb_alt1}, {"model2", w.aunb_alt2}, {"margin", w.aunb_alt_margin()}}},
              {"search_phase", w.search_phase}};
}

Json to_json(const oracle::TwoGroupReport& r) {
  return Json{{"g1_share", r.g1_share},
              {"g2_share", r.g2_share},
              {"g1_weight", r.g1_weight},
              {"g2_weight", r.g2_weight},
              {"weight_ratio", r.weight_ratio},
              {"utility_difference", r.utility_difference},
              {"g1_contribution", r.g1_contribution},
              {"g2_contribution", r.g2_contribution},
              {"g2_fraction", r.g2_fraction}};
}

Json to_json(const DemoReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back(Json{{"component", row.component},
                        {"policy", row.policy},
                        {"unit", to_string(row.unit)},
                        {"apparent", row.apparent},
                        {"corrected", row.corrected ? Json(*row.corrected) : Json(nullptr)},
                        {"ci", ci_or_null(row.ci)}});
  const auto& c = r.config;
  return Json{{"config",
               {{"n", c.cohort.n},
                {"cohort_seed", c.cohort.seed},
                {"bootstrap", c.bootstrap},
                {"level", c.level},
                {"seed", c.seed},
                {"ridge", c.ridge}}},
              {"n", r.n},
              {"prevalence", r.prevalence},
              {"models", {{"compact", to_json(r.compact)}, {"full", to_json(r.full)}}},
              {"results", std::move(rows)}};
}

}  // namespace cnb
