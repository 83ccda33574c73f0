#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cnb/confusion.hpp"
#include "cnb/continuous.hpp"
#include "cnb/dataset.hpp"
#include "cnb/demo.hpp"
#include "cnb/error.hpp"
#include "cnb/json.hpp"
#include "cnb/net_benefit.hpp"
#include "cnb/oracle.hpp"
#include "cnb/resample.hpp"
#include "cnb/weighting.hpp"

namespace {

using cnb::Json;

constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitInternal = 4;

struct Options {
  std::string input;
  std::string schema;
  std::string weights;
  std::string grid;
  std::optional<double> epsilon;
  std::size_t bootstrap = 0;
  std::uint64_t seed = 20240101;
  double level = 0.95;
  unsigned threads = 0;
  std::string format = "text";
  std::string output;
  std::string models;
};

std::string fmt(double v, int digits) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(digits);
  ss << v;
  return ss.str();
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw cnb::InputError(what + ": '" + s + "' is not a number");
  }
}

// "0.15", "0.1,0.2,0.3" or "lo:hi:step".
std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) return cnb::default_threshold_grid();
  const auto parts = split(text, ':');
  if (parts.size() == 3) {
    const double lo = to_double(parts[0], "grid");
    const double hi = to_double(parts[1], "grid");
    const double step = to_double(parts[2], "grid");
    if (!(step > 0.0) || !(hi >= lo)) throw cnb::InputError("grid range needs lo <= hi and step > 0");
    std::vector<double> grid;
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (std::size_t k = 0; k < count; ++k) grid.push_back(lo + static_cast<double>(k) * step);
    return grid;
  }
  std::vector<double> grid;
  for (const auto& p : split(text, ',')) grid.push_back(to_double(p, "grid"));
  return grid;
}

cnb::EvaluationDataset load(const Options& o, cnb::CsvSchema& schema) {
  if (o.input.empty()) throw cnb::InputError("--input is required");
  if (!o.schema.empty()) {
    schema = cnb::parse_schema(o.schema);
  } else {
    std::ifstream in(o.input);
    if (!in) throw cnb::InputError("cannot open '" + o.input + "'");
    schema = cnb::infer_schema(cnb::read_csv_header(in));
  }
  return cnb::load_csv(o.input, schema);
}

cnb::ParsedWeight load_weights(const Options& o, const std::string& fallback) {
  std::string text = o.weights.empty() ? fallback : o.weights;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw cnb::InputError("--weights is empty");
  if (text[first] != '{') {
    std::ifstream in(text);
    if (!in) throw cnb::InputError("--weights: '" + text + "' is neither inline JSON nor a readable file");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  auto parsed = cnb::parse_weight(text);
  if (o.epsilon) parsed.epsilon = o.epsilon;
  return parsed;
}

cnb::QuadConfig quad_for(const cnb::ParsedWeight& w) {
  cnb::QuadConfig q;
  q.epsilon = w.epsilon;
  return q;
}

cnb::BootstrapConfig boot_config(const Options& o) {
  cnb::BootstrapConfig b;
  b.replicates = o.bootstrap;
  b.seed = o.seed;
  b.level = o.level;
  b.threads = o.threads;
  return b;
}

Json schema_json(const cnb::CsvSchema& s) {
  return Json{{"outcome", s.outcome}, {"scores", s.scores}, {"weight", s.weight ? Json(*s.weight) : Json(nullptr)}};
}

Json config_echo(const std::string& command, const Options& o) {
  Json j{{"command", command}, {"format", o.format}};
  if (!o.input.empty()) j["input"] = o.input;
  j["seed"] = o.seed;
  j["level"] = o.level;
  j["bootstrap"] = o.bootstrap;
  return j;
}

void emit(const Options& o, const std::string& text) {
  if (o.output.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(o.output);
  if (!out) throw cnb::InputError("cannot write '" + o.output + "'");
  out << text;
}

std::string ci_text(const std::optional<cnb::ConfidenceInterval>& ci, double scale, int digits) {
  if (!ci) return "";
  return " (" + fmt(ci->lower * scale, digits) + " to " + fmt(ci->upper * scale, digits) + ", " +
         fmt(ci->level * 100.0, 0) + "% CI)";
}

// curve ---------------------------------------------------------------------

int cmd_curve(const Options& o) {
  cnb::CsvSchema schema;
  const auto ds = load(o, schema);
  const auto grid = parse_grid(o.grid);
  const auto table = cnb::decision_curve(ds, ds.models(), grid);
  std::ostringstream out;
  if (o.format == "json") {
    Json j{{"config", config_echo("curve", o)}, {"curve", cnb::to_json(table)}};
    j["config"]["schema"] = schema_json(schema);
    j["config"]["grid"] = grid;
    out << j.dump(2) << "\n";
  } else if (o.format == "csv") {
    out << "threshold";
    for (const auto& c : table.columns) out << "," << c.policy;
    out << "\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
      out << cnb::Json(grid[k]).dump();
      for (const auto& c : table.columns) out << "," << cnb::Json(c.net_benefit[k]).dump();
      out << "\n";
    }
  } else {
    out << "Decision curve (net benefit per capita), prevalence " << fmt(table.prevalence, 4) << "\n";
    out << "threshold";
    for (const auto& c : table.columns) out << "  " << c.policy;
    out << "\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
      out << fmt(grid[k], 4);
      for (const auto& c : table.columns) out << "  " << fmt(c.net_benefit[k], 6);
      out << "\n";
    }
  }
  emit(o, out.str());
  return 0;
}

// cnb -----------------------------------------------------------------------

int cmd_cnb(const Options& o) {
  cnb::CsvSchema schema;
  const auto ds = load(o, schema);
  const auto weight = load_weights(o, "");
  const auto quad = quad_for(weight);
  std::vector<std::string> models = o.models.empty() ? ds.models() : split(o.models, ',');

  std::vector<cnb::CnbEstimate> estimates;
  std::vector<cnb::BootstrapResult> boots;
  for (const auto& m : models) {
    auto est = cnb::continuous_net_benefit(ds, m, weight.spec, quad);
    if (o.bootstrap > 0) {
      const cnb::Statistic stat{"cnb:" + m, [&weight, &quad, m](const cnb::EvaluationDataset& d) {
                                  return cnb::continuous_net_benefit(d, m, weight.spec, quad).value;
                                }};
      boots.push_back(cnb::bootstrap_ci(stat, ds, boot_config(o)));
      est.ci = cnb::ConfidenceInterval{boots.back().lower, boots.back().upper, o.level, "percentile-bootstrap"};
    }
    estimates.push_back(std::move(est));
  }
  const double pi = cnb::prevalence(ds);
  std::optional<double> treat_all;
  try {
    treat_all = cnb::treat_all_cnb(pi, weight.spec, quad);
  } catch (const cnb::NumericError&) {
  }

  std::ostringstream out;
  if (o.format == "json") {
    Json j{{"config", config_echo("cnb", o)}};
    j["config"]["schema"] = schema_json(schema);
    j["config"]["weights"] = cnb::to_json(weight.spec);
    j["config"]["weight_label"] = weight.label;
    j["config"]["quadrature"] = cnb::to_json(quad);
    Json rows = Json::array();
    for (std::size_t k = 0; k < estimates.size(); ++k) {
      Json r = cnb::to_json(estimates[k]);
      r.erase("weight");
      if (!boots.empty()) r["bootstrap"] = cnb::to_json(boots[k]);
      rows.push_back(std::move(r));
    }
    j["estimates"] = std::move(rows);
    j["prevalence"] = pi;
    j["treat_all"] = treat_all ? Json(*treat_all) : Json(nullptr);
    j["unit"] = estimates.empty() ? "" : cnb::to_string(estimates.front().unit);
    out << j.dump(2) << "\n";
  } else if (o.format == "csv") {
    out << "model,value,unit,ci_lower,ci_upper\n";
    for (const auto& e : estimates) {
      out << e.model << "," << Json(e.value).dump() << "," << cnb::to_string(e.unit) << ",";
      if (e.ci) out << Json(e.ci->lower).dump() << "," << Json(e.ci->upper).dump();
      else out << ",";
      out << "\n";
    }
    if (treat_all) out << "treat_all," << Json(*treat_all).dump() << "," << cnb::to_string(estimates.front().unit) << ",,\n";
  } else {
    out << "Continuous net benefit, weight " << weight.label << " ("
        << (estimates.empty() ? "" : cnb::to_string(estimates.front().unit)) << ")\n";
    for (const auto& e : estimates)
      out << "  " << e.model << ": " << fmt(e.value, 6) << " per capita = " << fmt(e.value * 100.0, 4)
          << " per 100 people" << ci_text(e.ci, 100.0, 4) << "\n";
    if (treat_all)
      out << "  treat_all: " << fmt(*treat_all, 6) << " per capita = " << fmt(*treat_all * 100.0, 4)
          << " per 100 people\n";
  }
  emit(o, out.str());
  return 0;
}

// compare -------------------------------------------------------------------

int cmd_compare(const Options& o) {
  cnb::CsvSchema schema;
  const auto ds = load(o, schema);
  std::vector<std::string> models = o.models.empty() ? ds.models() : split(o.models, ',');
  if (models.size() < 2) throw cnb::InputError("compare needs two models");
  const std::string m1 = models[0];
  const std::string m2 = models[1];
  const auto weight = load_weights(o, R"({"type": "uniform"})");
  const auto quad = quad_for(weight);
  const double diff = cnb::cnb_difference(ds, m1, m2, weight.spec, quad);
  std::optional<cnb::BootstrapResult> boot;
  if (o.bootstrap > 0) {
    const cnb::Statistic stat{"cnb_difference", [&](const cnb::EvaluationDataset& d) {
                                return cnb::cnb_difference(d, m1, m2, weight.spec, quad);
                              }};
    boot = cnb::bootstrap_ci(stat, ds, boot_config(o));
  }
  const bool uniform = weight.spec.get_if<cnb::Uniform>() != nullptr;
  const auto* parabola = weight.spec.get_if<cnb::Parabola>();
  std::string note;
  if (uniform) note = "equals per-capita log-likelihood difference";
  if (parabola) note = "equals half the Brier score difference (model2 minus model1)";

  std::ostringstream out;
  if (o.format == "json") {
    Json j{{"config", config_echo("compare", o)}};
    j["config"]["schema"] = schema_json(schema);
    j["config"]["weights"] = cnb::to_json(weight.spec);
    j["config"]["quadrature"] = cnb::to_json(quad);
    j["model1"] = m1;
    j["model2"] = m2;
    j["difference"] = diff;
    j["ci"] = boot ? cnb::to_json(*boot) : Json(nullptr);
    j["note"] = note.empty() ? Json(nullptr) : Json(note);
    out << j.dump(2) << "\n";
  } else if (o.format == "csv") {
    out << "model1,model2,difference,ci_lower,ci_upper\n";
    out << m1 << "," << m2 << "," << Json(diff).dump() << ",";
    if (boot) out << Json(boot->lower).dump() << "," << Json(boot->upper).dump();
    else out << ",";
    out << "\n";
  } else {
    std::optional<cnb::ConfidenceInterval> ci;
    if (boot) ci = cnb::ConfidenceInterval{boot->lower, boot->upper, boot->level, "percentile-bootstrap"};
    out << "CNB(" << m1 << ") - CNB(" << m2 << "), weight " << weight.label << ": " << fmt(diff, 6)
        << " per capita = " << fmt(diff * 100.0, 4) << " per 100 people" << ci_text(ci, 100.0, 4) << "\n";
    if (!note.empty()) out << "  note: " << note << "\n";
  }
  emit(o, out.str());
  return 0;
}

// oracle --------------------------------------------------------------------

struct OracleOptions {
  std::size_t n = 6;
  std::string mode = "auto";
  std::size_t permutations = 200;
  bool witness = false;
  bool two_group = false;
  double g1_scale = 0.01;
  double g2_scale = 100.0;
};

int cmd_oracle(const Options& o, const OracleOptions& oo) {
  cnb::oracle::GeneratorConfig gen;
  gen.n = oo.n;
  gen.seed = o.seed;
  const auto pop = cnb::oracle::generate_population(gen);
  cnb::oracle::VerifyOptions vo;
  vo.mode = oo.mode == "monte-carlo" || (oo.mode == "auto" && oo.n > 8) ? cnb::oracle::VerifyMode::kMonteCarlo
                                                                         : cnb::oracle::VerifyMode::kExhaustive;
  vo.permutations = oo.permutations;
  vo.seed = o.seed;
  const auto report = cnb::oracle::verify_expected_nb(pop, "model1", "model2", vo);

  std::optional<cnb::oracle::Witness> witness;
  bool witness_searched = false;
  if (oo.witness) {
    cnb::oracle::WitnessSearchConfig wc;
    wc.seed = o.seed;
    witness = cnb::oracle::aunb_disagreement_witness(wc);
    witness_searched = true;
  }
  std::optional<cnb::oracle::TwoGroupReport> groups;
  if (oo.two_group) {
    cnb::oracle::TwoGroupConfig tc;
    tc.g1_scale = oo.g1_scale;
    tc.g2_scale = oo.g2_scale;
    groups = cnb::oracle::analyze_two_groups(cnb::oracle::two_group_scenario(tc), "model1", "model2");
  }
  const bool passed = report.passed && (!witness_searched || witness.has_value());

  std::ostringstream out;
  if (o.format == "json" || o.format == "csv") {
    Json j{{"config", config_echo("oracle", o)}};
    j["config"]["n"] = oo.n;
    j["config"]["mode"] = cnb::oracle::to_string(vo.mode);
    j["config"]["permutations"] = oo.permutations;
    j["expected_nb"] = cnb::to_json(report);
    if (witness_searched) j["witness"] = witness ? cnb::to_json(*witness) : Json("not found");
    if (groups) {
      j["two_group"] = cnb::to_json(*groups);
      j["two_group"]["g1_scale"] = oo.g1_scale;
      j["two_group"]["g2_scale"] = oo.g2_scale;
    }
    j["passed"] = passed;
    out << j.dump(2) << "\n";
  } else {
    out << "Expected net benefit oracle (" << cnb::oracle::to_string(report.mode) << ", n=" << report.n << ", "
        << report.permutations << " permutations)\n";
    out << "  mean utility difference   " << fmt(report.mean_utility_difference, 12) << "\n";
    out << "  expected NB difference    " << fmt(report.expected_nb_difference, 12) << "\n";
    out << "  |difference|              " << report.abs_error << " (bound " << report.tolerance << ")";
    if (report.mode == cnb::oracle::VerifyMode::kMonteCarlo) out << ", standard error " << report.standard_error;
    out << "\n  " << (report.passed ? "PASS" : "FAIL") << "\n";
    if (witness_searched) {
      if (witness) {
        out << "AUNB / AUNB_alt disagreement witness (" << witness->search_phase << " search)\n";
        out << "  outcomes ";
        for (int y : witness->dataset.outcomes()) out << y << " ";
        out << "\n";
        for (const auto& m : witness->dataset.models()) {
          out << "  " << m << " scores ";
          for (double s : witness->dataset.scores(m)) out << s << " ";
          out << "\n";
        }
        out << "  density: mass " << witness->mix << " at " << witness->t1 << ", mass " << 1.0 - witness->mix
            << " at " << witness->t2 << "\n";
        out << "  AUNB     model1 " << fmt(witness->aunb1, 6) << "  model2 " << fmt(witness->aunb2, 6)
            << "  margin " << fmt(witness->aunb_margin(), 6) << "\n";
        out << "  AUNB_alt model1 " << fmt(witness->aunb_alt1, 6) << "  model2 " << fmt(witness->aunb_alt2, 6)
            << "  margin " << fmt(witness->aunb_alt_margin(), 6) << "\n";
      } else {
        out << "AUNB / AUNB_alt disagreement witness: not found within the search budget\n";
      }
    }
    if (groups) {
      out << "Two-group scenario (G1 t*=10%, scale " << oo.g1_scale << "; G2 t*=11%, scale " << oo.g2_scale << ")\n";
      out << "  group  share   weight\n";
      out << "  G1     " << fmt(groups->g1_share, 3) << "  " << groups->g1_weight << "\n";
      out << "  G2     " << fmt(groups->g2_share, 3) << "  " << groups->g2_weight << "\n";
      out << "  weight ratio G2/G1 " << groups->weight_ratio << "\n";
      out << "  utility difference " << groups->utility_difference << ", G2 share of it "
          << fmt(groups->g2_fraction * 100.0, 3) << "%\n";
    }
  }
  emit(o, out.str());
  return passed ? 0 : kExitNumeric;
}

// demo ----------------------------------------------------------------------

struct DemoOptions {
  std::size_t n = 4000;
  std::uint64_t cohort_seed = 1;
  std::optional<double> effect_ratio;
};

int cmd_demo(const Options& o, const DemoOptions& d) {
  cnb::DemoConfig cfg;
  cfg.cohort.n = d.n;
  cfg.cohort.seed = d.cohort_seed;
  cfg.bootstrap = o.bootstrap;
  cfg.seed = o.seed;
  cfg.level = o.level;
  cfg.threads = o.threads;
  const auto rep = cnb::run_demo(cfg);

  std::vector<cnb::DemoRow> combined;
  if (d.effect_ratio) {
    for (const std::string policy : {"compact", "full", "treat_all"}) {
      const auto& s = rep.find("statins", policy);
      const auto& l = rep.find("lifestyle", policy);
      cnb::DemoRow row{"statins+lifestyle", policy, cnb::CnbUnit::kCombinedTruePositives,
                       cnb::combine_decisions(s.apparent, l.apparent, *d.effect_ratio), std::nullopt, std::nullopt};
      if (s.corrected && l.corrected)
        row.corrected = cnb::combine_decisions(*s.corrected, *l.corrected, *d.effect_ratio);
      combined.push_back(row);
    }
  }

  std::ostringstream out;
  if (o.format == "json") {
    Json j = cnb::to_json(rep);
    j["config"]["command"] = "demo";
    if (d.effect_ratio) {
      j["config"]["effect_ratio"] = *d.effect_ratio;
      Json rows = Json::array();
      for (const auto& r : combined)
        rows.push_back(Json{{"component", r.component},
                            {"policy", r.policy},
                            {"apparent", r.apparent},
                            {"corrected", r.corrected ? Json(*r.corrected) : Json(nullptr)}});
      j["combined"] = std::move(rows);
    }
    out << j.dump(2) << "\n";
  } else if (o.format == "csv") {
    out << "component,policy,unit,apparent,corrected,ci_lower,ci_upper\n";
    auto line = [&](const cnb::DemoRow& r) {
      out << r.component << "," << r.policy << "," << cnb::to_string(r.unit) << "," << Json(r.apparent).dump() << ",";
      if (r.corrected) out << Json(*r.corrected).dump();
      out << ",";
      if (r.ci) out << Json(r.ci->lower).dump() << "," << Json(r.ci->upper).dump();
      else out << ",";
      out << "\n";
    };
    for (const auto& r : rep.rows) line(r);
    for (const auto& r : combined) line(r);
  } else {
    out << "Synthetic cohort: n=" << rep.n << ", prevalence " << fmt(rep.prevalence * 100.0, 1) << "%\n";
    out << "Compact model: " << rep.compact.coefficients.size() << " features; full model: "
        << rep.full.coefficients.size() << " features\n";
    out << "Values per 100 people";
    if (rep.config.bootstrap > 0) out << " (optimism-corrected from " << rep.config.bootstrap << " bootstraps)";
    out << "\n";
    const std::vector<std::pair<std::string, std::string>> titles = {
        {"statins", "Statins: net benefit at the 10% threshold"},
        {"lifestyle", "Lifestyle: continuous net benefit, half-Gaussian weight below 10%"},
        {"expected_nb", "Expected net benefit, log-normal threshold density (averaged true positives)"}};
    for (const auto& [comp, title] : titles) {
      out << "\n" << title << "\n";
      for (const auto& r : rep.rows) {
        if (r.component != comp) continue;
        out << "  " << r.policy << std::string(r.policy.size() < 13 ? 13 - r.policy.size() : 1, ' ')
            << fmt(r.apparent * 100.0, 2);
        if (r.corrected) out << "  corrected " << fmt(*r.corrected * 100.0, 2);
        out << ci_text(r.ci, 100.0, 2) << "\n";
      }
    }
    if (d.effect_ratio) {
      out << "\nStatins plus lifestyle, effect ratio " << *d.effect_ratio << "\n";
      for (const auto& r : combined) {
        out << "  " << r.policy << std::string(13 - r.policy.size(), ' ') << fmt(r.apparent * 100.0, 2);
        if (r.corrected) out << "  corrected " << fmt(*r.corrected * 100.0, 2);
        out << "\n";
      }
    }
  }
  emit(o, out.str());
  return 0;
}

void add_common(CLI::App* sub, Options& o, bool data) {
  if (data) {
    sub->add_option("--input", o.input, "CSV file with outcome, score and optional weight columns")->required();
    sub->add_option("--schema", o.schema, "outcome=COL,scores=COL1:COL2,weight=COL");
  }
  sub->add_option("--format", o.format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));
  sub->add_option("--output", o.output, "write to this file instead of standard output");
}

void add_weights(CLI::App* sub, Options& o) {
  sub->add_option("--weights", o.weights, "weight spec: inline JSON or a JSON file");
  sub->add_option("--epsilon", o.epsilon, "restrict continuous weight to [eps, 1-eps]");
}

void add_bootstrap(CLI::App* sub, Options& o, std::size_t default_b) {
  o.bootstrap = default_b;
  sub->add_option("--bootstrap", o.bootstrap, "bootstrap replicates (0 disables)")->capture_default_str();
  sub->add_option("--seed", o.seed, "random seed")->capture_default_str();
  sub->add_option("--level", o.level, "confidence level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  sub->add_option("--threads", o.threads, "worker threads (0: all cores); results do not depend on it");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision-curve, net benefit and continuous net benefit evaluation of risk models"};
  app.require_subcommand(1);
  Options curve_o, cnb_o, compare_o, oracle_o, demo_o;
  OracleOptions oo;
  DemoOptions dm;

  auto* curve = app.add_subcommand("curve", "decision curves for every model plus treat-all and treat-none");
  add_common(curve, curve_o, true);
  curve->add_option("--grid", curve_o.grid, "thresholds: 0.15, 0.1,0.2 or lo:hi:step (default 0.01:0.99:0.01)");

  auto* cnbc = app.add_subcommand("cnb", "continuous net benefit of each model under a weight spec");
  add_common(cnbc, cnb_o, true);
  add_weights(cnbc, cnb_o);
  cnbc->get_option("--weights")->required();
  add_bootstrap(cnbc, cnb_o, 0);
  cnbc->add_option("--models", cnb_o.models, "comma-separated subset of models");

  auto* compare = app.add_subcommand("compare", "difference in continuous net benefit between two models");
  add_common(compare, compare_o, true);
  add_weights(compare, compare_o);
  add_bootstrap(compare, compare_o, 0);
  compare->add_option("--models", compare_o.models, "model1,model2 (default: first two score columns)");

  auto* orc = app.add_subcommand("oracle", "brute-force utility checks on synthetic populations");
  add_common(orc, oracle_o, false);
  orc->add_option("--n", oo.n, "population size")->capture_default_str();
  orc->add_option("--mode", oo.mode, "exhaustive, monte-carlo or auto")
      ->check(CLI::IsMember({"auto", "exhaustive", "monte-carlo"}));
  orc->add_option("--permutations", oo.permutations, "Monte-Carlo permutation draws")->capture_default_str();
  orc->add_option("--seed", oracle_o.seed, "random seed")->capture_default_str();
  orc->add_flag("--witness", oo.witness, "search for an AUNB / AUNB_alt disagreement");
  orc->add_flag("--two-group", oo.two_group, "two-group weight concentration scenario");
  orc->add_option("--g1-scale", oo.g1_scale, "utility scale of group G1")->capture_default_str();
  orc->add_option("--g2-scale", oo.g2_scale, "utility scale of group G2")->capture_default_str();

  auto* demo = app.add_subcommand("demo", "synthetic end-to-end pipeline with compact and full models");
  add_common(demo, demo_o, false);
  add_bootstrap(demo, demo_o, 200);
  demo->add_option("--n", dm.n, "cohort size")->capture_default_str();
  demo->add_option("--cohort-seed", dm.cohort_seed, "cohort generator seed")->capture_default_str();
  demo->add_option("--effect-ratio", dm.effect_ratio,
                   "also report statins + ratio * lifestyle (benefit of a lifestyle true positive relative to a "
                   "statin true positive)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (*curve) return cmd_curve(curve_o);
    if (*cnbc) return cmd_cnb(cnb_o);
    if (*compare) return cmd_compare(compare_o);
    if (*orc) return cmd_oracle(oracle_o, oo);
    if (*demo) return cmd_demo(demo_o, dm);
  } catch (const cnb::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const cnb::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const cnb::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
