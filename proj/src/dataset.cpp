#include "cnb/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "cnb/error.hpp"

namespace cnb {

EvaluationDataset::EvaluationDataset(std::vector<std::string> models,
                                     std::vector<std::vector<double>> scores,
                                     std::vector<int> outcomes, std::vector<double> weights)
    : models_(std::move(models)),
      scores_(std::move(scores)),
      outcomes_(std::move(outcomes)),
      weights_(std::move(weights)) {
  const std::size_t n = outcomes_.size();
  if (n == 0) throw InputError("dataset has no subjects");
  if (models_.size() != scores_.size())
    throw InputError("model names and score columns differ in count");
  for (std::size_t m = 0; m < models_.size(); ++m) {
    if (models_[m].empty()) throw InputError("empty model id");
    for (std::size_t k = 0; k < m; ++k)
      if (models_[k] == models_[m]) throw InputError("duplicate model id '" + models_[m] + "'");
    if (scores_[m].size() != n)
      throw InputError("model '" + models_[m] + "' does not score every subject");
    for (std::size_t i = 0; i < n; ++i) {
      const double f = scores_[m][i];
      if (!(f >= 0.0 && f <= 1.0))
        throw DataError("score outside [0,1]", i + 1, models_[m]);
    }
  }
  if (weights_.empty()) weights_.assign(n, 1.0);
  if (weights_.size() != n) throw InputError("weight column length differs from outcomes");
  for (std::size_t i = 0; i < n; ++i) {
    if (outcomes_[i] != 0 && outcomes_[i] != 1) throw DataError("outcome is not 0 or 1", i + 1, std::nullopt);
    if (!std::isfinite(weights_[i]) || weights_[i] < 0.0)
      throw DataError("weight must be finite and nonnegative", i + 1, std::nullopt);
    total_weight_ += weights_[i];
  }
  if (!(total_weight_ > 0.0)) throw InputError("total weight must be positive");
}

bool EvaluationDataset::has_model(const std::string& model) const {
  return std::find(models_.begin(), models_.end(), model) != models_.end();
}

std::size_t EvaluationDataset::model_index(const std::string& model) const {
  auto it = std::find(models_.begin(), models_.end(), model);
  if (it == models_.end()) throw InputError("unknown model id '" + model + "'");
  return static_cast<std::size_t>(it - models_.begin());
}

std::span<const double> EvaluationDataset::scores(const std::string& model) const {
  return scores_[model_index(model)];
}

EvaluationDataset EvaluationDataset::select_rows(std::span<const std::size_t> rows) const {
  std::vector<std::vector<double>> scores(models_.size());
  for (auto& s : scores) s.reserve(rows.size());
  std::vector<int> outcomes;
  std::vector<double> weights;
  outcomes.reserve(rows.size());
  weights.reserve(rows.size());
  for (std::size_t r : rows) {
    if (r >= size()) throw InputError("row index out of range");
    for (std::size_t m = 0; m < models_.size(); ++m) scores[m].push_back(scores_[m][r]);
    outcomes.push_back(outcomes_[r]);
    weights.push_back(weights_[r]);
  }
  return EvaluationDataset(models_, std::move(scores), std::move(outcomes), std::move(weights));
}

EvaluationDataset EvaluationDataset::with_single_model(const std::string& name,
                                                       std::vector<double> scores) const {
  return EvaluationDataset({name}, {std::move(scores)}, outcomes_, weights_);
}

double prevalence(const EvaluationDataset& ds) {
  double events = 0.0;
  const auto y = ds.outcomes();
  const auto w = ds.weights();
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (y[i] == 1) events += w[i];
  return events / ds.total_weight();
}

DatasetSummary summarize(const EvaluationDataset& ds) {
  return DatasetSummary{ds.size(), ds.total_weight(), prevalence(ds), ds.models()};
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// RFC-4180 style split of one line; quoted fields may contain commas and "".
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? field : trim(field));
      field.clear();
      was_quoted = false;
    } else {
      field += c;
    }
  }
  fields.push_back(was_quoted ? field : trim(field));
  return fields;
}

double parse_number(const std::string& cell, std::size_t row, const std::string& column) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(value))
    throw DataError("non-numeric cell '" + cell + "'", row, column);
  return value;
}

std::vector<std::string> read_header(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
        static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF)
      line.erase(0, 3);
    if (!trim(line).empty()) return split_csv_line(line);
  }
  throw DataError("empty file: header row required", std::nullopt, std::nullopt);
}

}  // namespace

std::vector<std::string> read_csv_header(std::istream& in) { return read_header(in); }

CsvSchema infer_schema(const std::vector<std::string>& header) {
  CsvSchema schema;
  bool have_outcome = false;
  for (const auto& col : header) {
    if (col == "outcome")
      have_outcome = true;
    else if (col == "weight")
      schema.weight = col;
    else
      schema.scores.push_back(col);
  }
  if (!have_outcome) throw DataError("missing column", std::nullopt, std::string("outcome"));
  schema.outcome = "outcome";
  if (schema.scores.empty()) throw InputError("no score columns besides outcome and weight");
  return schema;
}

CsvSchema parse_schema(const std::string& text) {
  CsvSchema schema;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("schema entry '" + item + "' is not key=value");
    const std::string key = trim(std::string_view(item).substr(0, eq));
    const std::string value = trim(std::string_view(item).substr(eq + 1));
    if (value.empty()) throw InputError("schema entry '" + key + "' has no column");
    if (key == "outcome") {
      schema.outcome = value;
    } else if (key == "weight") {
      schema.weight = value;
    } else if (key == "scores") {
      std::stringstream cols(value);
      std::string col;
      while (std::getline(cols, col, ':'))
        if (!trim(col).empty()) schema.scores.push_back(trim(col));
    } else {
      throw InputError("unknown schema key '" + key + "' (expected outcome, scores, weight)");
    }
  }
  if (schema.outcome.empty()) throw InputError("schema does not name an outcome column");
  if (schema.scores.empty()) throw InputError("schema names no score column");
  return schema;
}

EvaluationDataset read_csv(std::istream& in, const CsvSchema& schema) {
  if (schema.outcome.empty()) throw InputError("schema does not name an outcome column");
  if (schema.scores.empty()) throw InputError("schema names no score column");

  const auto header = read_header(in);
  std::string line;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t c = 0; c < header.size(); ++c) index.emplace(header[c], c);
  auto column = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) throw DataError("missing column", std::nullopt, name);
    return it->second;
  };

  const std::size_t outcome_col = column(schema.outcome);
  std::vector<std::size_t> score_cols;
  for (const auto& s : schema.scores) score_cols.push_back(column(s));
  std::optional<std::size_t> weight_col;
  if (schema.weight) weight_col = column(*schema.weight);

  std::vector<std::vector<double>> scores(score_cols.size());
  std::vector<int> outcomes;
  std::vector<double> weights;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw DataError("expected " + std::to_string(header.size()) + " cells, found " +
                          std::to_string(cells.size()),
                      row, std::nullopt);

    const double y = parse_number(cells[outcome_col], row, schema.outcome);
    if (y != 0.0 && y != 1.0) throw DataError("outcome must be 0 or 1", row, schema.outcome);
    outcomes.push_back(static_cast<int>(y));

    for (std::size_t m = 0; m < score_cols.size(); ++m) {
      const double f = parse_number(cells[score_cols[m]], row, schema.scores[m]);
      if (f < 0.0 || f > 1.0) throw DataError("score outside [0,1]", row, schema.scores[m]);
      scores[m].push_back(f);
    }
    if (weight_col) {
      const double w = parse_number(cells[*weight_col], row, *schema.weight);
      if (w < 0.0) throw DataError("negative weight", row, *schema.weight);
      weights.push_back(w);
    }
  }
  if (row == 0) throw DataError("empty file: no data rows", std::nullopt, std::nullopt);
  return EvaluationDataset(schema.scores, std::move(scores), std::move(outcomes), std::move(weights));
}

EvaluationDataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return read_csv(in, schema);
}

namespace {

std::string shortest(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos && trim(s) == s) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

CsvSchema default_schema(const EvaluationDataset& ds) {
  return CsvSchema{"outcome", ds.models(), std::string("weight")};
}

void write_csv(std::ostream& out, const EvaluationDataset& ds) {
  out << "outcome";
  for (const auto& m : ds.models()) out << ',' << quote_if_needed(m);
  out << ",weight\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out << ds.outcomes()[i];
    for (std::size_t m = 0; m < ds.models().size(); ++m) out << ',' << shortest(ds.scores(m)[i]);
    out << ',' << shortest(ds.weights()[i]) << '\n';
  }
}

}  // namespace cnb
