#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cnb {

/// Column mapping for CSV ingestion.
struct CsvSchema {
  std::string outcome;
  std::vector<std::string> scores;
  std::optional<std::string> weight;  // absent: every row gets weight 1
};

/// Per-subject risk scores for one or more models, a binary outcome and a
/// nonnegative sample weight. Immutable once constructed; the constructor
/// enforces every invariant (scores in [0,1], outcomes in {0,1}, finite
/// nonnegative weights with positive total).
class EvaluationDataset {
 public:
  /// `scores[m][i]` is the score of subject i under model m. Empty `weights`
  /// means unit weights.
  EvaluationDataset(std::vector<std::string> models, std::vector<std::vector<double>> scores,
                    std::vector<int> outcomes, std::vector<double> weights = {});

  std::size_t size() const { return outcomes_.size(); }
  const std::vector<std::string>& models() const { return models_; }

  bool has_model(const std::string& model) const;
  /// Throws InputError for an unknown model id.
  std::size_t model_index(const std::string& model) const;

  std::span<const double> scores(const std::string& model) const;
  std::span<const double> scores(std::size_t model_index) const { return scores_.at(model_index); }
  std::span<const int> outcomes() const { return outcomes_; }
  std::span<const double> weights() const { return weights_; }
  double total_weight() const { return total_weight_; }

  /// New dataset made of the given rows (repetition allowed), weights carried along.
  EvaluationDataset select_rows(std::span<const std::size_t> rows) const;

  /// Same subjects with a single model column.
  EvaluationDataset with_single_model(const std::string& name, std::vector<double> scores) const;

 private:
  std::vector<std::string> models_;
  std::vector<std::vector<double>> scores_;
  std::vector<int> outcomes_;
  std::vector<double> weights_;
  double total_weight_ = 0.0;
};

struct DatasetSummary {
  std::size_t n = 0;
  double total_weight = 0.0;
  double prevalence = 0.0;
  std::vector<std::string> models;
};

/// Weighted prevalence and bookkeeping.
DatasetSummary summarize(const EvaluationDataset& ds);

/// Weighted outcome prevalence: sum(w*y) / sum(w).
double prevalence(const EvaluationDataset& ds);

/// Column names of the first nonblank line.
std::vector<std::string> read_csv_header(std::istream& in);

/// outcome from the "outcome" column, weight from "weight" when present,
/// every other column a model score.
CsvSchema infer_schema(const std::vector<std::string>& header);

/// "outcome=COL,scores=A:B,weight=COL"; weight is optional.
CsvSchema parse_schema(const std::string& text);

/// Parses comma-separated text with a header row. Errors carry the 1-based
/// data row and the column name.
EvaluationDataset read_csv(std::istream& in, const CsvSchema& schema);
EvaluationDataset load_csv(const std::filesystem::path& path, const CsvSchema& schema);

/// Writes `outcome,<models...>,weight` with shortest round-trip formatting,
/// so that reading the output back reproduces the dataset bit for bit.
void write_csv(std::ostream& out, const EvaluationDataset& ds);

/// Schema matching the layout produced by write_csv.
CsvSchema default_schema(const EvaluationDataset& ds);

}  // namespace cnb
