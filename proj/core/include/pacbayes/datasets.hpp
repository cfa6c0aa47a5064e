#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace pacbayes {

/// Features (n x d) with binary labels, plus optional 5-fold assignment.
struct Dataset {
  Eigen::MatrixXd features;
  Eigen::VectorXd labels;  // entries in {0, 1}
  std::string name;
  std::optional<std::vector<int>> fold_assignments;

  [[nodiscard]] std::size_t size() const noexcept {
    return static_cast<std::size_t>(features.rows());
  }
  [[nodiscard]] std::size_t dim() const noexcept {
    return static_cast<std::size_t>(features.cols());
  }

  /// Rows `indices` in the given order. Fold assignments are not carried over.
  [[nodiscard]] Dataset subset(const std::vector<std::size_t>& indices) const;
};

struct PiDigits {};

struct SyntheticSpec {
  std::size_t d = 10;
  std::size_t n = 1000;
  double keep_prob = 0.9;
  std::uint64_t seed = 0;
  std::variant<PiDigits, Eigen::VectorXd> bayes_act = PiDigits{};
};

/// First d decimal digits of pi, d <= 50.
Eigen::VectorXd pi_digits(std::size_t d);

/// The data-generating separator of a synthetic spec.
Eigen::VectorXd bayes_act_of(const SyntheticSpec& spec);

/// X ~ N(0, I_d), eps ~ Bernoulli(keep_prob), Y = 1{h*^T X > 0} * eps.
Dataset gen_synthetic(const SyntheticSpec& spec);

struct CsvOptions {
  std::string label_column;
  // Columns to one-hot encode in addition to any non-numeric column.
  std::vector<std::string> categorical_columns;
};

/// Describes how a CSV was turned into a Dataset.
struct CsvSummary {
  std::size_t rows_read = 0;
  std::size_t rows_dropped = 0;
  std::vector<std::string> feature_names;
  std::vector<std::string> categorical_columns;
  std::string negative_label;  // raw label mapped to 0
  std::string positive_label;  // raw label mapped to 1
};

/// Loads a comma-separated file with a header row. Rows with a missing cell
/// (empty or "?") are dropped, categorical columns are one-hot encoded with
/// levels in lexicographic order, and numeric columns are min-max scaled to
/// [-1, 1] (a constant column maps to 0). Labels must take at most two values;
/// "0"/"1" are kept, otherwise the smaller value maps to 0.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options,
                 CsvSummary* summary = nullptr);

/// Writes features and labels as CSV with header x1..xd,y.
void write_csv(const Dataset& data, const std::filesystem::path& path);

/// Random permutation split into k folds of near-equal size.
Dataset make_folds(Dataset data, std::size_t k, std::uint64_t seed);

/// Training rows (all folds but `fold`) and test rows (fold `fold`).
std::pair<Dataset, Dataset> fold_split(const Dataset& data, int fold);

struct HalfSplit {
  Dataset first;
  Dataset second;
  std::size_t m = 0;
  bool dropped_last_row = false;
};

/// First m rows and the next m rows, in stored order. With odd n the last row
/// is dropped and a warning is logged.
HalfSplit split_half(const Dataset& data);

}  // namespace pacbayes
