#include "pacbayes/datasets.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

#include "pacbayes/errors.hpp"

namespace pacbayes {
namespace {

constexpr std::array<int, 50> kPiDigits = {3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8, 9, 7, 9, 3, 2,
                                           3, 8, 4, 6, 2, 6, 4, 3, 3, 8, 3, 2, 7, 9, 5, 0, 2,
                                           8, 8, 4, 1, 9, 7, 1, 6, 9, 3, 9, 9, 3, 7, 5, 1};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

// Splits one CSV record. Double quotes group commas and "" escapes a quote.
std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell.push_back('"');
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cell.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(trim(cell));
      cell.clear();
    } else {
      cell.push_back(ch);
    }
  }
  cells.push_back(trim(cell));
  return cells;
}

std::optional<double> parse_number(const std::string& s) {
  double value = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (!s.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

bool is_missing(const std::string& cell) { return cell.empty() || cell == "?"; }

}  // namespace

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  Dataset out;
  out.name = name;
  out.features.resize(static_cast<Eigen::Index>(indices.size()), features.cols());
  out.labels.resize(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const auto src = static_cast<Eigen::Index>(indices[r]);
    if (src >= features.rows()) throw DomainError("Dataset::subset: row out of range");
    out.features.row(static_cast<Eigen::Index>(r)) = features.row(src);
    out.labels[static_cast<Eigen::Index>(r)] = labels[src];
  }
  return out;
}

Eigen::VectorXd pi_digits(std::size_t d) {
  if (d == 0 || d > kPiDigits.size()) {
    throw DomainError("pi_digits: dimension must lie in [1, 50]");
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) out[static_cast<Eigen::Index>(i)] = kPiDigits[i];
  return out;
}

Eigen::VectorXd bayes_act_of(const SyntheticSpec& spec) {
  if (std::holds_alternative<PiDigits>(spec.bayes_act)) return pi_digits(spec.d);
  const auto& v = std::get<Eigen::VectorXd>(spec.bayes_act);
  if (static_cast<std::size_t>(v.size()) != spec.d) {
    throw DomainError("SyntheticSpec: bayes_act has the wrong dimension");
  }
  return v;
}

Dataset gen_synthetic(const SyntheticSpec& spec) {
  if (spec.d == 0 || spec.n == 0) throw DomainError("gen_synthetic: n and d must be positive");
  if (!(spec.keep_prob >= 0.0 && spec.keep_prob <= 1.0)) {
    throw DomainError("gen_synthetic: keep_prob must lie in [0, 1]");
  }
  const Eigen::VectorXd h_star = bayes_act_of(spec);
  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto d = static_cast<Eigen::Index>(spec.d);

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution keep(spec.keep_prob);

  Dataset out;
  out.name = "synthetic-d" + std::to_string(spec.d);
  out.features.resize(n, d);
  out.labels.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) out.features(i, j) = normal(rng);
    const bool positive = out.features.row(i).dot(h_star) > 0.0;
    const bool kept = keep(rng);
    out.labels[i] = (positive && kept) ? 1.0 : 0.0;
  }
  return out;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options,
                 CsvSummary* summary) {
  std::ifstream in(path);
  if (!in) throw DataError("load_csv: cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw DataError("load_csv: empty file " + path.string());
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const std::vector<std::string> header = split_record(line);

  const auto label_it = std::find(header.begin(), header.end(), options.label_column);
  if (label_it == header.end()) {
    throw DataError("load_csv: missing label column '" + options.label_column + "'");
  }
  const auto label_col = static_cast<std::size_t>(label_it - header.begin());
  for (const auto& name : options.categorical_columns) {
    if (std::find(header.begin(), header.end(), name) == header.end()) {
      throw DataError("load_csv: unknown categorical column '" + name + "'");
    }
  }

  CsvSummary info;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto cells = split_record(line);
    ++info.rows_read;
    if (cells.size() != header.size()) {
      throw DataError("load_csv: row " + std::to_string(info.rows_read) + " has " +
                      std::to_string(cells.size()) + " cells, header has " +
                      std::to_string(header.size()));
    }
    if (std::any_of(cells.begin(), cells.end(), is_missing)) {
      ++info.rows_dropped;
      continue;
    }
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw DataError("load_csv: no complete rows in " + path.string());

  // Labels.
  std::set<std::string> raw_labels;
  for (const auto& r : rows) raw_labels.insert(r[label_col]);
  if (raw_labels.size() > 2) throw DataError("load_csv: label column is not binary");
  std::map<std::string, double> label_map;
  if (std::all_of(raw_labels.begin(), raw_labels.end(),
                  [](const std::string& s) { return s == "0" || s == "1"; })) {
    for (const auto& s : raw_labels) label_map[s] = s == "1" ? 1.0 : 0.0;
    info.negative_label = "0";
    info.positive_label = "1";
  } else if (raw_labels.size() == 2) {
    std::vector<std::string> levels(raw_labels.begin(), raw_labels.end());
    const auto a = parse_number(levels[0]);
    const auto b = parse_number(levels[1]);
    if (a && b && *b < *a) std::swap(levels[0], levels[1]);
    label_map[levels[0]] = 0.0;
    label_map[levels[1]] = 1.0;
    info.negative_label = levels[0];
    info.positive_label = levels[1];
  } else {
    throw DataError("load_csv: single label value '" + *raw_labels.begin() +
                    "' is neither 0 nor 1");
  }

  // Column kinds.
  struct Column {
    std::size_t source;
    bool categorical;
    std::vector<std::string> levels;
  };
  std::vector<Column> columns;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == label_col) continue;
    bool categorical = std::find(options.categorical_columns.begin(),
                                 options.categorical_columns.end(),
                                 header[c]) != options.categorical_columns.end();
    if (!categorical) {
      categorical = std::any_of(rows.begin(), rows.end(),
                                [c](const auto& r) { return !parse_number(r[c]); });
    }
    Column col{c, categorical, {}};
    if (categorical) {
      std::set<std::string> levels;
      for (const auto& r : rows) levels.insert(r[c]);
      col.levels.assign(levels.begin(), levels.end());
      info.categorical_columns.push_back(header[c]);
    }
    columns.push_back(std::move(col));
  }

  Eigen::Index width = 0;
  for (const auto& col : columns) {
    width += col.categorical ? static_cast<Eigen::Index>(col.levels.size()) : 1;
  }
  const auto n = static_cast<Eigen::Index>(rows.size());

  Dataset out;
  out.name = path.stem().string();
  out.features.resize(n, width);
  out.labels.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) out.labels[i] = label_map.at(rows[i][label_col]);

  Eigen::Index j = 0;
  for (const auto& col : columns) {
    if (col.categorical) {
      for (std::size_t level = 0; level < col.levels.size(); ++level) {
        info.feature_names.push_back(header[col.source] + "=" + col.levels[level]);
      }
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto& cell = rows[i][col.source];
        const auto pos = std::lower_bound(col.levels.begin(), col.levels.end(), cell) -
                         col.levels.begin();
        for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(col.levels.size()); ++k) {
          out.features(i, j + k) = (k == pos) ? 1.0 : 0.0;
        }
      }
      j += static_cast<Eigen::Index>(col.levels.size());
      continue;
    }
    info.feature_names.push_back(header[col.source]);
    for (Eigen::Index i = 0; i < n; ++i) out.features(i, j) = *parse_number(rows[i][col.source]);
    const double lo = out.features.col(j).minCoeff();
    const double hi = out.features.col(j).maxCoeff();
    if (hi > lo) {
      out.features.col(j) =
          ((out.features.col(j).array() - lo) * (2.0 / (hi - lo)) - 1.0).cwiseMax(-1.0).cwiseMin(1.0);
    } else {
      out.features.col(j).setZero();
    }
    ++j;
  }

  if (summary != nullptr) *summary = std::move(info);
  return out;
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("write_csv: cannot open " + path.string());
  for (Eigen::Index j = 0; j < data.features.cols(); ++j) out << 'x' << (j + 1) << ',';
  out << "y\n";
  out.precision(17);
  for (Eigen::Index i = 0; i < data.features.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.features.cols(); ++j) out << data.features(i, j) << ',';
    out << static_cast<int>(data.labels[i]) << '\n';
  }
  if (!out) throw DataError("write_csv: write failed for " + path.string());
}

Dataset make_folds(Dataset data, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw DomainError("make_folds: k must be positive");
  if (data.size() < k) throw DataError("make_folds: fewer rows than folds");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> folds(data.size(), 0);
  for (std::size_t p = 0; p < order.size(); ++p) folds[order[p]] = static_cast<int>(p % k);
  data.fold_assignments = std::move(folds);
  return data;
}

std::pair<Dataset, Dataset> fold_split(const Dataset& data, int fold) {
  if (!data.fold_assignments) throw DomainError("fold_split: dataset has no folds");
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  const auto& folds = *data.fold_assignments;
  for (std::size_t i = 0; i < folds.size(); ++i) (folds[i] == fold ? test : train).push_back(i);
  if (test.empty()) throw DomainError("fold_split: empty fold " + std::to_string(fold));
  auto train_set = data.subset(train);
  auto test_set = data.subset(test);
  train_set.name = data.name;
  test_set.name = data.name + "-test";
  return {std::move(train_set), std::move(test_set)};
}

HalfSplit split_half(const Dataset& data) {
  HalfSplit out;
  out.m = data.size() / 2;
  out.dropped_last_row = data.size() % 2 == 1;
  if (out.dropped_last_row) {
    spdlog::warn("split_half: odd sample size {} for '{}', dropping the last row", data.size(),
                 data.name);
  }
  std::vector<std::size_t> first(out.m);
  std::vector<std::size_t> second(out.m);
  std::iota(first.begin(), first.end(), std::size_t{0});
  std::iota(second.begin(), second.end(), out.m);
  out.first = data.subset(first);
  out.second = data.subset(second);
  return out;
}

}  // namespace pacbayes
