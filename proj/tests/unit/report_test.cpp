#include "pacbayes/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "pacbayes/errors.hpp"

namespace pacbayes {
namespace {

std::vector<BoundReport> sample_reports() {
  SyntheticSpec spec;
  spec.d = 3;
  ExperimentConfig config;
  config.mc_samples = 100;
  config.runs = 2;
  config.synthetic_test_size = 500;
  return run_sweep(spec, {80}, config);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

TEST(Report, JsonRoundTrip) {
  const auto reports = sample_reports();
  const nlohmann::json j = to_json(reports);
  const auto back = reports_from_json(j);
  ASSERT_EQ(back.size(), reports.size());
  EXPECT_EQ(to_json(back).dump(), j.dump());
  EXPECT_EQ(back[1].bounds.size(), reports[1].bounds.size());
  EXPECT_EQ(back[1].bounds[0].value, reports[1].bounds[0].value);
  EXPECT_EQ(back[0].seeds.monte_carlo, reports[0].seeds.monte_carlo);
}

TEST(Report, JsonCarriesMetadata) {
  const nlohmann::json j = to_json(sample_reports().front());
  EXPECT_EQ(j.at("beta_form"), "eta + eta^2 m/(2m-2)");
  EXPECT_EQ(j.at("feature_scaling"), "global");
  EXPECT_TRUE(j.contains("effective_delta"));
  EXPECT_TRUE(j.contains("sigma_grid_size"));
  EXPECT_FALSE(j.contains("wall_time_seconds"));
}

TEST(Report, CsvSchema) {
  const auto reports = sample_reports();
  ASSERT_EQ(csv_columns().size(), 14u);
  std::ostringstream out;
  write_csv(reports, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(split(line), csv_columns());
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(split(line).size(), 14u) << line;
    ++rows;
  }
  EXPECT_EQ(rows, reports.size() * reports.front().bounds.size());
}

TEST(Report, EmitToFileAndErrors) {
  const auto reports = sample_reports();
  const auto path = std::filesystem::temp_directory_path() / "pacbayes_report_test.json";
  emit_report(reports, ReportFormat::json, path);
  std::ifstream in(path);
  const auto back = reports_from_json(nlohmann::json::parse(in));
  EXPECT_EQ(back.size(), reports.size());
  std::filesystem::remove(path);
  EXPECT_THROW(emit_report({}, ReportFormat::json, path), DomainError);
  EXPECT_THROW(emit_report(reports, ReportFormat::csv, "/nonexistent-dir/x.csv"), DataError);
}

TEST(Report, ParseFormat) {
  EXPECT_EQ(parse_report_format("json"), ReportFormat::json);
  EXPECT_EQ(parse_report_format("csv"), ReportFormat::csv);
  EXPECT_THROW(parse_report_format("xml"), DomainError);
}

}  // namespace
}  // namespace pacbayes
