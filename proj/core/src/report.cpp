#include "pacbayes/report.hpp"

#include <fstream>
#include <ostream>

#include "pacbayes/errors.hpp"

namespace pacbayes {
namespace {

using nlohmann::json;

json components_json(const BoundComponents& c) {
  return json{{"empirical_loss", c.empirical_loss}, {"v_n", c.v_n},
              {"v_n_prime", c.v_n_prime},           {"comp_n", c.comp_n},
              {"eta_star", c.eta_star},             {"nu_star", c.nu_star},
              {"eta_term", c.eta_term},             {"nu_term", c.nu_term},
              {"delta", c.delta},                   {"n", c.n},
              {"m", c.m},                           {"b", c.b},
              {"total", c.total}};
}

BoundComponents components_from(const json& j) {
  BoundComponents c;
  j.at("empirical_loss").get_to(c.empirical_loss);
  j.at("v_n").get_to(c.v_n);
  j.at("v_n_prime").get_to(c.v_n_prime);
  j.at("comp_n").get_to(c.comp_n);
  j.at("eta_star").get_to(c.eta_star);
  j.at("nu_star").get_to(c.nu_star);
  j.at("eta_term").get_to(c.eta_term);
  j.at("nu_term").get_to(c.nu_term);
  j.at("delta").get_to(c.delta);
  j.at("n").get_to(c.n);
  j.at("m").get_to(c.m);
  j.at("b").get_to(c.b);
  j.at("total").get_to(c.total);
  return c;
}

json thm3_json(const Thm3Components& c) {
  return json{{"empirical_loss", c.empirical_loss}, {"g_n", c.g_n},
              {"g_n_prime", c.g_n_prime},           {"comp_n", c.comp_n},
              {"eta_star", c.eta_star},             {"nu_star", c.nu_star},
              {"eta_term", c.eta_term},             {"nu_term", c.nu_term},
              {"delta", c.delta},                   {"n", c.n},
              {"m", c.m},                           {"total", c.total}};
}

Thm3Components thm3_from(const json& j) {
  Thm3Components c;
  j.at("empirical_loss").get_to(c.empirical_loss);
  j.at("g_n").get_to(c.g_n);
  j.at("g_n_prime").get_to(c.g_n_prime);
  j.at("comp_n").get_to(c.comp_n);
  j.at("eta_star").get_to(c.eta_star);
  j.at("nu_star").get_to(c.nu_star);
  j.at("eta_term").get_to(c.eta_term);
  j.at("nu_term").get_to(c.nu_term);
  j.at("delta").get_to(c.delta);
  j.at("n").get_to(c.n);
  j.at("m").get_to(c.m);
  j.at("total").get_to(c.total);
  return c;
}

json config_json(const ExperimentConfig& c) {
  json bounds = json::array();
  for (BoundKind kind : c.bounds) bounds.push_back(std::string(to_string(kind)));
  return json{{"delta", c.delta},
              {"lambda", c.lambda},
              {"prior_variance", c.prior_variance},
              {"mc_samples", c.mc_samples},
              {"runs", c.runs},
              {"master_seed", c.master_seed},
              {"bounds", bounds},
              {"prior_mode", std::string(to_string(c.prior_mode))},
              {"max_iters", c.max_iters},
              {"grad_tolerance", c.grad_tolerance},
              {"synthetic_test_size", c.synthetic_test_size},
              {"record_timing", c.record_timing}};
}

ExperimentConfig config_from(const json& j) {
  ExperimentConfig c;
  j.at("delta").get_to(c.delta);
  j.at("lambda").get_to(c.lambda);
  j.at("prior_variance").get_to(c.prior_variance);
  j.at("mc_samples").get_to(c.mc_samples);
  j.at("runs").get_to(c.runs);
  j.at("master_seed").get_to(c.master_seed);
  c.bounds.clear();
  for (const auto& name : j.at("bounds")) c.bounds.push_back(parse_bound_kind(name.get<std::string>()));
  c.prior_mode = parse_prior_mode(j.at("prior_mode").get<std::string>());
  j.at("max_iters").get_to(c.max_iters);
  j.at("grad_tolerance").get_to(c.grad_tolerance);
  j.at("synthetic_test_size").get_to(c.synthetic_test_size);
  j.at("record_timing").get_to(c.record_timing);
  return c;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  throw DomainError("unknown report format '" + std::string(name) + "'");
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns = {
      "name",   "n",      "d",       "bound_value", "test_error", "L_n",         "V_n",
      "V_n_prime", "comp_n", "sigma2", "eta_star",   "nu_star",  "effective_delta", "seed"};
  return columns;
}

json to_json(const BoundReport& r) {
  json bounds = json::array();
  for (const auto& e : r.bounds) {
    json b{{"kind", std::string(to_string(e.kind))},
           {"value", e.value},
           {"sigma2", e.sigma2},
           {"empirical_loss", e.empirical_loss},
           {"v_n", e.v_n},
           {"v_n_prime", e.v_n_prime},
           {"comp_n", e.comp_n},
           {"eta_star", e.eta_star},
           {"nu_star", e.nu_star}};
    if (e.main) b["components"] = components_json(*e.main);
    if (e.thm3) b["thm3_components"] = thm3_json(*e.thm3);
    bounds.push_back(std::move(b));
  }
  json j{{"dataset", r.dataset},
         {"n", r.n},
         {"d", r.d},
         {"run", r.run},
         {"dropped_last_row", r.dropped_last_row},
         {"config", config_json(r.config)},
         {"sigma_grid_size", r.sigma_grid_size},
         {"effective_delta", r.effective_delta},
         {"test_error", r.test_error},
         {"empirical_loss", r.empirical_loss},
         {"v_n", r.v_n},
         {"v_n_prime", r.v_n_prime},
         {"g_n_prime", r.g_n_prime},
         {"bounds", bounds},
         {"seeds", {{"data", r.seeds.data}, {"monte_carlo", r.seeds.monte_carlo}}},
         {"beta_form", r.beta_form},
         {"feature_scaling", r.feature_scaling}};
  if (r.wall_time_seconds) j["wall_time_seconds"] = *r.wall_time_seconds;
  return j;
}

BoundReport report_from_json(const json& j) {
  BoundReport r;
  j.at("dataset").get_to(r.dataset);
  j.at("n").get_to(r.n);
  j.at("d").get_to(r.d);
  j.at("run").get_to(r.run);
  j.at("dropped_last_row").get_to(r.dropped_last_row);
  r.config = config_from(j.at("config"));
  j.at("sigma_grid_size").get_to(r.sigma_grid_size);
  j.at("effective_delta").get_to(r.effective_delta);
  j.at("test_error").get_to(r.test_error);
  j.at("empirical_loss").get_to(r.empirical_loss);
  j.at("v_n").get_to(r.v_n);
  j.at("v_n_prime").get_to(r.v_n_prime);
  j.at("g_n_prime").get_to(r.g_n_prime);
  for (const auto& b : j.at("bounds")) {
    BoundEntry e;
    e.kind = parse_bound_kind(b.at("kind").get<std::string>());
    b.at("value").get_to(e.value);
    b.at("sigma2").get_to(e.sigma2);
    b.at("empirical_loss").get_to(e.empirical_loss);
    b.at("v_n").get_to(e.v_n);
    b.at("v_n_prime").get_to(e.v_n_prime);
    b.at("comp_n").get_to(e.comp_n);
    b.at("eta_star").get_to(e.eta_star);
    b.at("nu_star").get_to(e.nu_star);
    if (b.contains("components")) e.main = components_from(b.at("components"));
    if (b.contains("thm3_components")) e.thm3 = thm3_from(b.at("thm3_components"));
    r.bounds.push_back(std::move(e));
  }
  j.at("seeds").at("data").get_to(r.seeds.data);
  j.at("seeds").at("monte_carlo").get_to(r.seeds.monte_carlo);
  j.at("beta_form").get_to(r.beta_form);
  j.at("feature_scaling").get_to(r.feature_scaling);
  if (j.contains("wall_time_seconds")) r.wall_time_seconds = j.at("wall_time_seconds").get<double>();
  return r;
}

json to_json(const std::vector<BoundReport>& reports) {
  json out = json::array();
  for (const auto& r : reports) out.push_back(to_json(r));
  return out;
}

std::vector<BoundReport> reports_from_json(const json& j) {
  std::vector<BoundReport> out;
  for (const auto& r : j) out.push_back(report_from_json(r));
  return out;
}

void write_csv(const std::vector<BoundReport>& reports, std::ostream& out) {
  const auto& columns = csv_columns();
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  const auto precision = out.precision(17);
  for (const auto& r : reports) {
    for (const auto& e : r.bounds) {
      out << csv_field(r.dataset + ":" + std::string(to_string(e.kind))) << ',' << r.n << ','
          << r.d << ',' << e.value << ',' << r.test_error << ',' << e.empirical_loss << ','
          << e.v_n << ',' << e.v_n_prime << ',' << e.comp_n << ',' << e.sigma2 << ','
          << e.eta_star << ',' << e.nu_star << ',' << r.effective_delta << ','
          << r.seeds.monte_carlo << '\n';
    }
  }
  out.precision(precision);
}

void write_json(const std::vector<BoundReport>& reports, std::ostream& out) {
  out << to_json(reports).dump(2) << '\n';
}

void emit_report(const std::vector<BoundReport>& reports, ReportFormat format, std::ostream& out) {
  if (reports.empty()) throw DomainError("emit_report: no reports");
  if (format == ReportFormat::json) {
    write_json(reports, out);
  } else {
    write_csv(reports, out);
  }
}

void emit_report(const std::vector<BoundReport>& reports, ReportFormat format,
                 const std::filesystem::path& path) {
  if (reports.empty()) throw DomainError("emit_report: no reports");
  std::ofstream out(path);
  if (!out) throw DataError("emit_report: cannot open " + path.string());
  emit_report(reports, format, out);
  out.flush();
  if (!out) throw DataError("emit_report: write failed for " + path.string());
}

}  // namespace pacbayes
