#include "repliscope/table_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace repliscope {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json optionalJson(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json tableJson(const MetricsTable& table) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"tally", r.tally},
                    {"mass_true", r.massTrue},
                    {"mass_false", r.massFalse},
                    {"precision", optionalJson(r.precision)},
                    {"sensitivity", optionalJson(r.sensitivity)},
                    {"specificity", optionalJson(r.specificity)},
                    {"aggregated", r.aggregated}});
  }
  return {{"window", {table.windowLow, table.windowHigh}}, {"rows", std::move(rows)}};
}

void writeMetricsColumns(std::ostream& out, const MetricsRow& r) {
  out << r.tally << ',' << format_real(r.massTrue) << ',' << format_real(r.massFalse) << ','
      << format_real(r.precision) << ',' << format_real(r.sensitivity) << ',' << format_real(r.specificity) << ','
      << (r.aggregated ? 1 : 0);
}

std::vector<std::string> splitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parseReal(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::IoFailure, "malformed number '" + s + "' in metrics CSV");
  }
  return v;
}

std::optional<double> parseOptional(const std::string& s) {
  if (s == "NA") return std::nullopt;
  return parseReal(s);
}

}  // namespace

TableFormat table_format_from_string(std::string_view name) {
  if (name == "csv") return TableFormat::csv;
  if (name == "json") return TableFormat::json;
  throw Error(ErrorCode::ConfigError, "format must be csv or json, got '" + std::string(name) + "'");
}

std::string format_real(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  if (ec != std::errc()) throw Error(ErrorCode::IoFailure, "cannot format number");
  return std::string(buf.data(), ptr);
}

std::string format_real(const std::optional<double>& value) { return value ? format_real(*value) : "NA"; }

void write_metrics_csv(std::ostream& out, const MetricsTable& table) {
  out << kMetricsHeader << '\n';
  for (const auto& r : table.rows) {
    writeMetricsColumns(out, r);
    out << '\n';
  }
}

void write_metrics_json(std::ostream& out, const MetricsTable& table) { out << tableJson(table).dump(2) << '\n'; }

MetricsTable read_metrics_csv(std::istream& in) {
  MetricsTable table;
  std::string line;
  bool headerSeen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!headerSeen) {
      if (line != kMetricsHeader) throw Error(ErrorCode::IoFailure, "unexpected metrics CSV header");
      headerSeen = true;
      continue;
    }
    const auto cells = splitCsv(line);
    if (cells.size() != 7) throw Error(ErrorCode::IoFailure, "metrics CSV row needs 7 columns");
    MetricsRow r;
    r.tally = static_cast<int>(parseReal(cells[0]));
    r.massTrue = parseReal(cells[1]);
    r.massFalse = parseReal(cells[2]);
    r.precision = parseOptional(cells[3]);
    r.sensitivity = parseOptional(cells[4]);
    r.specificity = parseOptional(cells[5]);
    r.aggregated = cells[6] == "1";
    table.rows.push_back(r);
  }
  if (!headerSeen) throw Error(ErrorCode::IoFailure, "metrics CSV has no header");
  if (!table.rows.empty()) {
    table.windowLow = table.rows.front().tally;
    table.windowHigh = table.rows.back().tally;
  }
  return table;
}

void write_sweep_csv(std::ostream& out, const std::string& axisName, const std::vector<SweepPoint>& points) {
  out << "axis_name,axis_value," << kMetricsHeader << '\n';
  for (const auto& pt : points) {
    for (const auto& r : pt.table.rows) {
      out << axisName << ',' << format_real(pt.axisValue) << ',';
      writeMetricsColumns(out, r);
      out << '\n';
    }
  }
}

void write_sim_diagnostics_csv(std::ostream& out, const SimOutcome& o) {
  out << "# diagnostics\n"
      << "# seed," << o.seed << '\n'
      << "# events," << o.events << '\n'
      << "# live_records," << o.liveRecords << '\n'
      << "# population_size," << format_real(o.populationSize) << '\n'
      << "# effective_events," << format_real(o.effectiveEvents) << '\n'
      << "# empty_target_events," << o.diagnostics.emptyTargetEvents << '\n'
      << "# no_pool_events," << o.diagnostics.noPoolEvents << '\n'
      << "# cullings," << o.diagnostics.cullings << '\n';
}

void write_sim_json(std::ostream& out, const MetricsTable& table, const SimOutcome& o) {
  ordered_json j = tableJson(table);
  j["diagnostics"] = {{"seed", o.seed},
                      {"events", o.events},
                      {"live_records", o.liveRecords},
                      {"population_size", o.populationSize},
                      {"effective_events", o.effectiveEvents},
                      {"empty_target_events", o.diagnostics.emptyTargetEvents},
                      {"no_pool_events", o.diagnostics.noPoolEvents},
                      {"cullings", o.diagnostics.cullings}};
  out << j.dump(2) << '\n';
}

void write_suppression_csv(std::ostream& out, const SuppressionReport& rep) {
  out << "parameter,numeric_gradient,approx_derivative,signs_agree,condition,condition_holds,regime_valid\n";
  for (CommParam which : {CommParam::cNewNeg, CommParam::cRepNeg, CommParam::cRepPos}) {
    const auto i = static_cast<std::size_t>(which);
    const bool agree = (rep.numericGradients[i] > 0.0) == (rep.approxDerivatives[i] > 0.0);
    out << to_string(which) << ',' << format_real(rep.numericGradients[i]) << ','
        << format_real(rep.approxDerivatives[i]) << ',' << (agree ? 1 : 0) << ',' << rep.inequalities[i] << ','
        << (rep.conditions[i] ? 1 : 0) << ',' << (rep.regimeValid ? 1 : 0) << '\n';
  }
}

void write_suppression_json(std::ostream& out, const SuppressionReport& rep) {
  ordered_json rows = ordered_json::array();
  for (CommParam which : {CommParam::cNewNeg, CommParam::cRepNeg, CommParam::cRepPos}) {
    const auto i = static_cast<std::size_t>(which);
    rows.push_back({{"parameter", to_string(which)},
                    {"numeric_gradient", rep.numericGradients[i]},
                    {"approx_derivative", rep.approxDerivatives[i]},
                    {"condition", rep.inequalities[i]},
                    {"condition_holds", rep.conditions[i]}});
  }
  ordered_json j = {{"b", rep.b},           {"r", rep.r},       {"alpha", rep.alpha},
                    {"beta", rep.beta},     {"regime_valid", rep.regimeValid}, {"derivatives", std::move(rows)}};
  out << j.dump(2) << '\n';
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path == "-") {
    std::cout.write(content.data(), static_cast<std::streamsize>(content.size()));
    std::cout.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  file.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!file) throw Error(ErrorCode::IoFailure, "write to " + path.string() + " failed");
}

void emit_table(const MetricsTable& table, TableFormat format, const std::filesystem::path& path) {
  std::ostringstream out;
  if (format == TableFormat::csv) {
    write_metrics_csv(out, table);
  } else {
    write_metrics_json(out, table);
  }
  write_text_file(path, out.str());
}

}  // namespace repliscope
