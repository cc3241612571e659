#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "repliscope/comms.hpp"
#include "repliscope/metrics.hpp"
#include "repliscope/simulation.hpp"

namespace repliscope {

enum class TableFormat { csv, json };

TableFormat table_format_from_string(std::string_view name);

/// 17 significant digits, locale independent; reads back to the same double.
std::string format_real(double value);
std::string format_real(const std::optional<double>& value);  // "NA" when empty

// CSV: fixed column order, LF line endings. Lines starting with '#' are
// comments (metadata and diagnostics blocks) and are skipped by the readers.
inline constexpr std::string_view kMetricsHeader =
    "tally,mass_true,mass_false,precision,sensitivity,specificity,aggregated";

void write_metrics_csv(std::ostream& out, const MetricsTable& table);
void write_metrics_json(std::ostream& out, const MetricsTable& table);
MetricsTable read_metrics_csv(std::istream& in);

void write_sweep_csv(std::ostream& out, const std::string& axisName, const std::vector<SweepPoint>& points);
void write_sim_diagnostics_csv(std::ostream& out, const SimOutcome& outcome);
void write_sim_json(std::ostream& out, const MetricsTable& table, const SimOutcome& outcome);
void write_suppression_csv(std::ostream& out, const SuppressionReport& report);
void write_suppression_json(std::ostream& out, const SuppressionReport& report);

/// Writes `table` to `path` ("-" for stdout). Throws IoFailure.
void emit_table(const MetricsTable& table, TableFormat format, const std::filesystem::path& path);

/// Writes `content` to `path` ("-" for stdout) in binary mode. Throws IoFailure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace repliscope
