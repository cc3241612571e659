#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "repliscope/metrics.hpp"
#include "repliscope/model.hpp"

namespace repliscope {

/// Parameter-sweep request carried by a config file (`sweep.*` keys).
struct SweepSpec {
  std::string axis;
  double from = 0.0;
  double to = 1.0;
  int points = 21;
  bool logSpaced = false;
};

/// A named variant of the base configuration (`compare.<name>.<key>` keys),
/// e.g. the dashed curves of a figure panel.
struct Comparison {
  std::string name;
  ModelParams params;
};

/// Parsed `key = value` configuration. Model keys mirror the ModelParams
/// field names; see README for the full list.
struct RunConfig {
  ModelParams params;
  KindSelection correct;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> events;
  std::optional<double> tol;
  std::optional<std::uint64_t> maxIter;
  std::optional<std::pair<int, int>> window;

  std::string figure;
  std::string dataset;
  std::string description;
  std::vector<std::string> unverified;  // keys flagged unverified-parameter
  std::optional<SweepSpec> sweep;
  std::vector<Comparison> comparisons;
};

/// Throws ConfigError on unknown or duplicate keys, malformed values, or
/// params that fail validation.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Bundled figure-panel configurations, keyed by file stem (e.g. "fig3c").
const std::map<std::string, std::string>& bundled_configs();

}  // namespace repliscope
