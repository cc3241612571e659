#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "repliscope/model.hpp"

namespace repliscope {

/// Kinds counted as "correct" when computing precision. For the two-kind
/// model that is the true kind, index 0.
struct KindSelection {
  std::vector<std::size_t> correct{0};

  bool isCorrect(std::size_t kind) const noexcept;
};

/// Pr(correct | s). Throws EmptyTally when no mass sits at s.
double precision(const TallyDistribution& dist, int s, const KindSelection& sel = {});
/// Pr(s | correct). Throws KindExtinct when the correct kinds carry no mass.
double sensitivity(const TallyDistribution& dist, int s, const KindSelection& sel = {});
/// Pr(s | incorrect). Throws KindExtinct when the other kinds carry no mass.
double specificity(const TallyDistribution& dist, int s, const KindSelection& sel = {});

/// Undefined ratios (no mass at a tally, or an extinct kind) are empty
/// optionals: "no data", never 0 or 1.
struct MetricsRow {
  int tally = 0;
  double massTrue = 0.0;
  double massFalse = 0.0;
  std::optional<double> precision;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  bool aggregated = false;

  bool operator==(const MetricsRow&) const = default;
};

struct MetricsTable {
  std::vector<MetricsRow> rows;  // ascending tally, contiguous
  int windowLow = 0;
  int windowHigh = 0;

  const MetricsRow& row(int tally) const;
  bool operator==(const MetricsTable&) const = default;
};

MetricsTable metrics_table(const TallyDistribution& dist, const KindSelection& sel = {});

/// Folds rows outside [low, high] onto the window endpoints, summing masses,
/// sensitivities and specificities and recomputing precision. Endpoint rows
/// that received folded rows are marked aggregated.
MetricsTable tail_aggregate(const MetricsTable& table, int low, int high);

}  // namespace repliscope
