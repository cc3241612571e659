#include "repliscope/metrics.hpp"

#include <algorithm>

namespace repliscope {

namespace {

struct SplitMass {
  double correct = 0.0;
  double other = 0.0;
};

SplitMass massAt(const TallyDistribution& dist, int s, const KindSelection& sel) {
  SplitMass m;
  for (std::size_t k = 0; k < dist.kindCount(); ++k) {
    (sel.isCorrect(k) ? m.correct : m.other) += dist.at(k, s);
  }
  return m;
}

SplitMass totals(const TallyDistribution& dist, const KindSelection& sel) {
  SplitMass t;
  for (int s = -dist.bound(); s <= dist.bound(); ++s) {
    const auto m = massAt(dist, s, sel);
    t.correct += m.correct;
    t.other += m.other;
  }
  return t;
}

std::optional<double> ratio(double num, double den) {
  if (!(den > 0.0)) return std::nullopt;
  return num / den;
}

}  // namespace

bool KindSelection::isCorrect(std::size_t kind) const noexcept {
  return std::find(correct.begin(), correct.end(), kind) != correct.end();
}

double precision(const TallyDistribution& dist, int s, const KindSelection& sel) {
  const auto m = massAt(dist, s, sel);
  const auto value = ratio(m.correct, m.correct + m.other);
  if (!value) throw Error(ErrorCode::EmptyTally, "no hypotheses at tally " + std::to_string(s));
  return *value;
}

double sensitivity(const TallyDistribution& dist, int s, const KindSelection& sel) {
  const auto value = ratio(massAt(dist, s, sel).correct, totals(dist, sel).correct);
  if (!value) throw Error(ErrorCode::KindExtinct, "correct kinds carry no mass");
  return *value;
}

double specificity(const TallyDistribution& dist, int s, const KindSelection& sel) {
  const auto value = ratio(massAt(dist, s, sel).other, totals(dist, sel).other);
  if (!value) throw Error(ErrorCode::KindExtinct, "incorrect kinds carry no mass");
  return *value;
}

const MetricsRow& MetricsTable::row(int tally) const {
  if (rows.empty() || tally < rows.front().tally || tally > rows.back().tally) {
    throw Error(ErrorCode::BoundsMismatch, "tally " + std::to_string(tally) + " not in table");
  }
  return rows[static_cast<std::size_t>(tally - rows.front().tally)];
}

MetricsTable metrics_table(const TallyDistribution& dist, const KindSelection& sel) {
  MetricsTable table;
  table.windowLow = -dist.bound();
  table.windowHigh = dist.bound();
  const auto t = totals(dist, sel);
  for (int s = -dist.bound(); s <= dist.bound(); ++s) {
    const auto m = massAt(dist, s, sel);
    MetricsRow row;
    row.tally = s;
    row.massTrue = m.correct;
    row.massFalse = m.other;
    row.precision = ratio(m.correct, m.correct + m.other);
    row.sensitivity = ratio(m.correct, t.correct);
    row.specificity = ratio(m.other, t.other);
    table.rows.push_back(row);
  }
  return table;
}

MetricsTable tail_aggregate(const MetricsTable& table, int low, int high) {
  if (low > high || table.rows.empty()) throw Error(ErrorCode::WindowEmpty, "aggregation window is empty");
  if (low < table.rows.front().tally || high > table.rows.back().tally) {
    throw Error(ErrorCode::BoundsMismatch, "aggregation window extends past the table");
  }
  auto addOptional = [](std::optional<double>& into, const std::optional<double>& v) {
    if (v) into = into.value_or(0.0) + *v;
  };

  MetricsTable out;
  out.windowLow = low;
  out.windowHigh = high;
  for (const auto& row : table.rows) {
    const int target = std::clamp(row.tally, low, high);
    if (out.rows.empty() || out.rows.back().tally != target) {
      MetricsRow fresh = row;
      fresh.tally = target;
      fresh.aggregated = row.aggregated || row.tally != target;
      out.rows.push_back(fresh);
      continue;
    }
    auto& into = out.rows.back();
    into.massTrue += row.massTrue;
    into.massFalse += row.massFalse;
    addOptional(into.sensitivity, row.sensitivity);
    addOptional(into.specificity, row.specificity);
    into.aggregated = true;
  }
  for (auto& row : out.rows) {
    row.precision = ratio(row.massTrue, row.massTrue + row.massFalse);
  }
  return out;
}

}  // namespace repliscope
