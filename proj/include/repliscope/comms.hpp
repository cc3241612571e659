#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "repliscope/metrics.hpp"
#include "repliscope/model.hpp"
#include "repliscope/recursion.hpp"
#include "repliscope/series.hpp"

namespace repliscope {

enum class CommParam { cNewNeg = 0, cRepNeg = 1, cRepPos = 2 };

std::string_view to_string(CommParam which) noexcept;
CommParam comm_param_from_string(std::string_view name);

enum class SolveMethod { analytic, fixedPoint };

std::string_view to_string(SolveMethod method) noexcept;

struct SteadyState {
  TallyDistribution distribution;  // normalized
  SolveMethod method = SolveMethod::analytic;
  std::size_t iterations = 0;
};

struct SteadyStateOptions {
  SeriesControl series;
  FixedPointOptions fixedPoint;
};

/// Series solution when it exists (no targeting and some replication finding
/// is communicated), fixed-point iteration otherwise.
SteadyState solve_steady_state(const ModelParams& params, const SteadyStateOptions& options = {});

/// Precision at s = 1 from the series masses.
double ppv1(const ModelParams& params, const KindSelection& sel = {});

/// Backward difference of precision at s = 1 with respect to one
/// communication parameter, taken at full communication (params.comm is
/// ignored). Throws StepTooLarge for h >= 0.1.
double ppv1_gradient(const ModelParams& params, CommParam which, double h = 1e-5);

/// Leading-order (small b, small r) derivatives of precision at s = 1 with
/// respect to c_N-, c_R-, c_R+ at full communication, for base rate b,
/// false-positive rate alpha and miss rate beta = 1 - power.
std::array<double, 3> approx_derivatives(double b, double r, double alpha, double beta) noexcept;

struct SuppressionReport {
  std::array<double, 3> numericGradients{};    // indexed by CommParam
  std::array<double, 3> approxDerivatives{};
  // Whether reducing the parameter below 1 is predicted to raise precision:
  // alpha < beta; alpha > 1/2; beta - alpha <= 1/4.
  std::array<bool, 3> conditions{};
  std::array<std::string_view, 3> inequalities{"alpha < beta", "alpha > 1/2", "beta - alpha <= 1/4"};
  bool regimeValid = false;
  double b = 0.0, r = 0.0, alpha = 0.0, beta = 0.0;
};

struct RegimeThresholds {
  double maxBaseRate = 0.01;
  double maxReplicationRate = 0.2;
};

/// Requires the two-kind parameterization with equal initial and
/// replication rates.
SuppressionReport approx_conditions(const ModelParams& params, double h = 1e-5, RegimeThresholds regime = {});

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

struct SweepPoint {
  double axisValue = 0.0;
  SolveMethod method = SolveMethod::analytic;
  MetricsTable table;
};

/// Canonical axis name for `name` or one of its aliases (b, r, 1-beta,
/// alpha). Throws ConfigError for anything else.
std::string canonical_axis(std::string_view name);

/// Copy of `params` with the named quantity set to `value`. For the two-kind
/// axes (baseRate, power, falsePositiveRate) both study stages change.
ModelParams with_axis_value(const ModelParams& params, std::string_view name, double value);

/// `points` values from `from` to `to` inclusive, evenly or log spaced.
std::vector<double> axis_values(double from, double to, int points, bool logSpaced);

/// One steady-state solve per axis value, other parameters held fixed.
std::vector<SweepPoint> sweep(const ModelParams& params, const SweepAxis& axis,
                              const SteadyStateOptions& options = {}, const KindSelection& sel = {});

}  // namespace repliscope
