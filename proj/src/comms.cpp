#include "repliscope/comms.hpp"

#include <cmath>

namespace repliscope {

std::string_view to_string(CommParam which) noexcept {
  switch (which) {
    case CommParam::cNewNeg: return "cNewNegative";
    case CommParam::cRepNeg: return "cRepNegative";
    case CommParam::cRepPos: return "cRepPositive";
  }
  return "unknown";
}

CommParam comm_param_from_string(std::string_view name) {
  if (name == "cNewNegative" || name == "cNewNeg") return CommParam::cNewNeg;
  if (name == "cRepNegative" || name == "cRepNeg") return CommParam::cRepNeg;
  if (name == "cRepPositive" || name == "cRepPos") return CommParam::cRepPos;
  throw Error(ErrorCode::ConfigError, "unknown communication parameter '" + std::string(name) + "'");
}

std::string_view to_string(SolveMethod method) noexcept {
  return method == SolveMethod::analytic ? "analytic" : "fixed-point";
}

namespace {

bool seriesApplies(const ModelParams& params) {
  if (params.targeting.active()) return false;
  if (params.replicationRate == 0.0) return true;
  for (const auto& k : params.kinds) {
    if (!(q_uncommunicated(params.comm, k.replicationPositiveRate) < 1.0)) return false;
  }
  return true;
}

double& commField(CommunicationPolicy& comm, CommParam which) {
  switch (which) {
    case CommParam::cNewNeg: return comm.cNewNegative;
    case CommParam::cRepNeg: return comm.cRepNegative;
    case CommParam::cRepPos: return comm.cRepPositive;
  }
  return comm.cNewNegative;
}

void requireTwoKindsEqualStages(const ModelParams& params) {
  if (params.kinds.size() != 2) {
    throw Error(ErrorCode::InvalidParameter, "needs the two-kind (true/false) parameterization");
  }
  for (const auto& k : params.kinds) {
    if (k.initialPositiveRate != k.replicationPositiveRate) {
      throw Error(ErrorCode::DifferentialPower, "needs equal initial and replication rates");
    }
  }
}

}  // namespace

SteadyState solve_steady_state(const ModelParams& params, const SteadyStateOptions& options) {
  const ModelParams p = validate_params(params);
  SteadyState out;
  if (seriesApplies(p)) {
    out.distribution = series_distribution(p, options.series);
    out.distribution.normalize();
    out.method = SolveMethod::analytic;
    return out;
  }
  auto fp = fixed_point(p, options.fixedPoint);
  out.distribution = std::move(fp.distribution);
  out.method = SolveMethod::fixedPoint;
  out.iterations = fp.iterations;
  return out;
}

double ppv1(const ModelParams& params, const KindSelection& sel) {
  double correct = 0.0;
  double all = 0.0;
  for (std::size_t k = 0; k < params.kindCount(); ++k) {
    const double m = mass_arbitrary(params, k, 1);
    all += m;
    if (sel.isCorrect(k)) correct += m;
  }
  if (!(all > 0.0)) throw Error(ErrorCode::EmptyTally, "no hypotheses at tally 1");
  return correct / all;
}

double ppv1_gradient(const ModelParams& params, CommParam which, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidParameter, "finite-difference step must be positive");
  if (h >= 0.1) throw Error(ErrorCode::StepTooLarge, "finite-difference step must be below 0.1");
  ModelParams full = params;
  full.comm = CommunicationPolicy{};
  ModelParams lowered = full;
  commField(lowered.comm, which) = 1.0 - h;
  return (ppv1(full) - ppv1(lowered)) / h;
}

std::array<double, 3> approx_derivatives(double b, double r, double alpha, double beta) noexcept {
  const double power = 1.0 - beta;
  const double lead = b * power / alpha * (power - alpha);
  return {
      -r * r * lead * (beta - alpha) * (5.0 - 6.0 * alpha),
      r * lead * (1.0 + 2.0 * r * (beta - alpha)),
      -r * lead * (1.0 - 4.0 * r * (beta - alpha)),
  };
}

SuppressionReport approx_conditions(const ModelParams& params, double h, RegimeThresholds regime) {
  requireTwoKindsEqualStages(params);
  SuppressionReport rep;
  rep.b = params.kinds[0].baseRateShare;
  rep.r = params.replicationRate;
  rep.alpha = params.kinds[1].initialPositiveRate;
  rep.beta = 1.0 - params.kinds[0].initialPositiveRate;
  rep.approxDerivatives = approx_derivatives(rep.b, rep.r, rep.alpha, rep.beta);
  for (CommParam which : {CommParam::cNewNeg, CommParam::cRepNeg, CommParam::cRepPos}) {
    rep.numericGradients[static_cast<std::size_t>(which)] = ppv1_gradient(params, which, h);
  }
  rep.conditions = {rep.alpha < rep.beta, rep.alpha > 0.5, rep.beta - rep.alpha <= 0.25};
  rep.regimeValid = rep.b <= regime.maxBaseRate && rep.r <= regime.maxReplicationRate;
  return rep;
}

std::string canonical_axis(std::string_view name) {
  if (name == "baseRate" || name == "b") return "baseRate";
  if (name == "replicationRate" || name == "r") return "replicationRate";
  if (name == "power" || name == "1-beta") return "power";
  if (name == "falsePositiveRate" || name == "alpha") return "falsePositiveRate";
  if (name == "cNewNegative" || name == "cRepNegative" || name == "cRepPositive") return std::string(name);
  throw Error(ErrorCode::ConfigError, "unknown sweep axis '" + std::string(name) + "'");
}

ModelParams with_axis_value(const ModelParams& params, std::string_view name, double value) {
  const std::string axis = canonical_axis(name);
  ModelParams p = params;
  auto needTwoKinds = [&] {
    if (p.kinds.size() != 2) throw Error(ErrorCode::ConfigError, "axis '" + axis + "' needs two kinds");
  };
  if (axis == "baseRate") {
    needTwoKinds();
    p.kinds[0].baseRateShare = value;
    p.kinds[1].baseRateShare = 1.0 - value;
  } else if (axis == "replicationRate") {
    p.replicationRate = value;
  } else if (axis == "power") {
    needTwoKinds();
    p.kinds[0].initialPositiveRate = p.kinds[0].replicationPositiveRate = value;
  } else if (axis == "falsePositiveRate") {
    needTwoKinds();
    p.kinds[1].initialPositiveRate = p.kinds[1].replicationPositiveRate = value;
  } else {
    commField(p.comm, comm_param_from_string(axis)) = value;
  }
  return p;
}

std::vector<double> axis_values(double from, double to, int points, bool logSpaced) {
  if (points < 1) throw Error(ErrorCode::ConfigError, "a sweep needs at least one point");
  if (logSpaced && !(from > 0.0 && to > 0.0)) {
    throw Error(ErrorCode::ConfigError, "log-spaced sweeps need positive endpoints");
  }
  std::vector<double> out;
  if (points == 1) return {from};
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    out.push_back(logSpaced ? std::exp(std::log(from) + t * (std::log(to) - std::log(from)))
                            : from + t * (to - from));
  }
  out.front() = from;
  out.back() = to;
  return out;
}

std::vector<SweepPoint> sweep(const ModelParams& params, const SweepAxis& axis, const SteadyStateOptions& options,
                              const KindSelection& sel) {
  std::vector<SweepPoint> out;
  out.reserve(axis.values.size());
  for (double v : axis.values) {
    const auto solved = solve_steady_state(with_axis_value(params, axis.name, v), options);
    out.push_back(SweepPoint{v, solved.method, metrics_table(solved.distribution, sel)});
  }
  return out;
}

}  // namespace repliscope
