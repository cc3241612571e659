#include "repliscope/recursion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace repliscope {

namespace {

// Per-hypothesis replication weight at each tally; averages to 1 over the
// population so total replication effort is a*r*n regardless of targeting.
// A target hypothesis is replicated at most once per step; targeted effort
// beyond that falls back onto the rest of the population.
std::vector<double> replicationWeights(const TallyDistribution& state, const ModelParams& params,
                                       StepDiagnostics* diagnostics) {
  std::vector<double> weight(static_cast<std::size_t>(state.width()), 1.0);
  if (!params.targeting.active()) return weight;

  const double total = state.total();
  double onTarget = 0.0;
  for (int t : params.targeting.targetTallies) onTarget += state.tallyTotal(t);
  if (total <= 0.0) return weight;
  if (onTarget <= 0.0) {
    if (diagnostics) diagnostics->emptyTargetMass = true;
    return weight;
  }
  const double rT = params.targeting.targetFraction;
  const double share = std::min(onTarget / total, 1.0);
  const double rate = params.activityRate * params.replicationRate;
  const double cap = rate > 0.0 ? 1.0 / rate : std::numeric_limits<double>::infinity();
  const double room = share * (cap - (1.0 - rT));
  double onWeight = 0.0;
  double offWeight = 1.0 - rT;
  if (rT <= room) {
    onWeight = (1.0 - rT) + rT / share;
  } else {
    onWeight = cap;
    offWeight += (rT - room) / (1.0 - share);
    if (diagnostics) diagnostics->targetSaturated = true;
  }
  for (int s = -state.bound(); s <= state.bound(); ++s) {
    weight[static_cast<std::size_t>(s + state.bound())] = params.targeting.contains(s) ? onWeight : offWeight;
  }
  return weight;
}

double linfDistance(const TallyDistribution& a, const TallyDistribution& b) {
  double d = 0.0;
  const auto& x = a.masses();
  const auto& y = b.masses();
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

TallyDistribution novelFindings(const ModelParams& params) {
  TallyDistribution d(params.kindCount(), params.tallyBound);
  for (std::size_t k = 0; k < params.kindCount(); ++k) {
    const auto& kind = params.kinds[k];
    d.at(k, 1) = kind.baseRateShare * kind.initialPositiveRate;
    d.at(k, -1) = kind.baseRateShare * (1.0 - kind.initialPositiveRate) * params.comm.cNewNegative;
  }
  return d;
}

}  // namespace

TallyDistribution step(const TallyDistribution& state, const ModelParams& params,
                       StepDiagnostics* diagnostics) {
  if (state.kindCount() != params.kindCount() || state.bound() != params.tallyBound) {
    throw Error(ErrorCode::BoundsMismatch, "state shape does not match params");
  }
  const int bound = state.bound();
  const double a = params.activityRate;
  const double r = params.replicationRate;
  const auto& comm = params.comm;
  const auto weight = replicationWeights(state, params, diagnostics);
  const bool absorbing = params.boundaryMode == BoundaryMode::absorbing;

  TallyDistribution next = state;
  next.markRaw();
  for (std::size_t k = 0; k < state.kindCount(); ++k) {
    const double p = params.kinds[k].replicationPositiveRate;
    const double upRate = a * r * p * comm.cRepPositive;
    const double downRate = a * r * (1.0 - p) * comm.cRepNegative;
    for (int s = -bound; s <= bound; ++s) {
      const double movable = weight[static_cast<std::size_t>(s + bound)] * state.at(k, s);
      if (movable == 0.0) continue;
      if (absorbing && (s == bound || s == -bound)) continue;
      if (s < bound) {
        next.at(k, s) -= upRate * movable;
        next.at(k, s + 1) += upRate * movable;
      }
      if (s > -bound) {
        next.at(k, s) -= downRate * movable;
        next.at(k, s - 1) += downRate * movable;
      }
    }
    const auto& kind = params.kinds[k];
    next.at(k, 1) += a * (1.0 - r) * kind.baseRateShare * kind.initialPositiveRate;
    next.at(k, -1) += a * (1.0 - r) * kind.baseRateShare * (1.0 - kind.initialPositiveRate) * comm.cNewNegative;
  }
  next.checkFinite();
  return next;
}

double growth_factor(const ModelParams& params) noexcept {
  double published = 0.0;
  for (const auto& k : params.kinds) published += k.baseRateShare * novel_publication_rate(k, params.comm);
  return 1.0 + params.activityRate * (1.0 - params.replicationRate) * published;
}

FixedPointResult fixed_point(const ModelParams& params, const FixedPointOptions& options) {
  if (!(options.tol > 0.0)) throw Error(ErrorCode::InvalidParameter, "tolerance must be positive");

  TallyDistribution current = options.initial ? *options.initial : novelFindings(params);
  if (current.kindCount() != params.kindCount() || current.bound() != params.tallyBound) {
    throw Error(ErrorCode::BoundsMismatch, "initial state does not match params");
  }
  if (!(novelFindings(params).total() > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "no novel finding is ever published; no steady state exists");
  }
  current.normalize();

  ModelParams iterParams = params;
  constexpr std::size_t kCheckpoint = 256;
  constexpr double kMinActivity = 1.0 / 1024.0;
  double checkpointResidual = std::numeric_limits<double>::infinity();
  FixedPointResult result;
  double residual = std::numeric_limits<double>::infinity();

  for (std::size_t it = 1; it <= options.maxIter; ++it) {
    StepDiagnostics diag;
    TallyDistribution next;
    try {
      next = step(current, iterParams, &diag);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MassBlowup || iterParams.activityRate < kMinActivity * params.activityRate) throw;
      iterParams.activityRate /= 2.0;
      continue;
    }
    const bool canDamp = iterParams.activityRate > kMinActivity * params.activityRate;
    if (diag.targetSaturated && canDamp) {
      iterParams.activityRate /= 2.0;
      continue;
    }
    result.emptyTargetMass = result.emptyTargetMass || diag.emptyTargetMass;
    result.targetSaturated = result.targetSaturated || diag.targetSaturated;
    next.normalize();
    residual = linfDistance(next, current);
    current = std::move(next);

    // Residual at the configured activity.
    const double scaled = residual * (params.activityRate / iterParams.activityRate);
    if (scaled < options.tol) {
      result.distribution = std::move(current);
      result.iterations = it;
      result.residual = scaled;
      result.growthFactor = growth_factor(params);
      result.iterationActivity = iterParams.activityRate;
      return result;
    }
    if (it % kCheckpoint == 0) {
      if (residual >= checkpointResidual && canDamp) {
        iterParams.activityRate /= 2.0;
      }
      checkpointResidual = residual;
    }
  }
  throw Error(ErrorCode::NoConvergence, "fixed point not reached after " + std::to_string(options.maxIter) +
                                            " iterations (residual " + std::to_string(residual) + ")");
}

}  // namespace repliscope
