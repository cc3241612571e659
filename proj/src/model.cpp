#include "repliscope/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace repliscope {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::SharesDontSum: return "SharesDontSum";
    case ErrorCode::EmptyTarget: return "EmptyTarget";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::MassBlowup: return "MassBlowup";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotFullComm: return "NotFullComm";
    case ErrorCode::DifferentialPower: return "DifferentialPower";
    case ErrorCode::RadicandNonpositive: return "RadicandNonpositive";
    case ErrorCode::AllSuppressed: return "AllSuppressed";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::BoundsMismatch: return "BoundsMismatch";
    case ErrorCode::EmptyTally: return "EmptyTally";
    case ErrorCode::KindExtinct: return "KindExtinct";
    case ErrorCode::WindowEmpty: return "WindowEmpty";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

namespace {

void requireProbability(double value, const std::string& name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorCode::InvalidProbability, name + " = " + std::to_string(value) + " is outside [0,1]");
  }
}

}  // namespace

bool Targeting::contains(int tally) const noexcept {
  return std::find(targetTallies.begin(), targetTallies.end(), tally) != targetTallies.end();
}

ModelParams ModelParams::twoKind(double baseRate, StudyProfile initial, StudyProfile replication,
                                 double replicationRate, CommunicationPolicy comm) {
  requireProbability(baseRate, "baseRate");
  requireProbability(initial.power, "power");
  requireProbability(initial.falsePositiveRate, "falsePositiveRate");
  if (!(initial.power > initial.falsePositiveRate)) {
    throw Error(ErrorCode::InvalidParameter, "initial-study power must exceed its false-positive rate");
  }
  ModelParams p;
  p.kinds = {
      HypothesisKind{"true", baseRate, initial.power, replication.power},
      HypothesisKind{"false", 1.0 - baseRate, initial.falsePositiveRate, replication.falsePositiveRate},
  };
  p.replicationRate = replicationRate;
  p.comm = comm;
  return validate_params(p);
}

ModelParams validate_params(const ModelParams& raw) {
  ModelParams p = raw;
  if (p.kinds.empty()) throw Error(ErrorCode::InvalidParameter, "at least one hypothesis kind is required");

  double shareSum = 0.0;
  for (const auto& k : p.kinds) {
    requireProbability(k.baseRateShare, "baseRateShare of kind '" + k.label + "'");
    requireProbability(k.initialPositiveRate, "initialPositiveRate of kind '" + k.label + "'");
    requireProbability(k.replicationPositiveRate, "replicationPositiveRate of kind '" + k.label + "'");
    shareSum += k.baseRateShare;
  }
  if (std::abs(shareSum - 1.0) > 1e-9) {
    throw Error(ErrorCode::SharesDontSum, "kind shares sum to " + std::to_string(shareSum));
  }
  // Rescaling lands within a few ulp of 1, so a second pass leaves shares alone.
  if (std::abs(shareSum - 1.0) > 1e-12) {
    for (auto& k : p.kinds) k.baseRateShare /= shareSum;
  }

  requireProbability(p.replicationRate, "replicationRate");
  if (p.replicationRate >= 1.0) {
    throw Error(ErrorCode::InvalidProbability, "replicationRate must be below 1");
  }
  if (!(p.activityRate > 0.0) || !std::isfinite(p.activityRate)) {
    throw Error(ErrorCode::InvalidParameter, "activityRate must be a positive real");
  }
  requireProbability(p.comm.cNewNegative, "cNewNegative");
  requireProbability(p.comm.cRepNegative, "cRepNegative");
  requireProbability(p.comm.cRepPositive, "cRepPositive");

  if (p.tallyBound < 1) throw Error(ErrorCode::InvalidParameter, "tallyBound must be at least 1");

  requireProbability(p.targeting.targetFraction, "targetFraction");
  auto& tallies = p.targeting.targetTallies;
  std::sort(tallies.begin(), tallies.end());
  tallies.erase(std::unique(tallies.begin(), tallies.end()), tallies.end());
  for (int t : tallies) {
    if (t < -p.tallyBound || t > p.tallyBound) {
      throw Error(ErrorCode::InvalidParameter, "target tally " + std::to_string(t) + " outside tally bounds");
    }
  }
  if (p.targeting.targetFraction > 0.0 && tallies.empty()) {
    throw Error(ErrorCode::EmptyTarget, "targetFraction > 0 but no target tallies given");
  }
  return p;
}

std::vector<std::string> params_warnings(const ModelParams& params) {
  std::vector<std::string> out;
  if (params.kinds.size() == 2 &&
      !(params.kinds[0].replicationPositiveRate > params.kinds[1].replicationPositiveRate)) {
    out.emplace_back("replication power does not exceed the replication false-positive rate");
  }
  return out;
}

double positive_rate(const HypothesisKind& kind, Stage stage) noexcept {
  return stage == Stage::initial ? kind.initialPositiveRate : kind.replicationPositiveRate;
}

double novel_publication_rate(const HypothesisKind& kind, const CommunicationPolicy& comm) noexcept {
  return kind.initialPositiveRate + (1.0 - kind.initialPositiveRate) * comm.cNewNegative;
}

// ---------------------------------------------------------------------------

TallyDistribution::TallyDistribution(std::size_t kinds, int bound)
    : kinds_(kinds), bound_(bound), mass_(kinds * static_cast<std::size_t>(2 * bound + 1), 0.0) {
  if (bound < 1) throw Error(ErrorCode::InvalidParameter, "tally bound must be at least 1");
}

std::size_t TallyDistribution::index(std::size_t kind, int tally) const {
  if (kind >= kinds_ || !inSupport(tally)) {
    throw Error(ErrorCode::BoundsMismatch,
                "(kind " + std::to_string(kind) + ", tally " + std::to_string(tally) + ") outside distribution");
  }
  return kind * static_cast<std::size_t>(width()) + static_cast<std::size_t>(tally + bound_);
}

double TallyDistribution::total() const noexcept {
  return std::accumulate(mass_.begin(), mass_.end(), 0.0);
}

double TallyDistribution::kindTotal(std::size_t kind) const {
  double sum = 0.0;
  for (int s = -bound_; s <= bound_; ++s) sum += at(kind, s);
  return sum;
}

double TallyDistribution::tallyTotal(int tally) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < kinds_; ++k) sum += at(k, tally);
  return sum;
}

void TallyDistribution::normalize() {
  const double t = total();
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::MassBlowup, "cannot normalize a distribution with total mass " + std::to_string(t));
  }
  for (auto& m : mass_) m /= t;
  normalization_ = Normalization::normalized;
}

void TallyDistribution::checkFinite() const {
  for (double m : mass_) {
    if (!std::isfinite(m) || m < 0.0) {
      throw Error(ErrorCode::MassBlowup, "mass became negative or non-finite");
    }
  }
}

}  // namespace repliscope
