#include "repliscope/simulation.hpp"

#include <cmath>

namespace repliscope {

Simulation::Simulation(const ModelParams& params, std::uint64_t seed, SimOptions options)
    : params_(validate_params(params)), seed_(seed), options_(options), engine_(seed) {
  if (options_.maxLiveRecords < 2) throw Error(ErrorCode::InvalidParameter, "maxLiveRecords must be at least 2");
  double cumulative = 0.0;
  for (const auto& k : params_.kinds) {
    cumulative += k.baseRateShare;
    shareCdf_.push_back(cumulative);
  }
  shareCdf_.back() = 1.0;
  buckets_.resize(static_cast<std::size_t>(2 * params_.tallyBound + 1));
}

double Simulation::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

// Lemire's multiply-shift with rejection; unbiased for every n > 0.
__extension__ typedef unsigned __int128 u128;

std::uint64_t Simulation::uniformIndex(std::uint64_t n) {
  u128 product = static_cast<u128>(engine_()) * n;
  auto low = static_cast<std::uint64_t>(product);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      product = static_cast<u128>(engine_()) * n;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

void Simulation::advance(std::uint64_t events) {
  for (std::uint64_t e = 0; e < events; ++e) {
    ++events_;
    effectiveEvents_ += weight_;
    const bool replicate = uniform01() < params_.replicationRate;
    if (replicate && records_.empty()) {
      ++diagnostics_.noPoolEvents;
      novelEvent();
    } else if (replicate) {
      replicationEvent();
    } else {
      novelEvent();
    }
  }
}

void Simulation::novelEvent() {
  const double u = uniform01();
  std::uint32_t kind = 0;
  while (kind + 1 < shareCdf_.size() && u >= shareCdf_[kind]) ++kind;
  const auto& k = params_.kinds[kind];
  const bool positive = uniform01() < k.initialPositiveRate;
  const bool communicated = uniform01() < (positive ? CommunicationPolicy::cNewPositive : params_.comm.cNewNegative);
  if (communicated) publish(kind, positive ? 1 : -1);
}

std::size_t Simulation::pickTargeted(bool& found) {
  std::uint64_t onTarget = 0;
  for (int t : params_.targeting.targetTallies) onTarget += bucket(t).size();
  found = onTarget > 0;
  if (!found) return 0;
  std::uint64_t j = uniformIndex(onTarget);
  for (int t : params_.targeting.targetTallies) {
    const auto& b = bucket(t);
    if (j < b.size()) return b[static_cast<std::size_t>(j)];
    j -= b.size();
  }
  return 0;  // unreachable
}

void Simulation::replicationEvent() {
  std::size_t id = 0;
  bool picked = false;
  if (params_.targeting.active() && uniform01() < params_.targeting.targetFraction) {
    id = pickTargeted(picked);
    if (!picked) ++diagnostics_.emptyTargetEvents;
  }
  if (!picked) id = static_cast<std::size_t>(uniformIndex(records_.size()));

  auto& rec = records_[id];
  ++rec.studyCount;
  const double p = params_.kinds[rec.kind].replicationPositiveRate;
  const bool positive = uniform01() < p;
  const bool communicated =
      uniform01() < (positive ? params_.comm.cRepPositive : params_.comm.cRepNegative);
  if (!communicated) return;

  const int bound = params_.tallyBound;
  if (params_.boundaryMode == BoundaryMode::absorbing && std::abs(rec.tally) == bound) return;
  const int next = rec.tally + (positive ? 1 : -1);
  if (next < -bound || next > bound) return;
  moveRecord(id, next);
}

void Simulation::publish(std::uint32_t kind, int tally) {
  const auto id = static_cast<std::uint32_t>(records_.size());
  records_.push_back(HypothesisRecord{kind, tally, 1});
  auto& b = bucket(tally);
  slot_.push_back(static_cast<std::uint32_t>(b.size()));
  b.push_back(id);
  if (records_.size() > options_.maxLiveRecords) cull();
}

void Simulation::moveRecord(std::size_t id, int tally) {
  auto& from = bucket(records_[id].tally);
  const std::uint32_t pos = slot_[id];
  const std::uint32_t displaced = from.back();
  from[pos] = displaced;
  slot_[displaced] = pos;
  from.pop_back();

  auto& to = bucket(tally);
  slot_[id] = static_cast<std::uint32_t>(to.size());
  to.push_back(static_cast<std::uint32_t>(id));
  records_[id].tally = tally;
}

void Simulation::removeRecord(std::size_t id) {
  {
    auto& from = bucket(records_[id].tally);
    const std::uint32_t pos = slot_[id];
    const std::uint32_t displaced = from.back();
    from[pos] = displaced;
    slot_[displaced] = pos;
    from.pop_back();
  }
  const std::size_t last = records_.size() - 1;
  if (id != last) {
    records_[id] = records_[last];
    slot_[id] = slot_[last];
    bucket(records_[id].tally)[slot_[id]] = static_cast<std::uint32_t>(id);
  }
  records_.pop_back();
  slot_.pop_back();
}

// Uniform culling leaves expected tally frequencies unchanged; the weight
// keeps populationSize an estimate of the uncapped population.
void Simulation::cull() {
  const std::size_t before = records_.size();
  const std::size_t keep = options_.maxLiveRecords / 2;
  while (records_.size() > keep) removeRecord(static_cast<std::size_t>(uniformIndex(records_.size())));
  weight_ *= static_cast<double>(before) / static_cast<double>(records_.size());
  ++diagnostics_.cullings;
}

TallyDistribution Simulation::histogram() const {
  TallyDistribution h(params_.kindCount(), params_.tallyBound);
  for (const auto& rec : records_) h.at(rec.kind, rec.tally) += 1.0;
  if (!records_.empty()) h.normalize();
  return h;
}

SimOutcome Simulation::outcome() const {
  SimOutcome out;
  out.histogram = histogram();
  out.events = events_;
  out.populationSize = populationSize();
  out.effectiveEvents = effectiveEvents_;
  out.liveRecords = records_.size();
  out.seed = seed_;
  out.diagnostics = diagnostics_;
  return out;
}

SimOutcome run(const ModelParams& params, std::uint64_t seed, std::uint64_t events, SimOptions options) {
  if (events < 1) throw Error(ErrorCode::InvalidParameter, "at least one event is required");
  Simulation sim(params, seed, options);
  sim.advance(events);
  return sim.outcome();
}

double total_variation(const TallyDistribution& a, const TallyDistribution& b) {
  if (a.kindCount() != b.kindCount() || a.bound() != b.bound()) {
    throw Error(ErrorCode::BoundsMismatch, "distributions have different kinds or tally bounds");
  }
  const double ta = a.total();
  const double tb = b.total();
  if (!(ta > 0.0) || !(tb > 0.0)) throw Error(ErrorCode::MassBlowup, "cannot compare an empty distribution");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.masses().size(); ++i) sum += std::abs(a.masses()[i] / ta - b.masses()[i] / tb);
  return 0.5 * sum;
}

double distance_to(const SimOutcome& outcome, const TallyDistribution& reference) {
  return total_variation(outcome.histogram, reference);
}

}  // namespace repliscope
