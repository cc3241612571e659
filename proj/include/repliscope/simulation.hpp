#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "repliscope/model.hpp"

namespace repliscope {

/// A published hypothesis.
struct HypothesisRecord {
  std::uint32_t kind = 0;
  std::int32_t tally = 0;
  std::uint32_t studyCount = 0;
};

struct SimDiagnostics {
  std::uint64_t emptyTargetEvents = 0;  // targeted draw found no hypothesis on target tallies
  std::uint64_t noPoolEvents = 0;       // replication drawn before anything was published
  std::uint64_t cullings = 0;
};

struct SimOutcome {
  TallyDistribution histogram;  // normalized
  std::uint64_t events = 0;
  double populationSize = 0.0;  // live records times the culling weight
  double effectiveEvents = 0.0;  // events, each counted at the culling weight in force
  std::uint64_t liveRecords = 0;
  std::uint64_t seed = 0;
  SimDiagnostics diagnostics;
};

struct SimOptions {
  std::size_t maxLiveRecords = 1'000'000;
};

/// Event-driven agent simulation of the publication process. One event is
/// one study: with probability r a replication of a published hypothesis
/// (uniform, or on the target tallies with probability r_T), otherwise a
/// novel hypothesis whose finding is published per the communication policy.
///
/// Randomness comes from std::mt19937_64, whose output sequence is fixed by
/// the C++ standard; uniform variates are derived here rather than through
/// <random> distributions so a seed replays bit-identically on any platform.
class Simulation {
 public:
  Simulation(const ModelParams& params, std::uint64_t seed, SimOptions options = {});

  void advance(std::uint64_t events);

  std::uint64_t events() const noexcept { return events_; }
  double effectiveEvents() const noexcept { return effectiveEvents_; }
  std::size_t liveRecords() const noexcept { return records_.size(); }
  double populationSize() const noexcept { return static_cast<double>(records_.size()) * weight_; }
  const SimDiagnostics& diagnostics() const noexcept { return diagnostics_; }
  const std::vector<HypothesisRecord>& records() const noexcept { return records_; }

  TallyDistribution histogram() const;
  SimOutcome outcome() const;

 private:
  double uniform01();
  std::uint64_t uniformIndex(std::uint64_t n);

  void novelEvent();
  void replicationEvent();
  std::size_t pickTargeted(bool& found);
  void publish(std::uint32_t kind, int tally);
  void moveRecord(std::size_t id, int tally);
  void removeRecord(std::size_t id);
  void cull();

  std::vector<std::uint32_t>& bucket(int tally) { return buckets_[static_cast<std::size_t>(tally + params_.tallyBound)]; }

  ModelParams params_;
  std::uint64_t seed_;
  SimOptions options_;
  std::mt19937_64 engine_;
  std::vector<double> shareCdf_;

  std::vector<HypothesisRecord> records_;
  std::vector<std::uint32_t> slot_;  // position of each record inside its tally bucket
  std::vector<std::vector<std::uint32_t>> buckets_;
  double weight_ = 1.0;
  std::uint64_t events_ = 0;
  double effectiveEvents_ = 0.0;
  SimDiagnostics diagnostics_;
};

/// Convenience wrapper: a fresh simulation advanced by `events`.
SimOutcome run(const ModelParams& params, std::uint64_t seed, std::uint64_t events, SimOptions options = {});

/// Total variation distance between the normalized histograms.
double distance_to(const SimOutcome& outcome, const TallyDistribution& reference);
double total_variation(const TallyDistribution& a, const TallyDistribution& b);

}  // namespace repliscope
