#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "repliscope/error.hpp"

namespace repliscope {

/// Positive-finding rates of one kind of study: `power` applies to the "more
/// correct" kind, `falsePositiveRate` to the "less correct" one.
struct StudyProfile {
  double power = 0.8;
  double falsePositiveRate = 0.05;

  bool operator==(const StudyProfile&) const = default;
};

/// One epistemic category of hypothesis.
struct HypothesisKind {
  std::string label;
  double baseRateShare = 0.0;
  double initialPositiveRate = 0.0;
  double replicationPositiveRate = 0.0;

  bool operator==(const HypothesisKind&) const = default;
};

/// Publication probabilities. Novel positive findings are always communicated.
struct CommunicationPolicy {
  static constexpr double cNewPositive = 1.0;

  double cNewNegative = 1.0;
  double cRepNegative = 1.0;
  double cRepPositive = 1.0;

  bool isFull() const noexcept {
    return cNewNegative == 1.0 && cRepNegative == 1.0 && cRepPositive == 1.0;
  }

  bool operator==(const CommunicationPolicy&) const = default;
};

struct Targeting {
  double targetFraction = 0.0;
  std::vector<int> targetTallies;  // sorted, unique after validation

  bool active() const noexcept { return targetFraction > 0.0; }
  bool contains(int tally) const noexcept;

  bool operator==(const Targeting&) const = default;
};

enum class BoundaryMode { reflecting, absorbing };

enum class Stage { initial, replication };

struct ModelParams {
  std::vector<HypothesisKind> kinds;
  double replicationRate = 0.2;
  // Scales every flow of the recursion. Steady-state outputs do not depend on it.
  double activityRate = 1.0;
  CommunicationPolicy comm;
  Targeting targeting;
  int tallyBound = 30;
  BoundaryMode boundaryMode = BoundaryMode::reflecting;

  /// The true/false parameterization: a true kind with share `baseRate` and
  /// the profiles' powers, a false kind with share 1-baseRate and the
  /// profiles' false-positive rates. Throws if the initial-study power does
  /// not exceed its false-positive rate.
  static ModelParams twoKind(double baseRate, StudyProfile initial, StudyProfile replication,
                             double replicationRate, CommunicationPolicy comm = {});
  static ModelParams twoKind(double baseRate, StudyProfile both, double replicationRate,
                             CommunicationPolicy comm = {}) {
    return twoKind(baseRate, both, both, replicationRate, comm);
  }

  std::size_t kindCount() const noexcept { return kinds.size(); }

  bool operator==(const ModelParams&) const = default;
};

/// Checks every invariant and returns the canonical form: kind shares that
/// sum to 1 within 1e-9 are rescaled to sum to 1, target tallies are sorted
/// and deduplicated. Idempotent.
ModelParams validate_params(const ModelParams& raw);

/// Non-fatal findings, e.g. a replication profile whose power does not
/// exceed its false-positive rate.
std::vector<std::string> params_warnings(const ModelParams& params);

double positive_rate(const HypothesisKind& kind, Stage stage) noexcept;

/// Expected fraction of novel investigations of `kind` that get published:
/// positives always, negatives with probability cNewNegative.
double novel_publication_rate(const HypothesisKind& kind, const CommunicationPolicy& comm) noexcept;

enum class Normalization { raw, normalized };

/// Mass of each kind at each tally in [-bound, bound].
class TallyDistribution {
 public:
  TallyDistribution() = default;
  TallyDistribution(std::size_t kinds, int bound);

  std::size_t kindCount() const noexcept { return kinds_; }
  int bound() const noexcept { return bound_; }
  int width() const noexcept { return 2 * bound_ + 1; }
  bool inSupport(int tally) const noexcept { return tally >= -bound_ && tally <= bound_; }

  double at(std::size_t kind, int tally) const { return mass_[index(kind, tally)]; }
  double& at(std::size_t kind, int tally) { return mass_[index(kind, tally)]; }

  double total() const noexcept;
  double kindTotal(std::size_t kind) const;
  double tallyTotal(int tally) const;

  Normalization normalization() const noexcept { return normalization_; }
  void markRaw() noexcept { normalization_ = Normalization::raw; }

  /// Rescales to unit total. Throws MassBlowup when the total is zero or
  /// not finite.
  void normalize();

  /// Throws MassBlowup when any mass is negative or not finite.
  void checkFinite() const;

  const std::vector<double>& masses() const noexcept { return mass_; }

  bool operator==(const TallyDistribution&) const = default;

 private:
  std::size_t index(std::size_t kind, int tally) const;

  std::size_t kinds_ = 0;
  int bound_ = 0;
  std::vector<double> mass_;
  Normalization normalization_ = Normalization::raw;
};

}  // namespace repliscope
