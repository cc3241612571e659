#pragma once

#include <cstddef>
#include <optional>

#include "repliscope/model.hpp"

namespace repliscope {

struct StepDiagnostics {
  // Targeting was on but no mass sat on the target tallies; that step
  // replicated without bias.
  bool emptyTargetMass = false;
  // Targeted effort exceeded what the target tallies could absorb in one
  // step; the excess went to off-target hypotheses.
  bool targetSaturated = false;
};

/// One time interval of the expected-value recursion. Returns raw
/// (unnormalized) masses. Replication effort is spread over published
/// hypotheses in proportion to mass, reweighted towards target tallies when
/// targeting is on. Moves past the tally bound are suppressed (reflecting)
/// or hypotheses at the bound stop moving altogether (absorbing).
TallyDistribution step(const TallyDistribution& state, const ModelParams& params,
                       StepDiagnostics* diagnostics = nullptr);

/// Per-interval growth of the published population,
/// 1 + a(1-r) * sum_k share_k (p_k + (1-p_k) c_N-). Pure formula, so r = 1 is
/// accepted here even though validated params exclude it.
double growth_factor(const ModelParams& params) noexcept;

struct FixedPointOptions {
  double tol = 1e-12;
  std::size_t maxIter = 1'000'000;
  // Starting state; defaults to the distribution of freshly published findings.
  std::optional<TallyDistribution> initial;
};

struct FixedPointResult {
  TallyDistribution distribution;  // normalized
  std::size_t iterations = 0;
  double residual = 0.0;
  double growthFactor = 1.0;
  // Activity rate the iteration finished with; lower than the configured
  // one when the iteration had to be damped.
  double iterationActivity = 1.0;
  bool emptyTargetMass = false;
  bool targetSaturated = false;
};

/// Iterates `step`, renormalizing every interval, until the L-infinity change
/// drops below `tol`. The steady state does not depend on the activity rate,
/// so when the residual stalls (targeting can make the map oscillate) or the
/// target saturates, the iteration continues at half the activity, with the
/// residual still compared at the configured activity. `targetSaturated` is
/// set only if saturation persists at 1/1024 of the configured activity.
FixedPointResult fixed_point(const ModelParams& params, const FixedPointOptions& options = {});

}  // namespace repliscope
