// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "property_suites.hpp"
#include "repliscope/comms.hpp"
#include "repliscope/metrics.hpp"
#include "repliscope/recursion.hpp"
#include "repliscope/series.hpp"
#include "repliscope/simulation.hpp"

using namespace repliscope;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds(Clock::time_point since) { return std::chrono::duration<double>(Clock::now() - since).count(); }

ModelParams fig3c() {
  return ModelParams::twoKind(0.001, StudyProfile{0.8, 0.05}, 0.2, CommunicationPolicy{0.0, 1.0, 1.0});
}

TallyDistribution analytic(const ModelParams& p) {
  auto d = series_distribution(p);
  d.normalize();
  return d;
}

Verdict closedFormEquivalence() {
  const auto start = Clock::now();
  double worst = 0.0;
  int cases = 0;
  for (double b : {0.001, 0.1}) {
    for (double beta : {0.2, 0.4}) {
      for (int i = 1; i <= 10; ++i) {
        const double r = 0.05 * i;
        const auto p = ModelParams::twoKind(b, StudyProfile{1.0 - beta, 0.05}, r);
        for (std::size_t k = 0; k < 2; ++k) {
          worst = std::max(worst, std::abs(closed_form_s1(p, k) - mass_full_comm(p, k, 1)));
          ++cases;
        }
      }
    }
  }
  const double elapsed = seconds(start);
  std::ostringstream s;
  s << cases << " cases, max |closed form - series| = " << worst << ", " << elapsed << " s";
  return {worst < 1e-10 && elapsed < 1.0, s.str()};
}

Verdict tripleAgreement() {
  const auto start = Clock::now();
  const auto p = fig3c();
  const auto series = analytic(p);
  const auto fp = fixed_point(p).distribution;
  double worstAnalytic = 0.0;
  double worstInterior = 0.0;
  for (std::size_t k = 0; k < 2; ++k) {
    for (int s = -p.tallyBound + 1; s < p.tallyBound; ++s) {
      const double d = std::abs(series.at(k, s) - fp.at(k, s));
      worstInterior = std::max(worstInterior, d);
      if (std::abs(s) <= 10) worstAnalytic = std::max(worstAnalytic, d);
    }
  }

  const auto sim = run(p, 42, 10'000'000);
  const double n = static_cast<double>(sim.liveRecords);
  double worstZ = 0.0;
  for (std::size_t k = 0; k < 2; ++k) {
    for (int s = -p.tallyBound; s <= p.tallyBound; ++s) {
      const double want = fp.at(k, s);
      const double se = std::sqrt(want * (1.0 - want) / n);
      const double diff = std::abs(sim.histogram.at(k, s) - want);
      const double z = se > 0.0 ? diff / se : (diff > 0.0 ? INFINITY : 0.0);
      worstZ = std::max(worstZ, z);
    }
  }
  const double tv = distance_to(sim, fp);
  const double elapsed = seconds(start);
  std::ostringstream s;
  s << "max |series - fixed point| = " << worstAnalytic << " on [-10, 10] (" << worstInterior
    << " inside the bound), simulation max deviation " << worstZ
    << " standard errors over " << sim.liveRecords << " records, TV " << tv << ", " << elapsed << " s";
  return {worstAnalytic < 1e-8 && worstZ < 3.0 && tv < 0.005 && elapsed < 60.0, s.str()};
}

Verdict chromatographyClaim() {
  const auto p = fig3c();
  const auto table = metrics_table(analytic(p));
  double minPrecision = 1.0;
  double tailSensitivity = 0.0;
  for (int s = 3; s <= p.tallyBound; ++s) {
    const auto& row = table.row(s);
    minPrecision = std::min(minPrecision, row.precision.value_or(0.0));
    tailSensitivity += row.sensitivity.value_or(0.0);
  }
  std::ostringstream s;
  s << "min precision over s >= 3 = " << minPrecision << ", sum of sensitivity over s >= 3 = " << tailSensitivity;
  return {minPrecision > 0.8 && tailSensitivity > 0.5, s.str()};
}

Verdict neutralModel() {
  auto neutral = fig3c();
  neutral.kinds[0].baseRateShare = 0.0;
  neutral.kinds[1].baseRateShare = 1.0;
  const auto t0 = metrics_table(solve_steady_state(neutral).distribution);
  bool allZero = true;
  int occupied = 0;
  double peak = 0.0;
  for (const auto& row : t0.rows) {
    if (!row.precision) continue;
    allZero = allZero && *row.precision == 0.0;
    if (row.massFalse > 1e-6) ++occupied;
    peak = std::max(peak, row.specificity.value_or(0.0));
  }
  auto all = fig3c();
  all.kinds[0].baseRateShare = 1.0;
  all.kinds[1].baseRateShare = 0.0;
  bool allOne = true;
  for (const auto& row : metrics_table(solve_steady_state(all).distribution).rows) {
    if (row.precision) allOne = allOne && *row.precision == 1.0;
  }
  std::ostringstream s;
  s << "b=0: precision " << (allZero ? "0" : "nonzero") << " everywhere, false mass on " << occupied
    << " tallies (peak " << peak << "); b=1: precision " << (allOne ? "1" : "not 1") << " everywhere";
  return {allZero && allOne && occupied >= 3 && peak < 1.0, s.str()};
}

Verdict massClosure() {
  gen::Source src(20240501);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto p = gen::two_kind(src);
    double total = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
      for (int dir : {1, -1}) {
        int quiet = 0;
        for (int s = dir > 0 ? 1 : 0; quiet < 3; s += dir) {
          const double m = mass_arbitrary(p, k, s);
          total += m;
          quiet = (std::abs(s) > 2 && m < 1e-15) ? quiet + 1 : 0;
        }
      }
    }
    worst = std::max(worst, std::abs(total - analytic_total_mass(p)));
  }
  std::ostringstream s;
  s << "50 parameter sets, max |sum of masses - Pr(act)(Pr(act)-r)/(1-r)| = " << worst;
  return {worst < 1e-9, s.str()};
}

Verdict suppressionSigns() {
  int points = 0;
  int mismatches = 0;
  int conditionViolations = 0;
  for (double alpha : {0.01, 0.05, 0.1, 0.2, 0.3}) {
    for (double beta : {0.15, 0.25, 0.45, 0.65}) {
      const auto p = ModelParams::twoKind(0.01, StudyProfile{1.0 - beta, alpha}, 0.1);
      const auto rep = approx_conditions(p);
      ++points;
      for (std::size_t i = 0; i < 3; ++i) {
        if ((rep.numericGradients[i] > 0.0) != (rep.approxDerivatives[i] > 0.0)) ++mismatches;
      }
      const auto& g = rep.numericGradients;
      if (alpha < beta && !(g[0] < 0.0)) ++conditionViolations;
      if (alpha <= 0.5 && !(g[1] > 0.0)) ++conditionViolations;
      if (beta - alpha <= 0.25 && !(g[2] < 0.0)) ++conditionViolations;
    }
  }
  std::ostringstream s;
  s << points << " grid points at (b, r) = (0.01, 0.1): " << mismatches << " sign mismatches with the approximations, "
    << conditionViolations << " stated-condition violations";
  return {points == 20 && mismatches == 0 && conditionViolations == 0, s.str()};
}

Verdict targetedReplication() {
  struct Panel {
    const char* name;
    double power;
    std::vector<int> target;
  };
  const std::vector<Panel> panels{{"a", 0.8, {1, 2, 3}}, {"b", 0.6, {1, 2, 3}}, {"c", 0.6, {0, 1, 2, 3}}};
  bool pass = true;
  std::ostringstream s;
  for (const auto& panel : panels) {
    auto base = ModelParams::twoKind(0.001, StudyProfile{panel.power, 0.05}, 0.1, CommunicationPolicy{0.0, 1.0, 1.0});
    auto targeted = base;
    targeted.targeting = Targeting{0.5, panel.target};
    targeted = validate_params(targeted);
    const auto on = metrics_table(solve_steady_state(targeted).distribution);
    const auto off = metrics_table(solve_steady_state(base).distribution);
    double cumOn = 0.0;
    double cumOff = 0.0;
    for (int t = 4; t <= base.tallyBound; ++t) {
      cumOn += on.row(t).sensitivity.value_or(0.0);
      cumOff += off.row(t).sensitivity.value_or(0.0);
    }
    double dPrecision = 0.0;
    double dSensitivity = 0.0;
    for (int t = 1; t <= 8; ++t) {
      dPrecision = std::max(dPrecision, std::abs(*on.row(t).precision - *off.row(t).precision));
      dSensitivity = std::max(dSensitivity, std::abs(*on.row(t).sensitivity - *off.row(t).sensitivity));
    }
    pass = pass && cumOn > cumOff && dPrecision < dSensitivity;
    if (s.tellp() > 0) s << "; ";
    s << "(" << panel.name << ") sensitivity s>=4 " << cumOn << " vs " << cumOff << ", max |dPrecision| "
      << dPrecision << " vs max |dSensitivity| " << dSensitivity;
  }
  return {pass, s.str()};
}

int minTallyAbove(const MetricsTable& table, double threshold) {
  for (const auto& row : table.rows) {
    if (row.tally >= 1 && row.precision && *row.precision > threshold) return row.tally;
  }
  return 1 << 20;
}

struct PowerScenarios {
  MetricsTable lowHigh;
  MetricsTable highLow;
};

PowerScenarios powerScenarios() {
  const CommunicationPolicy comm{0.0, 1.0, 1.0};
  const auto lowHigh = ModelParams::twoKind(0.001, StudyProfile{0.6, 0.2}, StudyProfile{0.8, 0.05}, 0.2, comm);
  const auto highLow = ModelParams::twoKind(0.001, StudyProfile{0.8, 0.05}, StudyProfile{0.5, 0.05}, 0.2, comm);
  return {metrics_table(solve_steady_state(lowHigh).distribution),
          metrics_table(solve_steady_state(highLow).distribution)};
}

Verdict differentialPower(const PowerScenarios& sc) {
  const int lh = minTallyAbove(sc.lowHigh, 0.9);
  const int hl = minTallyAbove(sc.highLow, 0.9);
  std::ostringstream s;
  s << "min s with precision > 0.9: low/high " << lh << " (precision " << *sc.lowHigh.row(lh).precision
    << "), high/low " << hl << " (precision " << *sc.highLow.row(hl).precision << ")";
  return {lh > hl, s.str()};
}

Verdict propertySuites() {
  const auto start = Clock::now();
  const std::vector<props::SuiteResult> suites{
      props::substitution_symmetry(1000, 9001), props::determinism(1000, 9002),
      props::boundary_insensitivity(1000, 9003), props::truncation_honesty(1000, 9004)};
  const double elapsed = seconds(start);
  bool pass = elapsed < 300.0;
  std::ostringstream s;
  for (const auto& r : suites) {
    pass = pass && r.ok();
    s << r.name << " " << (r.cases - r.failures) << "/" << r.cases;
    if (!r.ok()) s << " (first failure: " << r.firstFailure << ")";
    s << "; ";
  }
  s << elapsed << " s";
  return {pass, s.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<Verdict()> check;
  };
  const PowerScenarios power = powerScenarios();
  const std::vector<Criterion> criteria{
      {1, "closed form at s=1 equals the series", closedFormEquivalence},
      {2, "series, fixed point and simulation agree on chromatography parameters", tripleAgreement},
      {3, "precision above 0.8 from s=3 and over half the true hypotheses at s>=3", chromatographyClaim},
      {4, "neutral model and all-true model", neutralModel},
      {5, "mass closure identity", massClosure},
      {6, "signs of the communication-suppression derivatives", suppressionSigns},
      {7, "targeting raises high-tally sensitivity more than it moves precision", targetedReplication},
      {8, "low/high power needs a larger tally than high/low for precision above 0.9",
       [&] { return differentialPower(power); }},
      {9, "property suites", propertySuites},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("criterion %d: %s: %s (%s)\n", c.id, v.pass ? "PASS" : "FAIL", c.title, v.detail.c_str());
    std::fflush(stdout);
  }

  const int lh95 = minTallyAbove(power.lowHigh, 0.95);
  const int hl95 = minTallyAbove(power.highLow, 0.95);
  std::printf("note: at a precision threshold of 0.95 the minimum tallies are low/high %d, high/low %d\n", lh95, hl95);
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
