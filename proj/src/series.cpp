#include "repliscope/series.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace repliscope {

namespace {

constexpr int kLogSpaceAbove = 60;
constexpr int kCachedRows = 2048;

const HypothesisKind& kindAt(const ModelParams& params, std::size_t kind) {
  if (kind >= params.kinds.size()) {
    throw Error(ErrorCode::InvalidParameter, "kind index " + std::to_string(kind) + " out of range");
  }
  return params.kinds[kind];
}

void requireUntargeted(const ModelParams& params) {
  if (params.targeting.active()) {
    throw Error(ErrorCode::InvalidParameter, "the series solution does not cover targeted replication");
  }
}

double binomialCoefficient(int n, int k) noexcept {
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// Binomial pmf of k successes in n trials, success probability q.
double binomialPmf(int n, int k, double q) noexcept {
  if (k < 0 || k > n) return 0.0;
  if (q <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (q >= 1.0) return k == n ? 1.0 : 0.0;
  if (n <= kLogSpaceAbove) {
    return binomialCoefficient(n, k) * std::pow(q, k) * std::pow(1.0 - q, n - k);
  }
  const double logC = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(logC + k * std::log(q) + (n - k) * std::log1p(-q));
}

// Pr(s|+) (start = +1) or Pr(s|-) (start = -1), evaluated term by term.
double tallyGivenFirstFinding(int s, int start, double continuation, double qUnc, double qPos, int terms) {
  double total = (s == start) ? 1.0 : 0.0;
  double weight = 1.0;
  const int z = s - start;
  for (int m = 1; m <= terms; ++m) {
    weight *= continuation;
    if (std::abs(z) > m) continue;
    double inner = 0.0;
    for (int u = 0; u <= m - std::abs(z); ++u) {
      inner += unobserved_count_prob(u, m, qUnc) * seq_prob(z, m - u, qPos);
    }
    total += weight * inner;
  }
  return total;
}

}  // namespace

int series_terms(double continuation, const SeriesControl& ctl) {
  if (!(ctl.epsilon > 0.0) || ctl.mMax < 1) {
    throw Error(ErrorCode::InvalidParameter, "series control needs epsilon > 0 and mMax >= 1");
  }
  if (continuation <= 0.0) return 1;
  if (continuation >= 1.0) return ctl.mMax;
  int m = static_cast<int>(std::ceil(std::log(ctl.epsilon) / std::log(continuation)));
  m = std::clamp(m, 1, ctl.mMax);
  while (m < ctl.mMax && std::pow(continuation, m) >= ctl.epsilon) ++m;
  return m;
}

double truncation_remainder(double continuation, int terms) noexcept {
  if (continuation <= 0.0) return 0.0;
  return std::pow(continuation, terms + 1) / (1.0 - continuation);
}

double path_probability(int n, int z, double q) noexcept {
  if (n < 0 || std::abs(z) > n || (n + z) % 2 != 0) return 0.0;
  return binomialPmf(n, (n + z) / 2, q);
}

double mass_full_comm(const ModelParams& params, std::size_t kind, int s, const SeriesControl& ctl) {
  const auto& k = kindAt(params, kind);
  if (!params.comm.isFull()) {
    throw Error(ErrorCode::NotFullComm, "full-communication series needs every c = 1; use mass_arbitrary");
  }
  requireUntargeted(params);
  if (k.initialPositiveRate != k.replicationPositiveRate) {
    throw Error(ErrorCode::DifferentialPower, "initial and replication rates differ; use mass_arbitrary");
  }
  const double r = params.replicationRate;
  const double p = k.initialPositiveRate;
  const int terms = series_terms(r, ctl);
  double sum = 0.0;
  double weight = 1.0;  // r^(m-1)
  for (int m = 1; m <= terms; ++m) {
    sum += weight * path_probability(m, s, p);
    weight *= r;
  }
  return k.baseRateShare * (1.0 - r) * sum;
}

double closed_form_s1(const ModelParams& params, std::size_t kind) {
  const auto& k = kindAt(params, kind);
  if (!params.comm.isFull()) throw Error(ErrorCode::NotFullComm, "closed form assumes full communication");
  requireUntargeted(params);
  if (k.initialPositiveRate != k.replicationPositiveRate) {
    throw Error(ErrorCode::DifferentialPower, "closed form assumes equal initial and replication rates");
  }
  const double b = k.baseRateShare;
  const double r = params.replicationRate;
  const double p = k.initialPositiveRate;
  if (r < 1e-6) return b * p;

  const double x = 4.0 * r * r * p * (1.0 - p);
  if (!(1.0 - x > 0.0)) throw Error(ErrorCode::RadicandNonpositive, "1 - 4 r^2 p (1-p) <= 0");
  // b(1-r)/(2 beta r^2) ((1-x)^(-1/2) - 1) with beta = 1-p, rewritten as
  // 2 b (1-r) p h(x), h(x) = ((1-x)^(-1/2) - 1)/x, which stays finite as beta -> 0.
  const double h = x == 0.0 ? 0.5 : std::expm1(-0.5 * std::log1p(-x)) / x;
  return 2.0 * b * (1.0 - r) * p * h;
}

double q_uncommunicated(const CommunicationPolicy& comm, double replicationPositiveRate) noexcept {
  const double p = replicationPositiveRate;
  return p * (1.0 - comm.cRepPositive) + (1.0 - p) * (1.0 - comm.cRepNegative);
}

double q_uncommunicated(const ModelParams& params, std::size_t kind) {
  return q_uncommunicated(params.comm, kindAt(params, kind).replicationPositiveRate);
}

double q_positive_given_comm(const CommunicationPolicy& comm, double replicationPositiveRate) {
  const double qUnc = q_uncommunicated(comm, replicationPositiveRate);
  if (!(qUnc < 1.0)) {
    throw Error(ErrorCode::AllSuppressed, "no replication finding is ever communicated");
  }
  return replicationPositiveRate * comm.cRepPositive / (1.0 - qUnc);
}

double q_positive_given_comm(const ModelParams& params, std::size_t kind) {
  return q_positive_given_comm(params.comm, kindAt(params, kind).replicationPositiveRate);
}

double pr_activity(const ModelParams& params) {
  double published = 0.0;
  for (const auto& k : params.kinds) published += k.baseRateShare * novel_publication_rate(k, params.comm);
  const double r = params.replicationRate;
  return r + (1.0 - r) * published;
}

double pr_new_given_activity(const ModelParams& params) {
  const double activity = pr_activity(params);
  if (!(activity > 0.0)) throw Error(ErrorCode::InvalidParameter, "no research event is ever observable");
  return (activity - params.replicationRate) / activity;
}

double continuation_probability(const ModelParams& params) {
  const double activity = pr_activity(params);
  if (!(activity > 0.0)) throw Error(ErrorCode::InvalidParameter, "no research event is ever observable");
  return params.replicationRate / activity;
}

double seq_prob(int z, int n, double qPositive) noexcept {
  if (n == 0) return z == 0 ? 1.0 : 0.0;
  return path_probability(n, z, qPositive);
}

double unobserved_count_prob(int u, int m, double qUncommunicated) {
  if (m < 0 || u < 0 || u > m) {
    throw Error(ErrorCode::PreconditionViolated, "Pr(u|m) needs 0 <= u <= m");
  }
  return binomialPmf(m, u, qUncommunicated);
}

double mass_arbitrary(const ModelParams& params, std::size_t kind, int s, const SeriesControl& ctl) {
  const auto& k = kindAt(params, kind);
  requireUntargeted(params);
  const double activity = pr_activity(params);
  const double newGivenActivity = pr_new_given_activity(params);
  const double R = continuation_probability(params);
  const int terms = series_terms(R, ctl);

  double qUnc = 0.0;
  double qPos = 0.0;
  if (R > 0.0) {
    qUnc = q_uncommunicated(params.comm, k.replicationPositiveRate);
    qPos = q_positive_given_comm(params.comm, k.replicationPositiveRate);
  }
  const double p = k.initialPositiveRate;
  const double cN = params.comm.cNewNegative;
  const double fromPositive = tallyGivenFirstFinding(s, 1, R, qUnc, qPos, terms);
  const double fromNegative =
      (1.0 - p) * cN > 0.0 ? tallyGivenFirstFinding(s, -1, R, qUnc, qPos, terms) : 0.0;
  return k.baseRateShare * activity * newGivenActivity * (p * fromPositive + (1.0 - p) * cN * fromNegative);
}

double analytic_total_mass(const ModelParams& params) {
  const double activity = pr_activity(params);
  const double r = params.replicationRate;
  return activity * (activity - r) / (1.0 - r);
}

TallyDistribution series_distribution(const ModelParams& params, const SeriesControl& ctl) {
  requireUntargeted(params);
  const double activity = pr_activity(params);
  const double newGivenActivity = pr_new_given_activity(params);
  const double R = continuation_probability(params);
  const int terms = series_terms(R, ctl);
  const int reach = terms + 1;  // |s| <= m + 1 after m replications
  const int bound = params.tallyBound;

  TallyDistribution out(params.kindCount(), bound);
  for (std::size_t kind = 0; kind < params.kindCount(); ++kind) {
    const auto& k = params.kinds[kind];
    // displacement[z + terms] = sum_m R^m sum_u Pr(u|m) S(z|m-u), plus the m = 0 term.
    std::vector<double> displacement(static_cast<std::size_t>(2 * terms + 1), 0.0);
    displacement[static_cast<std::size_t>(terms)] = 1.0;
    if (R > 0.0) {
      const double qUnc = q_uncommunicated(params.comm, k.replicationPositiveRate);
      const double qPos = q_positive_given_comm(params.comm, k.replicationPositiveRate);
      std::vector<std::vector<double>> seqRows;  // seqRows[n][(z+n)/2] = S(z|n)
      auto seqRow = [&](int n) -> std::vector<double> {
        std::vector<double> row(static_cast<std::size_t>(n + 1));
        for (int j = 0; j <= n; ++j) row[static_cast<std::size_t>(j)] = seq_prob(2 * j - n, n, qPos);
        return row;
      };
      for (int n = 0; n <= std::min(terms, kCachedRows); ++n) seqRows.push_back(seqRow(n));

      double weight = 1.0;
      for (int m = 1; m <= terms; ++m) {
        weight *= R;
        for (int u = 0; u <= m; ++u) {
          const double pu = unobserved_count_prob(u, m, qUnc);
          if (pu == 0.0) continue;
          const int n = m - u;
          const std::vector<double> spill = n <= kCachedRows ? std::vector<double>{} : seqRow(n);
          const auto& row = n <= kCachedRows ? seqRows[static_cast<std::size_t>(n)] : spill;
          for (int j = 0; j <= n; ++j) {
            const int z = 2 * j - n;
            displacement[static_cast<std::size_t>(z + terms)] += weight * pu * row[static_cast<std::size_t>(j)];
          }
        }
      }
    }

    const double lead = k.baseRateShare * activity * newGivenActivity;
    const double pos = k.initialPositiveRate;
    const double neg = (1.0 - pos) * params.comm.cNewNegative;
    for (int s = -reach; s <= reach; ++s) {
      double m = 0.0;
      const int zPos = s - 1;
      const int zNeg = s + 1;
      if (std::abs(zPos) <= terms) m += pos * displacement[static_cast<std::size_t>(zPos + terms)];
      if (std::abs(zNeg) <= terms) m += neg * displacement[static_cast<std::size_t>(zNeg + terms)];
      out.at(kind, std::clamp(s, -bound, bound)) += lead * m;
    }
  }
  return out;
}

}  // namespace repliscope
