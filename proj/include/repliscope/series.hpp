#pragma once

#include <cstddef>

#include "repliscope/model.hpp"

namespace repliscope {

/// Truncation of the steady-state series. The number of studies per
/// hypothesis is cut at the smallest m whose continuation weight R^m falls
/// below `epsilon`, never beyond `mMax`.
struct SeriesControl {
  double epsilon = 1e-14;
  int mMax = 10'000;
};

/// Number of terms kept for continuation probability `R` (0 <= R < 1).
int series_terms(double continuation, const SeriesControl& ctl);

/// Upper bound on the discarded tail sum_{m > terms} R^m.
double truncation_remainder(double continuation, int terms) noexcept;

/// Binomial path weight K(n, (n+z)/2) q^((n+z)/2) (1-q)^((n-z)/2): the
/// probability that n +/-1 steps with up-probability q end at net
/// displacement z. Zero when (n+z)/2 is not an integer in [0, n].
/// Evaluated in log space for n > 60.
double path_probability(int n, int z, double q) noexcept;

/// Full-communication steady-state mass of `kind` at tally `s`,
/// share*(1-r) * sum_m r^(m-1) K(m,(m+s)/2) p^((m+s)/2) (1-p)^((m-s)/2).
/// Requires full communication, no targeting, and equal initial and
/// replication rates for the kind.
double mass_full_comm(const ModelParams& params, std::size_t kind, int s, const SeriesControl& ctl = {});

/// Closed form of the full-communication series at s = 1. Below r = 1e-6 the
/// r -> 0 limit share*p is returned.
double closed_form_s1(const ModelParams& params, std::size_t kind = 0);

/// Probability that a replication finding on a kind with positive rate
/// `replicationPositiveRate` goes uncommunicated.
double q_uncommunicated(const CommunicationPolicy& comm, double replicationPositiveRate) noexcept;
double q_uncommunicated(const ModelParams& params, std::size_t kind);

/// Probability a replication finding is positive given it was communicated.
/// Throws AllSuppressed when nothing is ever communicated.
double q_positive_given_comm(const CommunicationPolicy& comm, double replicationPositiveRate);
double q_positive_given_comm(const ModelParams& params, std::size_t kind);

/// Probability a research event leaves a public trace.
double pr_activity(const ModelParams& params);
double pr_new_given_activity(const ModelParams& params);

/// R = r / Pr(activity): probability that an observable event is a replication.
double continuation_probability(const ModelParams& params);

/// S(z|n): probability that n communicated replication findings produce net
/// tally change z.
double seq_prob(int z, int n, double qPositive) noexcept;

/// Pr(u|m): probability of u uncommunicated findings among m replications.
/// Throws PreconditionViolated unless 0 <= u <= m.
double unobserved_count_prob(int u, int m, double qUncommunicated);

/// Arbitrary-communication steady-state mass of `kind` at tally `s`:
/// share * Pr(activity) * Pr(new|activity) * (p Pr(s|+) + (1-p) c_N- Pr(s|-)).
/// Unbounded tallies; no targeting.
double mass_arbitrary(const ModelParams& params, std::size_t kind, int s, const SeriesControl& ctl = {});

/// Sum of mass_arbitrary over all tallies and kinds,
/// Pr(activity) (Pr(activity) - r) / (1 - r).
double analytic_total_mass(const ModelParams& params);

/// mass_arbitrary at every tally of [-S, S] for every kind, with the mass
/// the unbounded solution places beyond the bound folded onto +/-S. Raw
/// masses: the total equals analytic_total_mass up to truncation.
TallyDistribution series_distribution(const ModelParams& params, const SeriesControl& ctl = {});

}  // namespace repliscope
