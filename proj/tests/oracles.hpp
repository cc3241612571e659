#pragma once

// Reference computations used only by the tests. They share no code with the
// library beyond the parameter structs.

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "repliscope/model.hpp"

namespace oracle {

using repliscope::ModelParams;

// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> A, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    }
    if (A[piv][c] == 0.0) throw std::runtime_error("singular system");
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = A[r][c] / A[c][c];
      if (f == 0.0) continue;
      for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= A[i][k] * x[k];
    x[i] = s / A[i][i];
  }
  return x;
}

// Bounded steady state of an untargeted model: the normalized fixed point f
// satisfies (1-r) N f = A f + src, with A the replication generator, N the
// novel publication rate and src the novel inflow. Returns masses indexed
// [kind][s + S], normalized to unit total.
inline std::vector<std::vector<double>> linear_steady_state(const ModelParams& p) {
  const int S = p.tallyBound;
  const std::size_t n = static_cast<std::size_t>(2 * S + 1);
  const double r = p.replicationRate;
  double N = 0.0;
  for (const auto& k : p.kinds) {
    N += k.baseRateShare * (k.initialPositiveRate + (1.0 - k.initialPositiveRate) * p.comm.cNewNegative);
  }
  const bool absorbing = p.boundaryMode == repliscope::BoundaryMode::absorbing;

  std::vector<std::vector<double>> out;
  double total = 0.0;
  for (const auto& k : p.kinds) {
    const double up = r * k.replicationPositiveRate * p.comm.cRepPositive;
    const double down = r * (1.0 - k.replicationPositiveRate) * p.comm.cRepNegative;
    std::vector<std::vector<double>> M(n, std::vector<double>(n, 0.0));
    std::vector<double> src(n, 0.0);
    for (int s = -S; s <= S; ++s) {
      const auto i = static_cast<std::size_t>(s + S);
      M[i][i] += (1.0 - r) * N;
      if (absorbing && (s == S || s == -S)) continue;
      if (s < S) {
        M[i][i] += up;
        M[i + 1][i] -= up;
      }
      if (s > -S) {
        M[i][i] += down;
        M[i - 1][i] -= down;
      }
    }
    src[static_cast<std::size_t>(S + 1)] += (1.0 - r) * k.baseRateShare * k.initialPositiveRate;
    src[static_cast<std::size_t>(S - 1)] +=
        (1.0 - r) * k.baseRateShare * (1.0 - k.initialPositiveRate) * p.comm.cNewNegative;
    out.push_back(solve_dense(M, src));
    for (double v : out.back()) total += v;
  }
  for (auto& row : out) {
    for (double& v : row) v /= total;
  }
  return out;
}

// Unbounded steady state by summing over replication counts m with weight
// R^m, R = r / (r + (1-r) N), propagating the tally distribution one
// replication at a time (each replication: up, down, or unobserved).
// Returns raw masses keyed by tally for one kind, with the series' overall
// factor share * (1-r) * N.
inline std::map<int, double> walk_mass(const ModelParams& p, std::size_t kind, double eps = 1e-17) {
  const auto& k = p.kinds[kind];
  const double r = p.replicationRate;
  double N = 0.0;
  for (const auto& kk : p.kinds) {
    N += kk.baseRateShare * (kk.initialPositiveRate + (1.0 - kk.initialPositiveRate) * p.comm.cNewNegative);
  }
  const double R = r / (r + (1.0 - r) * N);
  const double up = k.replicationPositiveRate * p.comm.cRepPositive;
  const double down = (1.0 - k.replicationPositiveRate) * p.comm.cRepNegative;
  const double stay = 1.0 - up - down;

  std::map<int, double> cur{{1, k.initialPositiveRate}};
  if (p.comm.cNewNegative > 0.0) cur[-1] = (1.0 - k.initialPositiveRate) * p.comm.cNewNegative;
  std::map<int, double> acc;
  double weight = 1.0;
  for (int m = 0; weight > eps && m < 200000; ++m) {
    for (const auto& [s, v] : cur) acc[s] += weight * v;
    std::map<int, double> nxt;
    for (const auto& [s, v] : cur) {
      if (v < 1e-300) continue;
      if (up > 0.0) nxt[s + 1] += v * up;
      if (down > 0.0) nxt[s - 1] += v * down;
      if (stay > 0.0) nxt[s] += v * stay;
    }
    cur.swap(nxt);
    weight *= R;
  }
  const double scale = k.baseRateShare * (1.0 - r) * N;
  for (auto& [s, v] : acc) v *= scale;
  return acc;
}

// Brute force over every outcome sequence of m replications (3^m of them),
// m <= mMax. Same scaling as walk_mass. Only practical when R^mMax is tiny.
inline std::map<int, double> enumerate_mass(const ModelParams& p, std::size_t kind, int mMax) {
  const auto& k = p.kinds[kind];
  const double r = p.replicationRate;
  double N = 0.0;
  for (const auto& kk : p.kinds) {
    N += kk.baseRateShare * (kk.initialPositiveRate + (1.0 - kk.initialPositiveRate) * p.comm.cNewNegative);
  }
  const double R = r / (r + (1.0 - r) * N);
  const double probs[3] = {k.replicationPositiveRate * p.comm.cRepPositive,
                           (1.0 - k.replicationPositiveRate) * p.comm.cRepNegative, 0.0};
  const double stay = 1.0 - probs[0] - probs[1];
  const int steps[3] = {1, -1, 0};

  std::map<int, double> acc;
  std::function<void(int, int, double, int, double)> rec = [&](int depth, int m, double prob, int tally,
                                                               double weight) {
    if (depth == m) {
      acc[tally] += weight * prob;
      return;
    }
    for (int o = 0; o < 3; ++o) {
      const double q = o == 2 ? stay : probs[o];
      if (q > 0.0) rec(depth + 1, m, prob * q, tally + steps[o], weight);
    }
  };
  double weight = 1.0;
  for (int m = 0; m <= mMax; ++m) {
    rec(0, m, k.initialPositiveRate, 1, weight);
    if (p.comm.cNewNegative > 0.0) rec(0, m, (1.0 - k.initialPositiveRate) * p.comm.cNewNegative, -1, weight);
    weight *= R;
  }
  const double scale = k.baseRateShare * (1.0 - r) * N;
  for (auto& [s, v] : acc) v *= scale;
  return acc;
}

// Full-communication single-kind series at s = 1 by direct summation of the
// binomial path weights with lgamma, no closed form.
inline double direct_series_s1(double share, double r, double p) {
  double sum = 0.0;
  for (int m = 1; m < 20000; m += 2) {
    const int ups = (m + 1) / 2;
    const double logTerm = std::lgamma(m + 1.0) - std::lgamma(ups + 1.0) - std::lgamma(m - ups + 1.0) +
                           (m - 1) * std::log(r) + ups * std::log(p) + (m - ups) * std::log1p(-p);
    const double term = std::exp(logTerm);
    sum += term;
    if (m > 50 && term < 1e-20 * sum) break;
  }
  return share * (1.0 - r) * sum;
}

}  // namespace oracle
