#pragma once

// Data-parallel inner loops shared by the predictors and the centrality
// iterations. Each kernel exists twice: an OpenMP version in `kernels` and a
// plain serial loop in `kernels::reference`. Both write every output element
// from the same sequence of operations, and reductions go through fixed-size
// blocks, so the two agree bit for bit regardless of thread count.

#include <cstddef>
#include <cstdint>
#include <span>

#include "trendcast/types.hpp"

namespace trendcast::kernels {

/// Block length used by every deterministic reduction.
inline constexpr std::size_t kReduceBlock = 4096;

/// Compressed adjacency: neighbours of node v are targets[offsets[v] .. offsets[v+1]).
struct CsrView {
  std::span<const std::size_t> offsets;
  std::span<const std::uint32_t> targets;

  std::size_t nodes() const { return offsets.empty() ? 0 : offsets.size() - 1; }
};

/// Per-node sorted timestamps in CSR layout.
struct TimeIndexView {
  std::span<const std::size_t> offsets;
  std::span<const Timestamp> times;

  std::size_t nodes() const { return offsets.empty() ? 0 : offsets.size() - 1; }
};

double sum(std::span<const double> values);
double l1_distance(std::span<const double> a, std::span<const double> b);

/// out[v] = #{ events of v with timestamp in (t - window, t] }.
void window_counts(TimeIndexView index, Timestamp t, Duration window,
                   std::span<std::int64_t> out);

/// out[a] = sum of weight[collector] over events of item a in (t - window, t],
/// accumulated in timestamp order. `collectors` is aligned with index.times.
void window_weighted_sums(TimeIndexView index, std::span<const std::uint32_t> collectors,
                          std::span<const double> weight, Timestamp t, Duration window,
                          std::span<double> out);

/// out[i] = pow(base[i], exponent) with pow(0, negative) mapped to 0.
/// Returns how many entries hit that case.
std::size_t powers(std::span<const double> base, double exponent, std::span<double> out);

/// One PageRank sweep in pull form over followers:
///   out[j] = base + damping * sum_{i in followers(j)} scores[i] * share[i]
/// with share[i] = 1 / d_out(i). `base` already folds in teleport and
/// dangling mass. Returns the L1 change |out - scores|.
double pagerank_sweep(CsrView followers, std::span<const double> share,
                      std::span<const double> scores, double base, double damping,
                      std::span<double> out);

/// One LeaderRank sweep on the user part of the ground-augmented graph:
///   out[j] = ground / N + sum_{i in followers(j)} scores[i] * share[i]
/// with share[i] = 1 / (d_out(i) + 1). Returns the new ground score
/// sum_i scores[i] * share[i].
double leaderrank_sweep(CsrView followers, std::span<const double> share,
                        std::span<const double> scores, double ground, std::span<double> out);

namespace reference {

double sum(std::span<const double> values);
double l1_distance(std::span<const double> a, std::span<const double> b);
void window_counts(TimeIndexView index, Timestamp t, Duration window,
                   std::span<std::int64_t> out);
void window_weighted_sums(TimeIndexView index, std::span<const std::uint32_t> collectors,
                          std::span<const double> weight, Timestamp t, Duration window,
                          std::span<double> out);
std::size_t powers(std::span<const double> base, double exponent, std::span<double> out);
double pagerank_sweep(CsrView followers, std::span<const double> share,
                      std::span<const double> scores, double base, double damping,
                      std::span<double> out);
double leaderrank_sweep(CsrView followers, std::span<const double> share,
                        std::span<const double> scores, double ground, std::span<double> out);

}  // namespace reference

}  // namespace trendcast::kernels
