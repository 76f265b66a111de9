#include "trendcast/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "trendcast/event_store.hpp"

namespace trendcast::kernels {

namespace {

std::size_t block_count(std::size_t n) { return (n + kReduceBlock - 1) / kReduceBlock; }

std::int64_t count_in_window(TimeIndexView index, std::size_t v, Timestamp t, Duration window) {
  const auto first = index.times.begin() + static_cast<std::ptrdiff_t>(index.offsets[v]);
  const auto last = index.times.begin() + static_cast<std::ptrdiff_t>(index.offsets[v + 1]);
  const auto hi = std::upper_bound(first, last, t);
  const auto lo = std::upper_bound(first, hi, window_start(t, window));
  return hi - lo;
}

double weighted_in_window(TimeIndexView index, std::span<const std::uint32_t> collectors,
                          std::span<const double> weight, std::size_t v, Timestamp t,
                          Duration window) {
  const auto first = index.times.begin() + static_cast<std::ptrdiff_t>(index.offsets[v]);
  const auto last = index.times.begin() + static_cast<std::ptrdiff_t>(index.offsets[v + 1]);
  const auto hi = std::upper_bound(first, last, t);
  const auto lo = std::upper_bound(first, hi, window_start(t, window));
  double acc = 0.0;
  for (auto it = lo; it != hi; ++it) {
    acc += weight[collectors[static_cast<std::size_t>(it - index.times.begin())]];
  }
  return acc;
}

double power_or_zero(double base, double exponent, std::size_t& zero_hits) {
  if (base == 0.0 && exponent < 0.0) {
    ++zero_hits;
    return 0.0;
  }
  return std::pow(base, exponent);
}

double pull_followers(CsrView followers, std::span<const double> share,
                      std::span<const double> scores, std::size_t j) {
  double acc = 0.0;
  for (std::size_t e = followers.offsets[j]; e < followers.offsets[j + 1]; ++e) {
    const auto i = followers.targets[e];
    acc += scores[i] * share[i];
  }
  return acc;
}

// Sum of f(k) over block b, evaluated left to right.
template <class F>
double block_sum(std::size_t n, std::size_t b, F&& f) {
  const std::size_t begin = b * kReduceBlock;
  const std::size_t end = std::min(n, begin + kReduceBlock);
  double acc = 0.0;
  for (std::size_t k = begin; k < end; ++k) acc += f(k);
  return acc;
}

double fold(const std::vector<double>& partial) {
  double acc = 0.0;
  for (double p : partial) acc += p;
  return acc;
}

}  // namespace

double sum(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<double> partial(block_count(n));
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < partial.size(); ++b) {
    partial[b] = block_sum(n, b, [&](std::size_t k) { return values[k]; });
  }
  return fold(partial);
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  std::vector<double> partial(block_count(n));
#pragma omp parallel for schedule(static)
  for (std::size_t blk = 0; blk < partial.size(); ++blk) {
    partial[blk] = block_sum(n, blk, [&](std::size_t k) { return std::abs(a[k] - b[k]); });
  }
  return fold(partial);
}

void window_counts(TimeIndexView index, Timestamp t, Duration window,
                   std::span<std::int64_t> out) {
  const std::size_t n = index.nodes();
#pragma omp parallel for schedule(dynamic, 256)
  for (std::size_t v = 0; v < n; ++v) out[v] = count_in_window(index, v, t, window);
}

void window_weighted_sums(TimeIndexView index, std::span<const std::uint32_t> collectors,
                          std::span<const double> weight, Timestamp t, Duration window,
                          std::span<double> out) {
  const std::size_t n = index.nodes();
#pragma omp parallel for schedule(dynamic, 64)
  for (std::size_t v = 0; v < n; ++v) {
    out[v] = weighted_in_window(index, collectors, weight, v, t, window);
  }
}

std::size_t powers(std::span<const double> base, double exponent, std::span<double> out) {
  std::size_t zero_hits = 0;
  const std::size_t n = base.size();
#pragma omp parallel for schedule(static) reduction(+ : zero_hits)
  for (std::size_t i = 0; i < n; ++i) out[i] = power_or_zero(base[i], exponent, zero_hits);
  return zero_hits;
}

double pagerank_sweep(CsrView followers, std::span<const double> share,
                      std::span<const double> scores, double base, double damping,
                      std::span<double> out) {
  const std::size_t n = scores.size();
  std::vector<double> partial(block_count(n));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t b = 0; b < partial.size(); ++b) {
    partial[b] = block_sum(n, b, [&](std::size_t j) {
      out[j] = base + damping * pull_followers(followers, share, scores, j);
      return std::abs(out[j] - scores[j]);
    });
  }
  return fold(partial);
}

double leaderrank_sweep(CsrView followers, std::span<const double> share,
                        std::span<const double> scores, double ground, std::span<double> out) {
  const std::size_t n = scores.size();
  const double from_ground = ground / static_cast<double>(n);
  std::vector<double> partial(block_count(n));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t b = 0; b < partial.size(); ++b) {
    partial[b] = block_sum(n, b, [&](std::size_t j) {
      out[j] = from_ground + pull_followers(followers, share, scores, j);
      return scores[j] * share[j];
    });
  }
  return fold(partial);
}

namespace reference {

double sum(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<double> partial(block_count(n));
  for (std::size_t b = 0; b < partial.size(); ++b) {
    partial[b] = block_sum(n, b, [&](std::size_t k) { return values[k]; });
  }
  return fold(partial);
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  std::vector<double> partial(block_count(n));
  for (std::size_t blk = 0; blk < partial.size(); ++blk) {
    partial[blk] = block_sum(n, blk, [&](std::size_t k) { return std::abs(a[k] - b[k]); });
  }
  return fold(partial);
}

void window_counts(TimeIndexView index, Timestamp t, Duration window,
                   std::span<std::int64_t> out) {
  for (std::size_t v = 0; v < index.nodes(); ++v) out[v] = count_in_window(index, v, t, window);
}

void window_weighted_sums(TimeIndexView index, std::span<const std::uint32_t> collectors,
                          std::span<const double> weight, Timestamp t, Duration window,
                          std::span<double> out) {
  for (std::size_t v = 0; v < index.nodes(); ++v) {
    out[v] = weighted_in_window(index, collectors, weight, v, t, window);
  }
}

std::size_t powers(std::span<const double> base, double exponent, std::span<double> out) {
  std::size_t zero_hits = 0;
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = power_or_zero(base[i], exponent, zero_hits);
  return zero_hits;
}

double pagerank_sweep(CsrView followers, std::span<const double> share,
                      std::span<const double> scores, double base, double damping,
                      std::span<double> out) {
  const std::size_t n = scores.size();
  std::vector<double> partial(block_count(n));
  for (std::size_t b = 0; b < partial.size(); ++b) {
    partial[b] = block_sum(n, b, [&](std::size_t j) {
      out[j] = base + damping * pull_followers(followers, share, scores, j);
      return std::abs(out[j] - scores[j]);
    });
  }
  return fold(partial);
}

double leaderrank_sweep(CsrView followers, std::span<const double> share,
                        std::span<const double> scores, double ground, std::span<double> out) {
  const std::size_t n = scores.size();
  const double from_ground = ground / static_cast<double>(n);
  std::vector<double> partial(block_count(n));
  for (std::size_t b = 0; b < partial.size(); ++b) {
    partial[b] = block_sum(n, b, [&](std::size_t j) {
      out[j] = from_ground + pull_followers(followers, share, scores, j);
      return scores[j] * share[j];
    });
  }
  return fold(partial);
}

}  // namespace reference

}  // namespace trendcast::kernels
