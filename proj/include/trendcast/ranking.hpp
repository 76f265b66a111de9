#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

namespace trendcast {

/// Indices with `eligible(i)` ordered by descending score, ties by ascending
/// index, truncated to n. Uses a partial sort so cost is O(m log n).
template <class Score, class Eligible>
std::vector<std::size_t> rank_top(std::span<const Score> scores, Eligible eligible,
                                  std::size_t n) {
  std::vector<std::size_t> order;
  order.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (eligible(i)) order.push_back(i);
  }
  const auto before = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  };
  const std::size_t keep = std::min(n, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep),
                    order.end(), before);
  order.resize(keep);
  return order;
}

}  // namespace trendcast
