#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "trendcast/centrality.hpp"
#include "trendcast/event_store.hpp"

namespace trendcast {

/// Sum tree over non-negative weights: O(log n) update and proportional draw.
class WeightedSampler {
 public:
  explicit WeightedSampler(std::size_t size = 0);

  std::size_t size() const { return weights_.size(); }
  double weight(std::size_t i) const { return weights_[i]; }
  double total() const;
  void set(std::size_t i, double weight);
  /// Rebuilds the tree from `weights` in O(n).
  void assign(std::vector<double> weights);
  /// Index i with probability weight(i) / total(), for u uniform in [0, 1).
  std::size_t draw(double u) const;

 private:
  std::vector<double> weights_;
  std::vector<double> tree_;  // 1-based Fenwick layout
  std::size_t top_bit_ = 0;
};

/**
 * Synthetic collection process with preferential attachment and aging.
 *
 * One event per tick. Items 0..initial_items-1 exist from tick 0 and new items
 * are born at `item_arrival_rate` per tick until num_items exist. At each tick
 * a user (uniform, or proportional to (k_i + 1)^activity_exponent) collects an
 * item drawn with probability proportional to
 *     (k + pa_offset) * exp(-(t - birth) / decay_timescale),
 * redrawing the pair whenever it was already collected.
 */
struct GenConfig {
  std::size_t num_users = 1000;
  std::size_t num_items = 100;
  std::size_t num_events = 10000;
  std::size_t initial_items = 1;
  double item_arrival_rate = 0.0;
  /// In ticks; infinity disables aging.
  double decay_timescale = std::numeric_limits<double>::infinity();
  double pa_offset = 1.0;
  double activity_exponent = 0.0;
  /// Seconds per tick in the emitted timestamps.
  Duration tick = 1;
  std::uint64_t seed = 1;

  void validate() const;
};

std::vector<Event> generate(const GenConfig& config);

/// Directed follow edges: followers uniform, leaders proportional to
/// (in_degree + 1)^attach_exponent. No self-loops or repeats.
std::vector<FollowEdge> generate_social(std::size_t num_users, std::size_t num_edges,
                                        double attach_exponent, std::uint64_t seed);

}  // namespace trendcast
