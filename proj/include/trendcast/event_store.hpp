#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "trendcast/types.hpp"

namespace trendcast {

/// One collection act: `user` collected `item` at `timestamp`.
struct Event {
  UserId user = 0;
  ItemId item = 0;
  Timestamp timestamp = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

struct ItemIncrease {
  ItemId item = 0;
  std::int64_t increase = 0;

  friend bool operator==(const ItemIncrease&, const ItemIncrease&) = default;
};

/// Past window (t_star - past, t_star] and future window (t_star, t_star + future].
struct TimeWindow {
  Timestamp t_star = 0;
  Duration past = 0;
  Duration future = 0;
};

/// Saturating t - d, so windows reaching before the data (or kForever queries)
/// never overflow.
inline Timestamp window_start(Timestamp t, Duration d) {
  return t < std::numeric_limits<Timestamp>::min() + d ? std::numeric_limits<Timestamp>::min()
                                                        : t - d;
}

/**
 * Immutable time-indexed user-item bipartite network.
 *
 * Users and items are mapped to dense indices in ascending id order, so index
 * order and id order coincide. Every item (and user) keeps its events sorted by
 * timestamp in a CSR layout; a snapshot degree k(t) counts events with
 * timestamp <= t and is a single binary search.
 *
 * All const member functions are safe to call concurrently.
 */
class TemporalBipartiteGraph {
 public:
  /// Collapses duplicate (user, item) pairs keeping the earliest timestamp.
  /// Throws DataError on an empty stream or a negative timestamp.
  static TemporalBipartiteGraph build(std::vector<Event> events);

  std::size_t num_users() const { return user_ids_.size(); }
  std::size_t num_items() const { return item_ids_.size(); }
  std::size_t num_links() const { return events_.size(); }
  std::size_t duplicates_collapsed() const { return duplicates_; }

  /// Events ordered by (timestamp, user, item).
  std::span<const Event> events() const { return events_; }
  Timestamp first_timestamp() const { return events_.front().timestamp; }
  Timestamp last_timestamp() const { return events_.back().timestamp; }

  std::optional<std::size_t> item_index(ItemId item) const;
  std::optional<std::size_t> user_index(UserId user) const;
  ItemId item_id(std::size_t index) const { return item_ids_[index]; }
  UserId user_id(std::size_t index) const { return user_ids_[index]; }
  std::span<const ItemId> item_ids() const { return item_ids_; }
  std::span<const UserId> user_ids() const { return user_ids_; }

  // Throw DataError for ids the graph has never seen.
  std::int64_t item_degree_at(ItemId item, Timestamp t) const;
  std::int64_t user_degree_at(UserId user, Timestamp t) const;
  std::int64_t item_degree_increase(ItemId item, Timestamp t, Duration window) const;

  /// Items seen by time t, ranked by event count in (t - window, t], ties by
  /// ascending id, truncated to n.
  std::vector<ItemIncrease> top_items_by_increase(Timestamp t, Duration window,
                                                  std::size_t n) const;

  // Index-level views used by the scoring kernels.
  std::span<const std::size_t> item_offsets() const { return item_offsets_; }
  std::span<const Timestamp> item_times() const { return item_times_; }
  std::span<const std::uint32_t> item_collectors() const { return item_users_; }
  std::span<const std::size_t> user_offsets() const { return user_offsets_; }
  std::span<const Timestamp> user_times() const { return user_times_; }

  std::int64_t item_degree_at_index(std::size_t index, Timestamp t) const;
  std::int64_t user_degree_at_index(std::size_t index, Timestamp t) const;

  /// k_i(t) for every user index.
  std::vector<std::int64_t> user_degrees_at(Timestamp t) const;
  /// k_i(t) - k_i(t - window) for every user index.
  std::vector<std::int64_t> user_degree_increases(Timestamp t, Duration window) const;
  /// k_a(t) - k_a(t - window) for every item index.
  std::vector<std::int64_t> item_degree_increases(Timestamp t, Duration window) const;
  /// k_a(t) for every item index.
  std::vector<std::int64_t> item_degrees_at(Timestamp t) const;

 private:
  TemporalBipartiteGraph() = default;

  std::vector<Event> events_;
  std::vector<UserId> user_ids_;
  std::vector<ItemId> item_ids_;

  std::vector<std::size_t> item_offsets_;
  std::vector<Timestamp> item_times_;
  std::vector<std::uint32_t> item_users_;

  std::vector<std::size_t> user_offsets_;
  std::vector<Timestamp> user_times_;

  std::size_t duplicates_ = 0;
};

}  // namespace trendcast
