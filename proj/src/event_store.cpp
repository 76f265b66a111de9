#include "trendcast/event_store.hpp"

#include <algorithm>
#include <string>

#include "trendcast/kernels.hpp"
#include "trendcast/ranking.hpp"

namespace trendcast {

namespace {

template <class Id>
std::optional<std::size_t> lookup(const std::vector<Id>& ids, Id id) {
  const auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - ids.begin());
}

std::int64_t count_upto(std::span<const std::size_t> offsets, std::span<const Timestamp> times,
                        std::size_t v, Timestamp t) {
  const auto first = times.begin() + static_cast<std::ptrdiff_t>(offsets[v]);
  const auto last = times.begin() + static_cast<std::ptrdiff_t>(offsets[v + 1]);
  return std::upper_bound(first, last, t) - first;
}

}  // namespace

TemporalBipartiteGraph TemporalBipartiteGraph::build(std::vector<Event> events) {
  if (events.empty()) throw DataError("empty event stream");
  for (std::size_t k = 0; k < events.size(); ++k) {
    if (events[k].timestamp < 0) {
      throw DataError("negative timestamp in record " + std::to_string(k) + " (user " +
                      std::to_string(events[k].user) + ", item " +
                      std::to_string(events[k].item) + ")");
    }
  }

  TemporalBipartiteGraph g;

  // Earliest timestamp first within each pair, then keep the first of each run.
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.user != b.user) return a.user < b.user;
    if (a.item != b.item) return a.item < b.item;
    return a.timestamp < b.timestamp;
  });
  const auto unique_end = std::unique(events.begin(), events.end(),
                                      [](const Event& a, const Event& b) {
                                        return a.user == b.user && a.item == b.item;
                                      });
  g.duplicates_ = static_cast<std::size_t>(events.end() - unique_end);
  events.erase(unique_end, events.end());

  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    if (a.user != b.user) return a.user < b.user;
    return a.item < b.item;
  });

  g.user_ids_.reserve(events.size());
  g.item_ids_.reserve(events.size());
  for (const Event& e : events) {
    g.user_ids_.push_back(e.user);
    g.item_ids_.push_back(e.item);
  }
  for (auto* ids : {&g.user_ids_, &g.item_ids_}) {
    std::sort(ids->begin(), ids->end());
    ids->erase(std::unique(ids->begin(), ids->end()), ids->end());
    ids->shrink_to_fit();
  }
  if (g.user_ids_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw DataError("too many users for 32-bit user indices");
  }

  // Counting sort into CSR; events are already in time order so each bucket
  // comes out sorted by timestamp.
  std::vector<std::uint32_t> user_of(events.size());
  std::vector<std::uint32_t> item_of(events.size());
  g.item_offsets_.assign(g.item_ids_.size() + 1, 0);
  g.user_offsets_.assign(g.user_ids_.size() + 1, 0);
  for (std::size_t k = 0; k < events.size(); ++k) {
    user_of[k] = static_cast<std::uint32_t>(*lookup(g.user_ids_, events[k].user));
    item_of[k] = static_cast<std::uint32_t>(*lookup(g.item_ids_, events[k].item));
    ++g.item_offsets_[item_of[k] + 1];
    ++g.user_offsets_[user_of[k] + 1];
  }
  for (std::size_t v = 1; v < g.item_offsets_.size(); ++v) g.item_offsets_[v] += g.item_offsets_[v - 1];
  for (std::size_t v = 1; v < g.user_offsets_.size(); ++v) g.user_offsets_[v] += g.user_offsets_[v - 1];

  g.item_times_.resize(events.size());
  g.item_users_.resize(events.size());
  g.user_times_.resize(events.size());
  std::vector<std::size_t> item_fill(g.item_offsets_.begin(), g.item_offsets_.end() - 1);
  std::vector<std::size_t> user_fill(g.user_offsets_.begin(), g.user_offsets_.end() - 1);
  for (std::size_t k = 0; k < events.size(); ++k) {
    const std::size_t at_item = item_fill[item_of[k]]++;
    g.item_times_[at_item] = events[k].timestamp;
    g.item_users_[at_item] = user_of[k];
    g.user_times_[user_fill[user_of[k]]++] = events[k].timestamp;
  }

  g.events_ = std::move(events);
  return g;
}

std::optional<std::size_t> TemporalBipartiteGraph::item_index(ItemId item) const {
  return lookup(item_ids_, item);
}

std::optional<std::size_t> TemporalBipartiteGraph::user_index(UserId user) const {
  return lookup(user_ids_, user);
}

std::int64_t TemporalBipartiteGraph::item_degree_at_index(std::size_t index, Timestamp t) const {
  return count_upto(item_offsets_, item_times_, index, t);
}

std::int64_t TemporalBipartiteGraph::user_degree_at_index(std::size_t index, Timestamp t) const {
  return count_upto(user_offsets_, user_times_, index, t);
}

std::int64_t TemporalBipartiteGraph::item_degree_at(ItemId item, Timestamp t) const {
  const auto index = item_index(item);
  if (!index) throw DataError("unknown item id " + std::to_string(item));
  return item_degree_at_index(*index, t);
}

std::int64_t TemporalBipartiteGraph::user_degree_at(UserId user, Timestamp t) const {
  const auto index = user_index(user);
  if (!index) throw DataError("unknown user id " + std::to_string(user));
  return user_degree_at_index(*index, t);
}

std::int64_t TemporalBipartiteGraph::item_degree_increase(ItemId item, Timestamp t,
                                                          Duration window) const {
  if (window <= 0) throw ParameterError("window length must be positive");
  const auto index = item_index(item);
  if (!index) throw DataError("unknown item id " + std::to_string(item));
  return item_degree_at_index(*index, t) - item_degree_at_index(*index, window_start(t, window));
}

std::vector<std::int64_t> TemporalBipartiteGraph::item_degree_increases(Timestamp t,
                                                                       Duration window) const {
  std::vector<std::int64_t> out(num_items());
  kernels::window_counts({item_offsets_, item_times_}, t, window, out);
  return out;
}

std::vector<std::int64_t> TemporalBipartiteGraph::item_degrees_at(Timestamp t) const {
  return item_degree_increases(t, kForever);
}

std::vector<std::int64_t> TemporalBipartiteGraph::user_degree_increases(Timestamp t,
                                                                       Duration window) const {
  std::vector<std::int64_t> out(num_users());
  kernels::window_counts({user_offsets_, user_times_}, t, window, out);
  return out;
}

std::vector<std::int64_t> TemporalBipartiteGraph::user_degrees_at(Timestamp t) const {
  return user_degree_increases(t, kForever);
}

std::vector<ItemIncrease> TemporalBipartiteGraph::top_items_by_increase(Timestamp t,
                                                                       Duration window,
                                                                       std::size_t n) const {
  if (window <= 0) throw ParameterError("window length must be positive");
  if (n == 0) throw ParameterError("ranking depth n must be at least 1");
  const auto increases = item_degree_increases(t, window);
  const auto seen = [&](std::size_t v) { return item_times_[item_offsets_[v]] <= t; };
  const auto order = rank_top(std::span<const std::int64_t>(increases), seen, n);
  std::vector<ItemIncrease> out;
  out.reserve(order.size());
  for (std::size_t v : order) out.push_back({item_ids_[v], increases[v]});
  return out;
}

}  // namespace trendcast
