#include "trendcast/synthgen.hpp"

#include <bit>
#include <cmath>
#include <string>
#include <unordered_set>

#include "trendcast/rng.hpp"

namespace trendcast {

WeightedSampler::WeightedSampler(std::size_t size) { assign(std::vector<double>(size, 0.0)); }

void WeightedSampler::assign(std::vector<double> weights) {
  weights_ = std::move(weights);
  const std::size_t n = weights_.size();
  tree_.assign(n + 1, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    tree_[i] += weights_[i - 1];
    const std::size_t parent = i + (i & (~i + 1));
    if (parent <= n) tree_[parent] += tree_[i];
  }
  top_bit_ = n == 0 ? 0 : std::bit_floor(n);
}

double WeightedSampler::total() const {
  double acc = 0.0;
  for (std::size_t i = weights_.size(); i > 0; i -= i & (~i + 1)) acc += tree_[i];
  return acc;
}

void WeightedSampler::set(std::size_t i, double weight) {
  const double delta = weight - weights_[i];
  weights_[i] = weight;
  for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1)) tree_[k] += delta;
}

std::size_t WeightedSampler::draw(double u) const {
  double target = u * total();
  std::size_t pos = 0;
  for (std::size_t step = top_bit_; step > 0; step >>= 1) {
    const std::size_t next = pos + step;
    if (next < tree_.size() && tree_[next] <= target) {
      pos = next;
      target -= tree_[next];
    }
  }
  // Rounding can push past the last positive weight.
  if (pos >= weights_.size()) pos = weights_.size() - 1;
  while (pos > 0 && weights_[pos] <= 0.0) --pos;
  return pos;
}

void GenConfig::validate() const {
  if (num_users == 0 || num_items == 0 || num_events == 0 || initial_items == 0) {
    throw ParameterError("generator counts must be positive");
  }
  if (initial_items > num_items) throw ParameterError("initial_items exceeds num_items");
  if (!(decay_timescale > 0.0)) throw ParameterError("decay timescale must be positive or inf");
  if (!(pa_offset > 0.0)) throw ParameterError("pa_offset must be positive");
  if (!(item_arrival_rate >= 0.0) || !std::isfinite(item_arrival_rate)) {
    throw ParameterError("item arrival rate must be finite and non-negative");
  }
  if (tick <= 0) throw ParameterError("tick must be positive");
  if (static_cast<double>(num_events) >
      static_cast<double>(num_users) * static_cast<double>(num_items)) {
    throw ParameterError("infeasible: num_events exceeds num_users * num_items");
  }
}

namespace {

constexpr std::size_t kMaxRedraws = 1'000'000;

// Birth tick of item j.
double birth_tick(const GenConfig& c, std::size_t j) {
  if (j < c.initial_items) return 0.0;
  return std::ceil(static_cast<double>(j - c.initial_items + 1) / c.item_arrival_rate);
}

}  // namespace

std::vector<Event> generate(const GenConfig& config) {
  config.validate();
  const bool aging = std::isfinite(config.decay_timescale);
  const double theta = config.decay_timescale;

  // Items born before the last tick bound the number of distinct pairs.
  const double last_tick = static_cast<double>(config.num_events - 1);
  std::size_t born_total = config.initial_items;
  if (config.item_arrival_rate > 0.0) {
    const double extra = std::floor(last_tick * config.item_arrival_rate);
    born_total = static_cast<std::size_t>(
        std::min(static_cast<double>(config.num_items), static_cast<double>(config.initial_items) + extra));
  }
  if (static_cast<double>(config.num_events) >
      static_cast<double>(config.num_users) * static_cast<double>(born_total)) {
    throw ParameterError("infeasible: only " + std::to_string(born_total) +
                         " items are born during the run");
  }

  Rng rng(config.seed);
  std::vector<std::int64_t> item_degree(config.num_items, 0);
  std::vector<double> birth(config.num_items);
  for (std::size_t j = 0; j < config.num_items; ++j) birth[j] = birth_tick(config, j);

  // Aging factor exp(-(t - b)/theta) = exp(-(t - ref)/theta) * exp((b - ref)/theta);
  // the first factor is common to all items and drops out of the draw.
  double ref = 0.0;
  const auto age_factor = [&](std::size_t j) {
    return aging ? std::exp((birth[j] - ref) / theta) : 1.0;
  };
  const auto item_weight = [&](std::size_t j) {
    return (static_cast<double>(item_degree[j]) + config.pa_offset) * age_factor(j);
  };

  WeightedSampler items(config.num_items);
  std::size_t born = 0;
  const auto admit_until = [&](double t) {
    while (born < config.num_items && birth[born] <= t) {
      items.set(born, item_weight(born));
      ++born;
    }
  };

  const bool weighted_users = config.activity_exponent != 0.0;
  std::vector<std::int64_t> user_degree(config.num_users, 0);
  WeightedSampler users;
  if (weighted_users) users.assign(std::vector<double>(config.num_users, 1.0));

  std::unordered_set<std::uint64_t> taken;
  taken.reserve(config.num_events * 2);

  std::vector<Event> events;
  events.reserve(config.num_events);
  for (std::size_t e = 0; e < config.num_events; ++e) {
    const double t = static_cast<double>(e);
    if (aging && t - ref > 20.0 * theta) {
      ref = t;
      std::vector<double> w(config.num_items, 0.0);
      for (std::size_t j = 0; j < born; ++j) w[j] = item_weight(j);
      items.assign(std::move(w));
    }
    admit_until(t);

    std::size_t redraws = 0;
    std::size_t user = 0;
    std::size_t item = 0;
    while (true) {
      user = weighted_users ? users.draw(rng.unit())
                            : static_cast<std::size_t>(rng.below(config.num_users));
      item = items.draw(rng.unit());
      const auto key = static_cast<std::uint64_t>(user) * config.num_items + item;
      if (taken.insert(key).second) break;
      if (++redraws > kMaxRedraws) {
        throw ParameterError("generator stalled at tick " + std::to_string(e) +
                             ": no uncollected (user, item) pair is reachable");
      }
    }

    ++item_degree[item];
    items.set(item, item_weight(item));
    ++user_degree[user];
    if (weighted_users) {
      users.set(user, std::pow(static_cast<double>(user_degree[user] + 1), config.activity_exponent));
    }
    events.push_back({static_cast<UserId>(user), static_cast<ItemId>(item),
                      static_cast<Timestamp>(e) * config.tick});
  }
  return events;
}

std::vector<FollowEdge> generate_social(std::size_t num_users, std::size_t num_edges,
                                        double attach_exponent, std::uint64_t seed) {
  if (static_cast<double>(num_edges) >
      static_cast<double>(num_users) * (static_cast<double>(num_users) - 1.0)) {
    throw ParameterError("infeasible: more edges than ordered user pairs");
  }
  std::vector<FollowEdge> edges;
  if (num_edges == 0) return edges;
  edges.reserve(num_edges);

  Rng rng(seed);
  std::vector<std::size_t> in_degree(num_users, 0);
  WeightedSampler leaders;
  leaders.assign(std::vector<double>(num_users, 1.0));
  std::unordered_set<std::uint64_t> taken;
  taken.reserve(num_edges * 2);

  std::size_t redraws = 0;
  while (edges.size() < num_edges) {
    const auto follower = static_cast<std::size_t>(rng.below(num_users));
    const auto leader = leaders.draw(rng.unit());
    const auto key = static_cast<std::uint64_t>(follower) * num_users + leader;
    if (follower == leader || !taken.insert(key).second) {
      if (++redraws > kMaxRedraws) throw ParameterError("social generator stalled");
      continue;
    }
    redraws = 0;
    ++in_degree[leader];
    if (attach_exponent != 0.0) {
      leaders.set(leader, std::pow(static_cast<double>(in_degree[leader] + 1), attach_exponent));
    }
    edges.push_back({static_cast<UserId>(follower), static_cast<UserId>(leader)});
  }
  return edges;
}

}  // namespace trendcast
