#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "trendcast/kernels.hpp"
#include "trendcast/types.hpp"

namespace trendcast {

enum class Centrality { InDegree, PageRank, LeaderRank };

std::string_view to_string(Centrality c);
/// Accepts "in_degree"/"in", "pagerank"/"pr", "leaderrank"/"lr".
Centrality parse_centrality(std::string_view text);

/// A directed follow edge: `follower` receives items collected by `leader`.
struct FollowEdge {
  UserId follower = 0;
  UserId leader = 0;

  friend bool operator==(const FollowEdge&, const FollowEdge&) = default;
};

/**
 * Static directed follower -> leader network.
 *
 * Vertex ids are every id that appears in the input (including ids that only
 * appear in dropped self-loops) plus any explicitly listed isolated users.
 * Self-loops and repeated edges are dropped and counted.
 */
class SocialGraph {
 public:
  static SocialGraph from_edges(std::span<const FollowEdge> edges,
                                std::span<const UserId> extra_users = {});

  std::size_t num_users() const { return ids_.size(); }
  std::size_t num_edges() const { return leaders_.size(); }
  std::size_t self_loops_dropped() const { return self_loops_; }
  std::size_t duplicates_dropped() const { return duplicates_; }

  std::span<const UserId> user_ids() const { return ids_; }
  std::optional<std::size_t> user_index(UserId id) const;

  std::size_t in_degree(std::size_t v) const { return follower_offsets_[v + 1] - follower_offsets_[v]; }
  std::size_t out_degree(std::size_t v) const { return leader_offsets_[v + 1] - leader_offsets_[v]; }

  /// For each user, the users following them (in-edges).
  kernels::CsrView followers() const { return {follower_offsets_, followers_}; }
  /// For each user, the users they follow (out-edges).
  kernels::CsrView leaders() const { return {leader_offsets_, leaders_}; }

  /// Edges as (follower, leader) id pairs, sorted.
  std::vector<FollowEdge> edges() const;

 private:
  std::vector<UserId> ids_;
  std::vector<std::size_t> leader_offsets_;
  std::vector<std::uint32_t> leaders_;
  std::vector<std::size_t> follower_offsets_;
  std::vector<std::uint32_t> followers_;
  std::size_t self_loops_ = 0;
  std::size_t duplicates_ = 0;
};

/// Edge list: one "follower leader" pair per line, '#' comments, blank lines ok.
/// Throws DataError naming the line on malformed input.
SocialGraph read_social_graph(std::istream& in);
SocialGraph load_social_graph(const std::filesystem::path& path);
void write_social_graph(std::ostream& out, std::span<const FollowEdge> edges);

struct InfluenceVector {
  std::vector<double> values;  // indexed like SocialGraph::user_ids()
  Centrality measure = Centrality::InDegree;
  std::size_t iterations = 0;
  double residual = 0.0;
  bool converged = true;
};

struct PageRankOptions {
  double damping = 0.85;
  double tolerance = 1e-10;
  std::size_t max_iterations = 1000;
};

struct LeaderRankOptions {
  /// Applied to the L1 change per unit of total score (which is N).
  double tolerance = 1e-10;
  std::size_t max_iterations = 1000;
};

/// I_i = number of followers of i.
InfluenceVector influence_in_degree(const SocialGraph& graph);

/**
 * PageRank with score flowing from followers to the users they follow.
 *
 * Each sweep a user keeps nothing: a fraction `damping` of its score goes in
 * equal shares to its leaders and the rest is spread over everyone. Users who
 * follow nobody spread their damped share uniformly as well, so the scores
 * always sum to one. Starts from 1/N and stops when the L1 change drops below
 * the tolerance.
 */
InfluenceVector influence_pagerank(const SocialGraph& graph, const PageRankOptions& options = {});

/**
 * LeaderRank: damping-free score flow on the graph augmented with a ground
 * node linked both ways to every user. Users start at 1 and the ground at 0.
 * After convergence the ground score is split evenly among users, so the
 * values sum to N.
 *
 * Without any user-user edge the augmented chain is periodic, but the
 * redistributed scores are exactly 1 at every step; that case returns ones.
 */
InfluenceVector influence_leaderrank(const SocialGraph& graph,
                                     const LeaderRankOptions& options = {});

InfluenceVector compute_influence(const SocialGraph& graph, Centrality measure);

}  // namespace trendcast
