#include "trendcast/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <spdlog/spdlog.h>

namespace trendcast {

std::string_view to_string(Centrality c) {
  switch (c) {
    case Centrality::InDegree: return "in_degree";
    case Centrality::PageRank: return "pagerank";
    case Centrality::LeaderRank: return "leaderrank";
  }
  return "?";
}

Centrality parse_centrality(std::string_view text) {
  if (text == "in_degree" || text == "in" || text == "indegree") return Centrality::InDegree;
  if (text == "pagerank" || text == "pr") return Centrality::PageRank;
  if (text == "leaderrank" || text == "lr") return Centrality::LeaderRank;
  throw ParameterError("unknown centrality '" + std::string(text) + "'");
}

SocialGraph SocialGraph::from_edges(std::span<const FollowEdge> edges,
                                    std::span<const UserId> extra_users) {
  SocialGraph g;
  g.ids_.reserve(2 * edges.size() + extra_users.size());
  for (const auto& e : edges) {
    g.ids_.push_back(e.follower);
    g.ids_.push_back(e.leader);
  }
  g.ids_.insert(g.ids_.end(), extra_users.begin(), extra_users.end());
  std::sort(g.ids_.begin(), g.ids_.end());
  g.ids_.erase(std::unique(g.ids_.begin(), g.ids_.end()), g.ids_.end());
  if (g.ids_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw DataError("too many users for 32-bit indices");
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  pairs.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.follower == e.leader) {
      ++g.self_loops_;
      continue;
    }
    pairs.emplace_back(static_cast<std::uint32_t>(*g.user_index(e.follower)),
                       static_cast<std::uint32_t>(*g.user_index(e.leader)));
  }
  std::sort(pairs.begin(), pairs.end());
  const auto last = std::unique(pairs.begin(), pairs.end());
  g.duplicates_ = static_cast<std::size_t>(pairs.end() - last);
  pairs.erase(last, pairs.end());

  const std::size_t n = g.ids_.size();
  g.leader_offsets_.assign(n + 1, 0);
  g.follower_offsets_.assign(n + 1, 0);
  for (const auto& [f, l] : pairs) {
    ++g.leader_offsets_[f + 1];
    ++g.follower_offsets_[l + 1];
  }
  for (std::size_t v = 1; v <= n; ++v) {
    g.leader_offsets_[v] += g.leader_offsets_[v - 1];
    g.follower_offsets_[v] += g.follower_offsets_[v - 1];
  }
  g.leaders_.resize(pairs.size());
  g.followers_.resize(pairs.size());
  std::vector<std::size_t> lfill(g.leader_offsets_.begin(), g.leader_offsets_.end() - 1);
  std::vector<std::size_t> ffill(g.follower_offsets_.begin(), g.follower_offsets_.end() - 1);
  // pairs are sorted by follower, so each followers_ bucket is ascending too.
  for (const auto& [f, l] : pairs) {
    g.leaders_[lfill[f]++] = l;
    g.followers_[ffill[l]++] = f;
  }
  return g;
}

std::optional<std::size_t> SocialGraph::user_index(UserId id) const {
  const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

std::vector<FollowEdge> SocialGraph::edges() const {
  std::vector<FollowEdge> out;
  out.reserve(num_edges());
  for (std::size_t f = 0; f < num_users(); ++f) {
    for (std::size_t e = leader_offsets_[f]; e < leader_offsets_[f + 1]; ++e) {
      out.push_back({ids_[f], ids_[leaders_[e]]});
    }
  }
  return out;
}

SocialGraph read_social_graph(std::istream& in) {
  std::vector<FollowEdge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream fields(line);
    FollowEdge e;
    std::string rest;
    if (!(fields >> e.follower >> e.leader) || (fields >> rest)) {
      throw DataError("malformed edge on line " + std::to_string(line_no) + ": '" + line + "'");
    }
    edges.push_back(e);
  }
  auto g = SocialGraph::from_edges(edges);
  if (g.self_loops_dropped() > 0 || g.duplicates_dropped() > 0) {
    spdlog::info("social graph: dropped {} self-loops and {} duplicate edges",
                 g.self_loops_dropped(), g.duplicates_dropped());
  }
  return g;
}

SocialGraph load_social_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open social graph '" + path.string() + "'");
  return read_social_graph(in);
}

void write_social_graph(std::ostream& out, std::span<const FollowEdge> edges) {
  out << "# follower leader\n";
  for (const auto& e : edges) out << e.follower << ' ' << e.leader << '\n';
}

InfluenceVector influence_in_degree(const SocialGraph& graph) {
  InfluenceVector out;
  out.measure = Centrality::InDegree;
  out.values.resize(graph.num_users());
  for (std::size_t v = 0; v < graph.num_users(); ++v) {
    out.values[v] = static_cast<double>(graph.in_degree(v));
  }
  return out;
}

InfluenceVector influence_pagerank(const SocialGraph& graph, const PageRankOptions& options) {
  if (!(options.damping > 0.0 && options.damping < 1.0)) {
    throw ParameterError("PageRank damping must lie in (0, 1)");
  }
  InfluenceVector out;
  out.measure = Centrality::PageRank;
  const std::size_t n = graph.num_users();
  if (n == 0) return out;

  const double nd = static_cast<double>(n);
  std::vector<double> share(n, 0.0);
  std::vector<std::size_t> dangling;
  for (std::size_t v = 0; v < n; ++v) {
    if (graph.out_degree(v) == 0) {
      dangling.push_back(v);
    } else {
      share[v] = 1.0 / static_cast<double>(graph.out_degree(v));
    }
  }

  std::vector<double> scores(n, 1.0 / nd);
  std::vector<double> next(n);
  out.converged = false;
  out.residual = 0.0;
  for (std::size_t iter = 1; iter <= options.max_iterations; ++iter) {
    double dangling_mass = 0.0;
    for (std::size_t v : dangling) dangling_mass += scores[v];
    const double base = (1.0 - options.damping) / nd + options.damping * dangling_mass / nd;
    out.residual =
        kernels::pagerank_sweep(graph.followers(), share, scores, base, options.damping, next);
    scores.swap(next);
    out.iterations = iter;
    if (out.residual < options.tolerance) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged) {
    spdlog::warn("PageRank did not converge in {} iterations (residual {:.3e})",
                 out.iterations, out.residual);
  }
  out.values = std::move(scores);
  return out;
}

InfluenceVector influence_leaderrank(const SocialGraph& graph, const LeaderRankOptions& options) {
  InfluenceVector out;
  out.measure = Centrality::LeaderRank;
  const std::size_t n = graph.num_users();
  if (n == 0) throw ParameterError("LeaderRank needs at least one user");
  if (graph.num_edges() == 0) {
    out.values.assign(n, 1.0);
    return out;
  }

  const double nd = static_cast<double>(n);
  std::vector<double> share(n);
  for (std::size_t v = 0; v < n; ++v) {
    share[v] = 1.0 / static_cast<double>(graph.out_degree(v) + 1);
  }

  std::vector<double> scores(n, 1.0);
  std::vector<double> next(n);
  double ground = 0.0;
  out.converged = false;
  for (std::size_t iter = 1; iter <= options.max_iterations; ++iter) {
    const double next_ground = kernels::leaderrank_sweep(graph.followers(), share, scores, ground, next);
    const double change = kernels::l1_distance(scores, next) + std::abs(next_ground - ground);
    scores.swap(next);
    ground = next_ground;
    out.iterations = iter;
    out.residual = change / nd;
    if (out.residual < options.tolerance) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged) {
    spdlog::warn("LeaderRank did not converge in {} iterations (residual {:.3e})",
                 out.iterations, out.residual);
  }
  const double bonus = ground / nd;
  for (double& s : scores) s += bonus;
  out.values = std::move(scores);
  return out;
}

InfluenceVector compute_influence(const SocialGraph& graph, Centrality measure) {
  switch (measure) {
    case Centrality::InDegree: return influence_in_degree(graph);
    case Centrality::PageRank: return influence_pagerank(graph);
    case Centrality::LeaderRank: return influence_leaderrank(graph);
  }
  throw ParameterError("unknown centrality");
}

}  // namespace trendcast
