#pragma once

// Optima, adaptive walks and basins of attraction.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <vector>

#include "fla/landscape.hpp"
#include "fla/rng.hpp"

namespace fla {

struct OptimaSet {
  std::vector<NodeId> local_optima;  // sinks, ascending node id
  NodeId global_optimum = 0;
  std::size_t global_tie_count = 0;
};

/// Maximum fitness node; ties go to the sequence-lexicographically smallest.
inline NodeId global_optimum(const Landscape& l, std::size_t* tie_count = nullptr) {
  const auto f = l.fitness();
  NodeId best = 0;
  std::size_t ties = 1;
  for (NodeId u = 1; u < l.size(); ++u) {
    if (f[u] > f[best]) {
      best = u;
      ties = 1;
    } else if (f[u] == f[best]) {
      ++ties;
      if (l.space().lex_less(l.code(u), l.code(best))) best = u;
    }
  }
  if (tie_count) *tie_count = ties;
  return best;
}

inline OptimaSet local_optima(const Landscape& l) {
  OptimaSet out;
  for (NodeId u = 0; u < l.size(); ++u)
    if (l.is_sink(u)) out.local_optima.push_back(u);
  out.global_optimum = global_optimum(l, &out.global_tie_count);
  return out;
}

struct WalkOutcome {
  GenotypeCode start = 0;
  GenotypeCode endpoint = 0;
  std::size_t steps = 0;
  double start_fitness = 0.0;
  double endpoint_fitness = 0.0;
};

/// Best-improvement successor of u, or u itself at a sink.
inline NodeId greedy_step(const Landscape& l, NodeId u) {
  NodeId best = u;
  double best_f = l.fitness(u);
  for (auto v : l.out_edges(u)) {
    const double fv = l.fitness(v);
    if (fv > best_f || (best != u && fv == best_f && l.space().lex_less(l.code(v), l.code(best)))) {
      best = v;
      best_f = fv;
    }
  }
  return best;
}

inline WalkOutcome greedy_walk(const Landscape& l, GenotypeCode start) {
  NodeId u = l.node(start);
  WalkOutcome w{start, start, 0, l.fitness(u), l.fitness(u)};
  for (NodeId next = greedy_step(l, u); next != u; next = greedy_step(l, u)) {
    u = next;
    ++w.steps;
  }
  w.endpoint = l.code(u);
  w.endpoint_fitness = l.fitness(u);
  return w;
}

/// First-improvement walk: each step picks uniformly among fitter neighbours.
inline WalkOutcome stochastic_walk(const Landscape& l, GenotypeCode start, std::uint64_t seed) {
  NodeId u = l.node(start);
  rng::Stream rng(seed, 0x57a1);
  WalkOutcome w{start, start, 0, l.fitness(u), l.fitness(u)};
  while (!l.is_sink(u)) {
    const auto up = l.out_edges(u);
    u = up[rng.below(up.size())];
    ++w.steps;
  }
  w.endpoint = l.code(u);
  w.endpoint_fitness = l.fitness(u);
  return w;
}

/// Shortest accessible distance to `target` for every node that can reach it
/// by strictly increasing steps; unreachable nodes get `kUnreachable`.
inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

inline std::vector<std::uint32_t> accessible_distances(const Landscape& l, NodeId target) {
  std::vector<std::uint32_t> dist(l.size(), kUnreachable);
  std::vector<NodeId> frontier{target};
  dist[target] = 0;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const NodeId v = frontier[head];
    for (auto u : l.in_edges(v)) {
      if (dist[u] != kUnreachable) continue;
      dist[u] = dist[v] + 1;
      frontier.push_back(u);
    }
  }
  return dist;
}

/// All ancestors of a sink (including itself), ascending node id.
inline std::vector<NodeId> accessible_basin(const Landscape& l, NodeId optimum) {
  if (!l.is_sink(optimum))
    throw Error(ErrorCode::NotAnOptimum, "node " + std::to_string(optimum) + " has a fitter neighbour");
  std::vector<char> seen(l.size(), 0);
  std::vector<NodeId> basin{optimum};
  seen[optimum] = 1;
  for (std::size_t head = 0; head < basin.size(); ++head)
    for (auto u : l.in_edges(basin[head]))
      if (!seen[u]) {
        seen[u] = 1;
        basin.push_back(u);
      }
  std::sort(basin.begin(), basin.end());
  return basin;
}

inline std::size_t accessible_basin_size(const Landscape& l, NodeId optimum) {
  return accessible_basin(l, optimum).size();
}

/// Greedy endpoint of every node. Successors are computed independently;
/// endpoints are resolved from the fittest nodes down, since a successor is
/// always strictly fitter.
inline std::vector<NodeId> greedy_endpoints(const Landscape& l) {
  const std::size_t n = l.size();
  std::vector<NodeId> succ(n);
  for_each_block(n, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t u = begin; u < end; ++u) succ[u] = greedy_step(l, static_cast<NodeId>(u));
  });
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  const auto f = l.fitness();
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return f[a] > f[b]; });
  std::vector<NodeId> endpoint(n);
  for (auto u : order) endpoint[u] = succ[u] == u ? u : endpoint[succ[u]];
  return endpoint;
}

/// Greedy basin size per local optimum; sizes sum to the node count.
inline std::map<NodeId, std::size_t> greedy_basins(const Landscape& l) {
  std::map<NodeId, std::size_t> sizes;
  for (auto e : greedy_endpoints(l)) ++sizes[e];
  return sizes;
}

}  // namespace fla
