#pragma once

// Navigability features: fitness-distance correlation, global optimum
// accessibility, basin-fitness correlations, evolvability-enhancing mutations,
// neutrality and mean accessible path length.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "fla/landscape.hpp"
#include "fla/parallel.hpp"
#include "fla/rng.hpp"
#include "fla/stats.hpp"
#include "fla/walks.hpp"

namespace fla {

struct NavigabilityReport {
  std::optional<double> fdc;
  double alpha_go = 0.0;
  std::optional<double> bfc_acc;
  std::optional<double> bfc_greedy;
  bool bfc_acc_sampled = false;
  std::optional<double> phi_ee;
  double eta = 0.0;
  double mean_acc_path = 0.0;
  double sigma_used = 0.0;
};

/// Pearson correlation of fitness with Hamming distance to the tie-broken
/// global optimum.
inline std::optional<double> fdc(const Landscape& l) {
  const GenotypeCode best = l.code(global_optimum(l));
  const auto& space = l.space();
  const auto c = map_reduce_blocks(
      l.size(), stats::Correlation{},
      [&](std::size_t begin, std::size_t end) {
        stats::Correlation c;
        for (std::size_t g = begin; g < end; ++g) {
          const auto u = static_cast<NodeId>(g);
          c.add(l.fitness(u), static_cast<double>(space.hamming(l.code(u), best)));
        }
        return c;
      },
      [](stats::Correlation acc, const stats::Correlation& p) {
        acc.merge(p);
        return acc;
      });
  return c.pearson();
}

inline double global_accessibility(const Landscape& l) {
  return static_cast<double>(accessible_basin_size(l, global_optimum(l))) / static_cast<double>(l.size());
}

/// Accessibility measured on data with a fraction `alpha` deleted, divided by
/// the retained fraction and capped at 1. Only a partial correction: deleted
/// nodes also break paths through survivors.
inline double corrected_accessibility(double alpha_go, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be in [0, 1)");
  return std::min(1.0, alpha_go / (1.0 - alpha));
}

enum class BasinMode { Accessible, Greedy };

struct BasinCorrelation {
  std::optional<double> value;
  bool sampled = false;
  std::size_t optima_used = 0;
};

/// Correlation of optimum fitness with basin size across local optima. In
/// accessible mode, at most `max_optima` optima (seeded uniform sample) are
/// expanded.
inline BasinCorrelation basin_fitness_correlation(const Landscape& l, BasinMode mode,
                                                  std::size_t max_optima = 10000, std::uint64_t seed = 0) {
  BasinCorrelation out;
  if (mode == BasinMode::Greedy) {
    stats::Correlation c;
    for (const auto& [opt, size] : greedy_basins(l)) c.add(l.fitness(opt), static_cast<double>(size));
    out.optima_used = c.count();
    out.value = c.pearson();
    return out;
  }
  std::vector<NodeId> optima = local_optima(l).local_optima;
  if (optima.size() > max_optima) {
    rng::Stream rng(seed, 0xbfc);
    rng::shuffle(optima.begin(), optima.end(), rng);
    optima.resize(max_optima);
    std::sort(optima.begin(), optima.end());
    out.sampled = true;
  }
  out.optima_used = optima.size();
  if (optima.size() < 2) return out;
  std::vector<double> sizes(optima.size());
  constexpr std::size_t kOptimaPerBlock = 64;
  for_each_block(
      optima.size(),
      [&](std::size_t, std::size_t begin, std::size_t end) {
        std::vector<std::uint32_t> stamp(l.size(), 0);
        std::vector<NodeId> queue;
        std::uint32_t mark = 0;
        for (std::size_t k = begin; k < end; ++k) {
          ++mark;
          queue.assign(1, optima[k]);
          stamp[optima[k]] = mark;
          for (std::size_t head = 0; head < queue.size(); ++head)
            for (auto u : l.in_edges(queue[head]))
              if (stamp[u] != mark) {
                stamp[u] = mark;
                queue.push_back(u);
              }
          sizes[k] = static_cast<double>(queue.size());
        }
      },
      kOptimaPerBlock);
  stats::Correlation c;
  for (std::size_t k = 0; k < optima.size(); ++k) c.add(l.fitness(optima[k]), sizes[k]);
  out.value = c.pearson();
  return out;
}

namespace detail {

/// Sum and count of present neighbours of u at `locus`. Neighbour slots are
/// grouped by ascending locus.
inline std::pair<double, std::size_t> locus_neighbor_sum(const Landscape& l, NodeId u, std::uint16_t locus) {
  const auto nb = l.neighbors(u);
  const auto loci = l.neighbor_loci(u);
  const auto lo = std::lower_bound(loci.begin(), loci.end(), locus);
  const auto hi = std::upper_bound(lo, loci.end(), locus);
  double s = 0;
  for (auto it = lo; it != hi; ++it) s += l.fitness(nb[static_cast<std::size_t>(it - loci.begin())]);
  return {s, static_cast<std::size_t>(hi - lo)};
}

inline bool strictly_greater(double lhs, double rhs) {
  // Relative slack of a few ulps so that equal quantities computed along
  // different summation orders do not register as an increase.
  return lhs - rhs > 1e-12 * (std::abs(lhs) + std::abs(rhs));
}

}  // namespace detail

struct EvolvabilityCounts {
  std::size_t evaluated = 0;
  std::size_t enhancing = 0;
};

/// Fraction of evaluated mutations that are evolvability-enhancing. Beneficial
/// mutations (s > σ) must raise the mean effect of subsequent mutations at
/// other loci; σ-neutral ones (|s| < σ) must raise the mean fitness of those
/// mutants. Mutations whose endpoints lack other-locus neighbours are skipped.
inline EvolvabilityCounts evolvability_counts(const Landscape& l, double sigma) {
  const std::size_t n = l.size();
  std::vector<double> nb_sum(n, 0.0);
  for_each_block(n, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t g = begin; g < end; ++g)
      for (auto v : l.neighbors(static_cast<NodeId>(g))) nb_sum[g] += l.fitness(v);
  });
  return map_reduce_blocks(
      n, EvolvabilityCounts{},
      [&](std::size_t begin, std::size_t end) {
        EvolvabilityCounts c;
        for (std::size_t g = begin; g < end; ++g) {
          const auto u = static_cast<NodeId>(g);
          const auto nb = l.neighbors(u);
          const auto loci = l.neighbor_loci(u);
          const double fu = l.fitness(u);
          for (std::size_t k = 0; k < nb.size(); ++k) {
            const NodeId v = nb[k];
            const double s = l.fitness(v) - fu;
            const bool beneficial = s > sigma;
            const bool neutral = std::abs(s) < sigma;
            if (!beneficial && !neutral) continue;
            const auto [su, cu] = detail::locus_neighbor_sum(l, u, loci[k]);
            const auto [sv, cv] = detail::locus_neighbor_sum(l, v, loci[k]);
            const std::size_t others_u = nb.size() - cu;
            const std::size_t others_v = l.neighbors(v).size() - cv;
            if (others_u == 0 || others_v == 0) continue;
            const double mean_u = (nb_sum[u] - su) / static_cast<double>(others_u);
            const double mean_v = (nb_sum[v] - sv) / static_cast<double>(others_v);
            ++c.evaluated;
            const bool enhancing = beneficial ? detail::strictly_greater(mean_v - l.fitness(v), mean_u - fu)
                                              : detail::strictly_greater(mean_v, mean_u);
            c.enhancing += enhancing;
          }
        }
        return c;
      },
      [](EvolvabilityCounts acc, const EvolvabilityCounts& p) {
        acc.evaluated += p.evaluated;
        acc.enhancing += p.enhancing;
        return acc;
      });
}

inline std::optional<double> ee_fraction(const Landscape& l, double sigma) {
  const auto c = evolvability_counts(l, sigma);
  if (c.evaluated == 0) return std::nullopt;
  return static_cast<double>(c.enhancing) / static_cast<double>(c.evaluated);
}

/// Mean over nodes with neighbours of the fraction of σ-neutral neighbours.
inline double neutrality(const Landscape& l, double sigma) {
  struct Acc {
    double sum = 0;
    std::size_t nodes = 0;
  };
  const auto a = map_reduce_blocks(
      l.size(), Acc{},
      [&](std::size_t begin, std::size_t end) {
        Acc a;
        for (std::size_t g = begin; g < end; ++g) {
          const auto u = static_cast<NodeId>(g);
          const auto nb = l.neighbors(u);
          if (nb.empty()) continue;
          std::size_t neutral = 0;
          for (auto v : nb) neutral += std::abs(l.fitness(v) - l.fitness(u)) < sigma;
          a.sum += static_cast<double>(neutral) / static_cast<double>(nb.size());
          ++a.nodes;
        }
        return a;
      },
      [](Acc acc, const Acc& p) {
        acc.sum += p.sum;
        acc.nodes += p.nodes;
        return acc;
      });
  return a.nodes ? a.sum / static_cast<double>(a.nodes) : 0.0;
}

struct AccessiblePaths {
  double mean_accessible = 0.0;  // mean shortest accessible path over the basin
  double mean_hamming = 0.0;     // mean Hamming distance over the same basin
  std::size_t basin_size = 0;
};

inline AccessiblePaths accessible_paths(const Landscape& l) {
  const NodeId best = global_optimum(l);
  const auto dist = accessible_distances(l, best);
  AccessiblePaths out;
  double acc = 0, ham = 0;
  for (NodeId u = 0; u < l.size(); ++u) {
    if (dist[u] == kUnreachable) continue;
    ++out.basin_size;
    acc += dist[u];
    ham += static_cast<double>(l.space().hamming(l.code(u), l.code(best)));
  }
  out.mean_accessible = acc / static_cast<double>(out.basin_size);
  out.mean_hamming = ham / static_cast<double>(out.basin_size);
  return out;
}

inline double mean_accessible_path_length(const Landscape& l) { return accessible_paths(l).mean_accessible; }

}  // namespace fla
