#pragma once

// Directed-evolution baseline: batches of adaptive walks scored by the
// fitness percentile of the endpoint.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fla/landscape.hpp"
#include "fla/parallel.hpp"
#include "fla/rng.hpp"
#include "fla/walks.hpp"

namespace fla {

enum class WalkMethod { Greedy, Stochastic };

inline std::string_view to_string(WalkMethod m) { return m == WalkMethod::Greedy ? "greedy" : "stochastic"; }

inline WalkMethod parse_walk_method(std::string_view s) {
  if (s == "greedy") return WalkMethod::Greedy;
  if (s == "stochastic") return WalkMethod::Stochastic;
  throw Error(ErrorCode::InvalidArgument, "unknown walk method '" + std::string(s) + "'");
}

struct DERun {
  GenotypeCode start = 0;
  GenotypeCode endpoint = 0;
  double endpoint_fitness = 0.0;
  double percentile = 0.0;
  std::size_t steps = 0;
};

struct DEResult {
  std::vector<DERun> per_run;
  double mean_percentile = 0.0;
  std::size_t runs = 0;
  WalkMethod method = WalkMethod::Greedy;
};

/// Fraction of nodes whose fitness is ≤ f (max rank for ties), so any
/// endpoint tied with the global maximum scores 1.
class PercentileRank {
 public:
  explicit PercentileRank(std::span<const double> fitness) : sorted_(fitness.begin(), fitness.end()) {
    std::sort(sorted_.begin(), sorted_.end());
  }
  double operator()(double f) const {
    const auto rank = std::upper_bound(sorted_.begin(), sorted_.end(), f) - sorted_.begin();
    return static_cast<double>(rank) / static_cast<double>(sorted_.size());
  }

 private:
  std::vector<double> sorted_;
};

/// Runs one walk per start. Run r uses seed + r for its stochastic choices.
inline DEResult run_de_from(const Landscape& l, WalkMethod method, std::span<const GenotypeCode> starts,
                            std::uint64_t seed) {
  const PercentileRank percentile(l.fitness());
  DEResult out;
  out.method = method;
  out.runs = starts.size();
  out.per_run.resize(starts.size());
  for_each_block(
      starts.size(),
      [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
          const auto w = method == WalkMethod::Greedy ? greedy_walk(l, starts[r]) : stochastic_walk(l, starts[r], seed + r);
          out.per_run[r] = {w.start, w.endpoint, w.endpoint_fitness, percentile(w.endpoint_fitness), w.steps};
        }
      },
      64);
  double total = 0;
  for (const auto& run : out.per_run) total += run.percentile;
  out.mean_percentile = out.runs ? total / static_cast<double>(out.runs) : 0.0;
  return out;
}

/// `runs` walks from uniformly drawn start genotypes.
inline DEResult run_de(const Landscape& l, WalkMethod method, std::size_t runs, std::uint64_t seed) {
  if (runs == 0) throw Error(ErrorCode::InvalidArgument, "runs must be >= 1");
  std::vector<GenotypeCode> starts(runs);
  for (std::size_t r = 0; r < runs; ++r) {
    rng::Stream rng(seed + r, 0xde);
    starts[r] = l.code(static_cast<NodeId>(rng.below(l.size())));
  }
  return run_de_from(l, method, starts, seed);
}

}  // namespace fla
