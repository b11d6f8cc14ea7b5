#pragma once

// Data perturbations for robustness studies: random deletion, Gaussian
// fitness noise and biased random-mutagenesis libraries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_set>
#include <vector>

#include "fla/landscape.hpp"
#include "fla/rng.hpp"
#include "fla/stats.hpp"
#include "fla/walks.hpp"

namespace fla {

enum class PerturbKind { Missing, Noise, Biased };

struct PerturbSpec {
  PerturbKind kind = PerturbKind::Missing;
  double alpha = 0.0;       // missing: deletion fraction in [0, 1)
  bool keep_global = true;  // missing: never delete the global optimum
  double beta = 0.0;        // noise: sd multiplier of the fitness sd
  GenotypeCode focal = 0;   // biased: mutagenesis origin
  double rate = 0.1;        // biased: per-site substitution probability
  std::size_t draws = 1;    // biased: number of mutagenesis draws
  std::uint64_t seed = 0;
};

/// Deletes ⌊α·N⌋ nodes uniformly without replacement. For a fixed seed the
/// deleted sets are nested in α.
inline Landscape subsample(const Landscape& l, double alpha, std::uint64_t seed, bool keep_global = true) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be in [0, 1)");
  const auto remove = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(l.size())));
  std::vector<NodeId> order(l.size());
  std::iota(order.begin(), order.end(), NodeId{0});
  if (keep_global) {
    const NodeId best = global_optimum(l);
    order.erase(order.begin() + best);
  }
  rng::Stream rng(seed, 0xde1);
  rng::shuffle(order.begin(), order.end(), rng);
  std::vector<char> drop(l.size(), 0);
  for (std::size_t k = 0; k < std::min(remove, order.size()); ++k) drop[order[k]] = 1;
  std::vector<NodeId> keep;
  keep.reserve(l.size() - remove);
  for (NodeId u = 0; u < l.size(); ++u)
    if (!drop[u]) keep.push_back(u);
  return l.induced(keep);
}

/// Adds N(0, (β·σ_f)²) to every fitness, σ_f the population sd of fitness.
/// Noise for a genotype is keyed by its code.
inline Landscape add_noise(const Landscape& l, double beta, std::uint64_t seed) {
  if (!(beta >= 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be >= 0");
  std::vector<double> f(l.fitness().begin(), l.fitness().end());
  const double sd = std::sqrt(stats::variance(f));
  if (beta > 0.0 && sd > 0.0) {
    const rng::Keyed noise{seed, 0x401};
    for (NodeId u = 0; u < l.size(); ++u) f[u] += noise.normal(l.code(u), 0.0, beta * sd);
  }
  return l.with_fitness(std::move(f));
}

struct BiasedLibrary {
  Landscape landscape;
  std::size_t library_size = 0;  // unique observed variants, focal included
  std::size_t unique_draws = 0;  // unique genotypes drawn, observed or not
};

/// `draws` independent mutagenesis draws from `focal`: each site mutates with
/// probability `rate` to a uniformly chosen other allele. The library is the
/// set of drawn genotypes present in `l`, plus the focal genotype.
inline BiasedLibrary biased_sample(const Landscape& l, GenotypeCode focal, double rate, std::size_t draws,
                                   std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw Error(ErrorCode::InvalidArgument, "rate must be in [0, 1]");
  if (draws == 0) throw Error(ErrorCode::InvalidArgument, "draws must be >= 1");
  if (!l.find(focal)) throw Error(ErrorCode::FocalNotFound, "focal genotype not in landscape");
  const auto& space = l.space();
  rng::Stream rng(seed, 0xb1a5);
  std::unordered_set<GenotypeCode> drawn{focal};
  for (std::size_t d = 0; d < draws; ++d) {
    GenotypeCode g = focal;
    for (std::size_t i = 0; i < space.loci(); ++i) {
      if (!rng.bernoulli(rate)) continue;
      const auto current = space.digit(focal, i);
      auto other = static_cast<std::uint32_t>(rng.below(space.radix(i) - 1));
      if (other >= current) ++other;
      g = space.with_digit(g, i, other);
    }
    drawn.insert(g);
  }
  std::vector<NodeId> keep;
  for (auto code : drawn)
    if (auto u = l.find(code)) keep.push_back(*u);
  std::sort(keep.begin(), keep.end());
  BiasedLibrary out{l.induced(keep), keep.size(), drawn.size()};
  return out;
}

inline Landscape perturb(const Landscape& l, const PerturbSpec& spec) {
  switch (spec.kind) {
    case PerturbKind::Missing: return subsample(l, spec.alpha, spec.seed, spec.keep_global);
    case PerturbKind::Noise: return add_noise(l, spec.beta, spec.seed);
    case PerturbKind::Biased: return biased_sample(l, spec.focal, spec.rate, spec.draws, spec.seed).landscape;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown perturbation");
}

}  // namespace fla
