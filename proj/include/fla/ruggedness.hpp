#pragma once

// Ruggedness features: fraction of local optima, roughness/slope ratio,
// random-walk autocorrelation, gamma statistic (d = 1) and neighbour
// fitness correlation.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "fla/landscape.hpp"
#include "fla/parallel.hpp"
#include "fla/regression.hpp"
#include "fla/rng.hpp"
#include "fla/stats.hpp"

namespace fla {

struct RuggednessReport {
  double phi_lo = 0.0;
  std::optional<double> rs_ratio;
  std::optional<double> rho_a;
  std::optional<double> gamma1;
  std::optional<double> nfc;
  std::size_t n_walks = 0;
  std::size_t walk_length = 0;
};

/// Sinks over observed nodes.
inline double fraction_local_optima(const Landscape& l) {
  std::size_t sinks = 0;
  for (NodeId u = 0; u < l.size(); ++u) sinks += l.is_sink(u);
  return static_cast<double>(sinks) / static_cast<double>(l.size());
}

struct RoughnessSlope {
  double roughness = 0.0;
  double slope = 0.0;
  std::optional<double> ratio;
};

/// Additive one-hot OLS: roughness is the residual RMSE, slope the mean
/// absolute non-reference coefficient.
inline RoughnessSlope roughness_slope(const Landscape& l) {
  OneHotDesign design(l.space(), false);
  std::vector<std::uint32_t> scratch;
  const auto fit = fit_indicator_ols(
      l.size(), design.columns(),
      [&](std::size_t r, std::vector<std::uint32_t>& cols) { design.active(l.code(static_cast<NodeId>(r)), cols, scratch); },
      l.fitness());
  RoughnessSlope out;
  out.roughness = fit.rmse;
  double s = 0;
  for (Eigen::Index k = 1; k < fit.beta.size(); ++k) s += std::abs(fit.beta[k]);
  out.slope = s / static_cast<double>(design.main_columns());
  if (out.slope <= stats::kDegenerate) return out;
  out.ratio = out.roughness <= stats::kDegenerate ? 0.0 : out.roughness / out.slope;
  return out;
}

inline std::optional<double> rs_ratio(const Landscape& l) { return roughness_slope(l).ratio; }

/// Lag-1 autocorrelation of fitness along fitness-blind random walks. Walk w
/// uses seed + w. All adjacent pairs are pooled; the mean and variance are
/// taken over every visited step.
inline std::optional<double> autocorrelation(const Landscape& l, std::size_t n_walks, std::size_t walk_length,
                                             std::uint64_t seed) {
  bool any_neighbor = false;
  for (NodeId u = 0; u < l.size() && !any_neighbor; ++u) any_neighbor = !l.neighbors(u).empty();
  if (!any_neighbor) throw Error(ErrorCode::NoNeighbors, "no genotype has a present neighbour");

  std::vector<double> a, b;
  a.reserve(n_walks * walk_length);
  b.reserve(n_walks * walk_length);
  for (std::size_t w = 0; w < n_walks; ++w) {
    rng::Stream rng(seed + w, 0xac0f);
    auto u = static_cast<NodeId>(rng.below(l.size()));
    for (std::size_t t = 0; t < walk_length; ++t) {
      const auto nb = l.neighbors(u);
      if (nb.empty()) break;
      const NodeId v = nb[rng.below(nb.size())];
      a.push_back(l.fitness(u));
      b.push_back(l.fitness(v));
      u = v;
    }
  }
  if (a.empty()) return std::nullopt;
  const double pairs = static_cast<double>(a.size());
  double mean = 0;
  for (std::size_t k = 0; k < a.size(); ++k) mean += a[k] + b[k];
  mean /= 2 * pairs;
  double cov = 0, var = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    cov += (a[k] - mean) * (b[k] - mean);
    var += (a[k] - mean) * (a[k] - mean) + (b[k] - mean) * (b[k] - mean);
  }
  cov /= pairs;
  var /= 2 * pairs;
  if (var <= stats::kDegenerate) return std::nullopt;
  return std::clamp(cov / var, -1.0, 1.0);
}

/// Aggregate gamma for single-step backgrounds: Σ s_j(g)·s_j(g_[i]) / Σ s_j(g)²
/// over every background g, mutated locus j with target allele, and background
/// change at locus i ≠ j to any other allele, where all four genotypes exist.
inline std::optional<double> gamma1(const Landscape& l) {
  if (l.space().loci() < 2) throw Error(ErrorCode::SingleLocus, "gamma needs at least two loci");
  struct Sums {
    double num = 0, den = 0;
  };
  const auto total = map_reduce_blocks(
      l.size(), Sums{},
      [&](std::size_t begin, std::size_t end) {
        Sums s;
        for (std::size_t g = begin; g < end; ++g) {
          const auto u = static_cast<NodeId>(g);
          const auto nb = l.neighbors(u);
          const auto loci = l.neighbor_loci(u);
          const double fg = l.fitness(u);
          const GenotypeCode cg = l.code(u);
          for (std::size_t a = 0; a < nb.size(); ++a) {
            const double sj = l.fitness(nb[a]) - fg;
            const GenotypeCode cv = l.code(nb[a]);
            for (std::size_t b = 0; b < nb.size(); ++b) {
              if (loci[b] == loci[a]) continue;
              const GenotypeCode cw = l.code(nb[b]);
              const auto x = l.find(cv + cw - cg);
              if (!x) continue;
              s.num += sj * (l.fitness(*x) - l.fitness(nb[b]));
              s.den += sj * sj;
            }
          }
        }
        return s;
      },
      [](Sums acc, Sums p) {
        acc.num += p.num;
        acc.den += p.den;
        return acc;
      });
  if (total.den <= stats::kDegenerate) return std::nullopt;
  return std::clamp(total.num / total.den, -1.0, 1.0);
}

/// Pearson correlation of f(g) with the mean fitness of g's present
/// neighbours; isolated nodes are excluded.
inline std::optional<double> neighbor_fitness_correlation(const Landscape& l) {
  const auto c = map_reduce_blocks(
      l.size(), stats::Correlation{},
      [&](std::size_t begin, std::size_t end) {
        stats::Correlation c;
        for (std::size_t g = begin; g < end; ++g) {
          const auto nb = l.neighbors(static_cast<NodeId>(g));
          if (nb.empty()) continue;
          double s = 0;
          for (auto v : nb) s += l.fitness(v);
          c.add(l.fitness(static_cast<NodeId>(g)), s / static_cast<double>(nb.size()));
        }
        return c;
      },
      [](stats::Correlation acc, const stats::Correlation& p) {
        acc.merge(p);
        return acc;
      });
  return c.pearson();
}

struct RuggednessOptions {
  std::size_t n_walks = 1000;
  std::optional<std::size_t> walk_length;  // defaults to the number of loci
  std::uint64_t seed = 0;
};

inline RuggednessReport ruggedness(const Landscape& l, const RuggednessOptions& options = {}) {
  RuggednessReport r;
  r.phi_lo = fraction_local_optima(l);
  try {
    r.rs_ratio = rs_ratio(l);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateFit) throw;
  }
  r.n_walks = options.n_walks;
  r.walk_length = options.walk_length.value_or(l.space().loci());
  try {
    r.rho_a = autocorrelation(l, r.n_walks, r.walk_length, options.seed);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoNeighbors) throw;
  }
  if (l.space().loci() >= 2) r.gamma1 = gamma1(l);
  r.nfc = neighbor_fitness_correlation(l);
  return r;
}

}  // namespace fla
