#pragma once

// Epistasis features: square classification (magnitude / sign / reciprocal
// sign, positive / negative), global epistasis trends, idiosyncrasy index and
// the variance explained by a second-order model.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "fla/landscape.hpp"
#include "fla/parallel.hpp"
#include "fla/regression.hpp"
#include "fla/rng.hpp"
#include "fla/stats.hpp"

namespace fla {

/// One double-mutant square. `background` is the corner carrying the lower
/// allele index at both loci, which makes each geometric square unique.
struct EpistasisSquare {
  NodeId background, mutant_i, mutant_j, double_mutant;
  std::uint16_t locus_i, locus_j;  // locus_i < locus_j
  double epsilon;
};

enum class EpistasisType { None, Magnitude, Sign, ReciprocalSign };

inline EpistasisType classify(double f_g, double f_i, double f_j, double f_ij, double eps_tol) {
  const double eps = f_ij - f_i - f_j + f_g;
  if (std::abs(eps) <= eps_tol) return EpistasisType::None;
  const bool flip_i = (f_i - f_g) * (f_ij - f_j) < 0;
  const bool flip_j = (f_j - f_g) * (f_ij - f_i) < 0;
  if (flip_i && flip_j) return EpistasisType::ReciprocalSign;
  if (flip_i || flip_j) return EpistasisType::Sign;
  return EpistasisType::Magnitude;
}

/// Calls fn(square) for every square with all four corners present.
template <typename Fn>
void for_each_square(const Landscape& l, NodeId g, Fn&& fn) {
  const auto nb = l.neighbors(g);
  const auto loci = l.neighbor_loci(g);
  const GenotypeCode cg = l.code(g);
  const double fg = l.fitness(g);
  for (std::size_t a = 0; a < nb.size(); ++a) {
    const GenotypeCode ci = l.code(nb[a]);
    if (ci < cg) continue;  // higher allele index at the same locus ⇔ larger code
    for (std::size_t b = 0; b < nb.size(); ++b) {
      if (loci[b] <= loci[a]) continue;
      const GenotypeCode cj = l.code(nb[b]);
      if (cj < cg) continue;
      const auto x = l.find(ci + cj - cg);
      if (!x) continue;
      fn(EpistasisSquare{g, nb[a], nb[b], *x, loci[a], loci[b],
                         l.fitness(*x) - l.fitness(nb[a]) - l.fitness(nb[b]) + fg});
    }
  }
}

struct SquareCounts {
  std::size_t total = 0, epistatic = 0, magnitude = 0, sign = 0, reciprocal = 0, positive = 0, negative = 0;

  SquareCounts& operator+=(const SquareCounts& o) {
    total += o.total;
    epistatic += o.epistatic;
    magnitude += o.magnitude;
    sign += o.sign;
    reciprocal += o.reciprocal;
    positive += o.positive;
    negative += o.negative;
    return *this;
  }
};

struct EpistasisReport {
  double eps_mag = 0, eps_sign = 0, eps_reci = 0;
  double eps_pos = 0, eps_neg = 0;
  std::size_t n_squares_total = 0, n_squares_epistatic = 0;
  /// Set when no square is epistatic; the fractions above are then 0.
  bool zero_denominator = false;
  std::optional<double> eps_dr, eps_ic;
  std::optional<double> i_id;
  std::optional<double> eps_pairwise_r2;
  bool pairwise_sampled = false;
};

inline SquareCounts count_squares(const Landscape& l, double eps_tol) {
  return map_reduce_blocks(
      l.size(), SquareCounts{},
      [&](std::size_t begin, std::size_t end) {
        SquareCounts c;
        for (std::size_t g = begin; g < end; ++g)
          for_each_square(l, static_cast<NodeId>(g), [&](const EpistasisSquare& sq) {
            ++c.total;
            const auto type = classify(l.fitness(sq.background), l.fitness(sq.mutant_i), l.fitness(sq.mutant_j),
                                       l.fitness(sq.double_mutant), eps_tol);
            if (type == EpistasisType::None) return;
            ++c.epistatic;
            if (type == EpistasisType::Magnitude) ++c.magnitude;
            if (type == EpistasisType::Sign) ++c.sign;
            if (type == EpistasisType::ReciprocalSign) ++c.reciprocal;
            if (sq.epsilon > 0) ++c.positive;
            else ++c.negative;
          });
        return c;
      },
      [](SquareCounts acc, const SquareCounts& p) { return acc += p; });
}

/// Fractions of each epistasis type over epistatic squares.
inline EpistasisReport classify_squares(const Landscape& l, double eps_tol) {
  if (l.space().loci() < 2) throw Error(ErrorCode::SingleLocus, "square classification needs two loci");
  const auto c = count_squares(l, eps_tol);
  if (c.total == 0) throw Error(ErrorCode::NoCompleteSquares, "no square has all four genotypes present");
  EpistasisReport r;
  r.n_squares_total = c.total;
  r.n_squares_epistatic = c.epistatic;
  if (c.epistatic == 0) {
    r.zero_denominator = true;
    return r;
  }
  const auto d = static_cast<double>(c.epistatic);
  r.eps_mag = static_cast<double>(c.magnitude) / d;
  r.eps_sign = static_cast<double>(c.sign) / d;
  r.eps_reci = static_cast<double>(c.reciprocal) / d;
  r.eps_pos = static_cast<double>(c.positive) / d;
  r.eps_neg = static_cast<double>(c.negative) / d;
  return r;
}

struct GlobalEpistasis {
  std::optional<double> diminishing_returns;  // cor(f(g), s) over s > 0
  std::optional<double> increasing_costs;     // cor(f(g), |s|) over s < 0
};

inline GlobalEpistasis global_epistasis(const Landscape& l) {
  struct Pair {
    stats::Correlation dr, ic;
  };
  const auto p = map_reduce_blocks(
      l.size(), Pair{},
      [&](std::size_t begin, std::size_t end) {
        Pair p;
        for (std::size_t g = begin; g < end; ++g) {
          const double fg = l.fitness(static_cast<NodeId>(g));
          for (auto v : l.neighbors(static_cast<NodeId>(g))) {
            const double s = l.fitness(v) - fg;
            if (s > 0) p.dr.add(fg, s);
            else if (s < 0) p.ic.add(fg, -s);
          }
        }
        return p;
      },
      [](Pair acc, const Pair& p) {
        acc.dr.merge(p.dr);
        acc.ic.merge(p.ic);
        return acc;
      });
  return {p.dr.pearson(), p.ic.pearson()};
}

/// Mean over directed mutation types (locus, a→b) of sd(s over backgrounds) /
/// sd(all s). Types observed in fewer than two backgrounds are skipped;
/// undefined when no type qualifies.
inline std::optional<double> idiosyncrasy_index(const Landscape& l) {
  const auto& space = l.space();
  std::vector<std::size_t> type_offset(space.loci());
  std::size_t types = 0;
  for (std::size_t i = 0; i < space.loci(); ++i) {
    type_offset[i] = types;
    types += std::size_t{space.radix(i)} * space.radix(i);
  }
  auto type_of = [&](NodeId g, NodeId v, std::size_t locus) {
    const auto m = space.radix(locus);
    return type_offset[locus] + std::size_t{space.digit(l.code(g), locus)} * m + space.digit(l.code(v), locus);
  };

  struct Moments {
    std::vector<double> sum, sq;
    std::vector<std::size_t> count;
    double all_sum = 0, all_sq = 0;
    std::size_t all_count = 0;
  };
  auto empty = [&] {
    return Moments{std::vector<double>(types, 0.0), std::vector<double>(types, 0.0),
                   std::vector<std::size_t>(types, 0), 0, 0, 0};
  };
  auto visit = [&](auto&& fn) {
    return [&, fn](std::size_t begin, std::size_t end) {
      Moments m = empty();
      for (std::size_t g = begin; g < end; ++g) {
        const auto u = static_cast<NodeId>(g);
        const auto nb = l.neighbors(u);
        const auto loci = l.neighbor_loci(u);
        for (std::size_t k = 0; k < nb.size(); ++k) fn(m, type_of(u, nb[k], loci[k]), l.fitness(nb[k]) - l.fitness(u));
      }
      return m;
    };
  };
  auto fold = [](Moments acc, const Moments& p) {
    for (std::size_t t = 0; t < acc.sum.size(); ++t) {
      acc.sum[t] += p.sum[t];
      acc.sq[t] += p.sq[t];
      acc.count[t] += p.count[t];
    }
    acc.all_sum += p.all_sum;
    acc.all_sq += p.all_sq;
    acc.all_count += p.all_count;
    return acc;
  };

  // Pass 1: means.
  const auto first = map_reduce_blocks(l.size(), empty(), visit([](Moments& m, std::size_t t, double s) {
                                         m.sum[t] += s;
                                         ++m.count[t];
                                         m.all_sum += s;
                                         ++m.all_count;
                                       }),
                                       fold);
  if (first.all_count == 0) throw Error(ErrorCode::DegenerateVariance, "no single-step mutations observed");
  std::vector<double> type_mean(types, 0.0);
  for (std::size_t t = 0; t < types; ++t)
    if (first.count[t]) type_mean[t] = first.sum[t] / static_cast<double>(first.count[t]);
  const double global_mean = first.all_sum / static_cast<double>(first.all_count);

  // Pass 2: centred second moments.
  const auto second = map_reduce_blocks(l.size(), empty(), visit([&](Moments& m, std::size_t t, double s) {
                                          m.sq[t] += (s - type_mean[t]) * (s - type_mean[t]);
                                          m.all_sq += (s - global_mean) * (s - global_mean);
                                        }),
                                        fold);
  const double global_var = second.all_sq / static_cast<double>(first.all_count);
  if (global_var <= stats::kDegenerate)
    throw Error(ErrorCode::DegenerateVariance, "selection coefficients have zero variance");
  double total = 0;
  std::size_t contributing = 0;
  for (std::size_t t = 0; t < types; ++t) {
    if (first.count[t] < 2) continue;
    total += std::sqrt(second.sq[t] / static_cast<double>(first.count[t])) / std::sqrt(global_var);
    ++contributing;
  }
  if (contributing == 0) return std::nullopt;
  return total / static_cast<double>(contributing);
}

struct PairwiseFit {
  std::optional<double> r_squared;
  bool sampled = false;
  std::size_t rows = 0;
};

/// R² of an OLS model with one-hot main effects and all pairwise products.
/// Above `max_fit_nodes` a seeded uniform subsample is fitted.
inline PairwiseFit pairwise_r2(const Landscape& l, std::size_t max_fit_nodes = 100000, std::uint64_t seed = 0) {
  std::vector<NodeId> rows(l.size());
  std::iota(rows.begin(), rows.end(), NodeId{0});
  PairwiseFit out;
  if (rows.size() > max_fit_nodes) {
    rng::Stream rng(seed, 0x5eed2);
    rng::shuffle(rows.begin(), rows.end(), rng);
    rows.resize(max_fit_nodes);
    std::sort(rows.begin(), rows.end());
    out.sampled = true;
  }
  out.rows = rows.size();
  std::vector<double> y(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) y[r] = l.fitness(rows[r]);
  if (stats::variance(y) <= stats::kDegenerate) return out;
  OneHotDesign design(l.space(), true);
  std::vector<std::uint32_t> scratch;
  const auto fit = fit_indicator_ols(
      rows.size(), design.columns(),
      [&](std::size_t r, std::vector<std::uint32_t>& cols) { design.active(l.code(rows[r]), cols, scratch); }, y);
  out.r_squared = std::clamp(fit.r_squared, 0.0, 1.0);
  return out;
}

}  // namespace fla
