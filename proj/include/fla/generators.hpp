#pragma once

// Synthetic landscape models: additive, House-of-Cards, Rough Mount Fuji,
// Kauffman NK and eggbox. Every random quantity is a keyed draw, so the
// output depends only on (config, seed) and not on thread scheduling.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fla/error.hpp"
#include "fla/landscape.hpp"
#include "fla/parallel.hpp"
#include "fla/rng.hpp"

namespace fla {

enum class Model { Additive, Hoc, Rmf, Nk, Eggbox };

inline std::string_view to_string(Model m) {
  switch (m) {
    case Model::Additive: return "additive";
    case Model::Hoc: return "hoc";
    case Model::Rmf: return "rmf";
    case Model::Nk: return "nk";
    case Model::Eggbox: return "eggbox";
  }
  return "?";
}

inline Model parse_model(std::string_view s) {
  if (s == "additive") return Model::Additive;
  if (s == "hoc") return Model::Hoc;
  if (s == "rmf") return Model::Rmf;
  if (s == "nk") return Model::Nk;
  if (s == "eggbox") return Model::Eggbox;
  throw Error(ErrorCode::InvalidArgument, "unknown model '" + std::string(s) + "'");
}

enum class NkNeighborhood { Random, Adjacent };

struct GeneratorConfig {
  Model model = Model::Nk;
  std::size_t n = 10;
  /// Per-locus allele counts; empty means binary. NK requires binary loci.
  std::vector<std::uint32_t> alphabet_sizes;
  // additive / RMF: per-allele effects ~ N(mu_a, sigma_a^2)
  double mu_a = 0.0;
  double sigma_a = 1.0;
  // HoC / RMF: i.i.d. genotype term ~ N(0, sigma_hoc^2)
  double sigma_hoc = 1.0;
  // NK
  std::size_t k = 0;
  NkNeighborhood neighborhood = NkNeighborhood::Random;
  // eggbox
  double base = 0.0;
  double amplitude = 1.0;
  std::uint64_t seed = 0;
};

namespace detail {

inline constexpr std::uint64_t kAdditiveStream = 0xadd;
inline constexpr std::uint64_t kHocStream = 0x40c;
inline constexpr std::uint64_t kNkPartnerStream = 0x4e4b;
inline constexpr std::uint64_t kNkTableStream = 0x4e4b0000;
inline constexpr GenotypeCode kMaxGenerated = GenotypeCode{1} << 31;

inline SequenceSpace generator_space(const GeneratorConfig& c) {
  if (c.n == 0) throw Error(ErrorCode::InvalidArgument, "n must be at least 1");
  std::vector<std::uint32_t> sizes = c.alphabet_sizes;
  if (sizes.empty()) sizes.assign(c.n, 2);
  if (sizes.size() != c.n) throw Error(ErrorCode::InvalidArgument, "alphabet_sizes must have n entries");
  return SequenceSpace::with_sizes(sizes);
}

/// Interaction partners per locus for the NK model.
inline std::vector<std::vector<std::size_t>> nk_partners(const GeneratorConfig& c) {
  std::vector<std::vector<std::size_t>> partners(c.n);
  for (std::size_t i = 0; i < c.n; ++i) {
    if (c.neighborhood == NkNeighborhood::Adjacent) {
      for (std::size_t d = 1; d <= c.k; ++d) partners[i].push_back((i + d) % c.n);
      continue;
    }
    std::vector<std::size_t> pool;
    for (std::size_t j = 0; j < c.n; ++j)
      if (j != i) pool.push_back(j);
    rng::Stream rng(c.seed, kNkPartnerStream + i);
    for (std::size_t t = 0; t < c.k; ++t) {
      const auto pick = t + rng.below(pool.size() - t);
      std::swap(pool[t], pool[pick]);
    }
    partners[i].assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(c.k));
  }
  return partners;
}

}  // namespace detail

/// Fitness of every genotype of the configured space, indexed by code.
inline std::vector<double> generate_fitness(const GeneratorConfig& c, const SequenceSpace& space) {
  if (c.sigma_a < 0 || c.sigma_hoc < 0) throw Error(ErrorCode::InvalidArgument, "standard deviations must be >= 0");
  if (space.total_size() > detail::kMaxGenerated)
    throw Error(ErrorCode::SpaceTooLarge, "generated landscapes are limited to 2^31 genotypes");
  const auto total = static_cast<std::size_t>(space.total_size());
  const std::size_t n = space.loci();
  std::vector<double> f(total, 0.0);

  std::vector<std::vector<double>> effects;
  if (c.model == Model::Additive || c.model == Model::Rmf) {
    const rng::Keyed draw{c.seed, detail::kAdditiveStream};
    effects.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      effects[i].assign(space.radix(i), 0.0);
      for (std::uint32_t a = 1; a < space.radix(i); ++a)
        effects[i][a] = draw.normal((std::uint64_t{i} << 8) | a, c.mu_a, c.sigma_a);
    }
  }
  std::vector<std::vector<std::size_t>> partners;
  if (c.model == Model::Nk) {
    for (std::size_t i = 0; i < n; ++i)
      if (space.radix(i) != 2) throw Error(ErrorCode::InvalidArgument, "the NK model requires binary loci");
    if (c.k >= n) throw Error(ErrorCode::InvalidK, "k must be in [0, n-1]");
    partners = detail::nk_partners(c);
  }

  for_each_block(total, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t g = begin; g < end; ++g) {
      const auto code = static_cast<GenotypeCode>(g);
      double value = 0;
      switch (c.model) {
        case Model::Additive:
        case Model::Rmf: {
          GenotypeCode rest = code;
          for (std::size_t i = 0; i < n; ++i) {
            value += effects[i][rest % space.radix(i)];
            rest /= space.radix(i);
          }
          if (c.model == Model::Rmf) value += rng::Keyed{c.seed, detail::kHocStream}.normal(code, 0.0, c.sigma_hoc);
          break;
        }
        case Model::Hoc:
          value = rng::Keyed{c.seed, detail::kHocStream}.normal(code, 0.0, c.sigma_hoc);
          break;
        case Model::Nk: {
          for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t context = (code >> i) & 1u;
            for (std::size_t p = 0; p < partners[i].size(); ++p) context |= ((code >> partners[i][p]) & 1u) << (p + 1);
            value += rng::Keyed{c.seed, detail::kNkTableStream + i}.uniform(context);
          }
          value /= static_cast<double>(n);
          break;
        }
        case Model::Eggbox: {
          std::uint64_t parity = 0;
          GenotypeCode rest = code;
          for (std::size_t i = 0; i < n; ++i) {
            parity += rest % space.radix(i);
            rest /= space.radix(i);
          }
          value = c.base + c.amplitude * static_cast<double>(parity % 2);
          break;
        }
      }
      f[g] = value;
    }
  });
  return f;
}

/// Complete landscape over the configured space.
inline Landscape generate(const GeneratorConfig& c) {
  auto space = detail::generator_space(c);
  auto fitness = generate_fitness(c, space);
  std::vector<GenotypeCode> codes(fitness.size());
  for (std::size_t g = 0; g < codes.size(); ++g) codes[g] = g;
  return Landscape::from_codes(std::move(space), std::move(codes), std::move(fitness));
}

}  // namespace fla
