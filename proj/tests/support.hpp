#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fla/fla.hpp"

namespace testing {

using Table = std::vector<std::pair<std::string, double>>;

inline std::vector<fla::VariantRecord> records(const Table& rows) {
  std::vector<fla::VariantRecord> out;
  for (const auto& [seq, f] : rows) {
    fla::VariantRecord r;
    for (char c : seq) r.alleles.emplace_back(1, c);
    r.fitness = f;
    out.push_back(std::move(r));
  }
  return out;
}

/// Binary landscape from sequence strings, locus 0 first.
inline fla::Landscape binary(const Table& rows) {
  return fla::Landscape::build(fla::ingest(records(rows), {fla::AlphabetPreset::Binary}));
}

// Hand-worked micro landscapes.
inline fla::Landscape L1() { return binary({{"00", 0.0}, {"01", 1.0}, {"10", 1.0}, {"11", 0.5}}); }
inline fla::Landscape L2() { return binary({{"00", 0.0}, {"01", 1.0}, {"10", 2.0}, {"11", 3.0}}); }
inline fla::Landscape L5() { return binary({{"00", 0.0}, {"01", 1.0}, {"10", 2.0}, {"11", 5.0}}); }
inline fla::Landscape L6() { return binary({{"00", 2.0}, {"01", 0.0}, {"10", 1.0}, {"11", 3.0}}); }
inline fla::Landscape L7() { return binary({{"00", 0.0}, {"01", 1.0}, {"10", 0.5}, {"11", 3.0}}); }
inline fla::Landscape L8() { return binary({{"00", 0.0}, {"01", 0.05}, {"10", 1.0}, {"11", 1.02}}); }
inline fla::Landscape constant2() { return binary({{"00", 1.0}, {"01", 1.0}, {"10", 1.0}, {"11", 1.0}}); }

inline fla::GenotypeCode code(const fla::Landscape& l, const std::string& seq) { return l.space().encode(seq); }
inline fla::NodeId node(const fla::Landscape& l, const std::string& seq) { return l.node(code(l, seq)); }

/// Random landscape over a mixed-radix space with roughly `completeness` of
/// all genotypes present. Fitness is drawn from a handful of levels so ties
/// occur.
inline fla::Landscape random_landscape(std::uint64_t seed, const std::vector<std::uint32_t>& sizes,
                                       double completeness, int levels = 0) {
  const auto space = fla::SequenceSpace::with_sizes(sizes);
  fla::rng::Stream rng(seed, 77);
  std::vector<fla::GenotypeCode> codes;
  std::vector<double> fitness;
  for (fla::GenotypeCode g = 0; g < space.total_size(); ++g) {
    if (completeness < 1.0 && rng.uniform() >= completeness) continue;
    codes.push_back(g);
    fitness.push_back(levels > 0 ? static_cast<double>(rng.below(static_cast<std::uint64_t>(levels)))
                                 : rng.normal(0.0, 1.0));
  }
  if (codes.empty()) {
    codes.push_back(0);
    fitness.push_back(0.0);
  }
  return fla::Landscape::from_codes(space, std::move(codes), std::move(fitness));
}

/// Affine copy a*f + b.
inline fla::Landscape affine(const fla::Landscape& l, double a, double b) {
  std::vector<double> f(l.fitness().begin(), l.fitness().end());
  for (auto& x : f) x = a * x + b;
  return l.with_fitness(std::move(f));
}

}  // namespace testing
