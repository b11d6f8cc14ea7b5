#pragma once

// Sequence spaces with per-locus alphabets and the mixed-radix genotype codec.
//
// A genotype is stored as a single unsigned integer: digit i is the allele
// index at locus i in base m_i, locus 0 least significant. Symbol vectors only
// exist at the I/O boundary.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fla/error.hpp"

namespace fla {

using GenotypeCode = std::uint64_t;

enum class AlphabetPreset { Binary, Dna, Rna, Protein };

inline std::vector<std::string> preset_symbols(AlphabetPreset preset) {
  std::string_view letters;
  switch (preset) {
    case AlphabetPreset::Binary: letters = "01"; break;
    case AlphabetPreset::Dna: letters = "ACGT"; break;
    case AlphabetPreset::Rna: letters = "ACGU"; break;
    case AlphabetPreset::Protein: letters = "ACDEFGHIKLMNPQRSTVWY"; break;
  }
  std::vector<std::string> out;
  for (char c : letters) out.emplace_back(1, c);
  return out;
}

class SequenceSpace {
 public:
  SequenceSpace() = default;

  explicit SequenceSpace(std::vector<std::vector<std::string>> alphabets)
      : alphabets_(std::move(alphabets)) {
    if (alphabets_.empty()) throw Error(ErrorCode::InvalidArgument, "sequence space needs at least one locus");
    if (alphabets_.size() > std::numeric_limits<std::uint16_t>::max())
      throw Error(ErrorCode::InvalidArgument, "too many loci");
    constexpr GenotypeCode kLimit = GenotypeCode{1} << 63;
    GenotypeCode total = 1;
    strides_.reserve(alphabets_.size());
    for (std::size_t i = 0; i < alphabets_.size(); ++i) {
      const auto& a = alphabets_[i];
      if (a.size() < 2)
        throw Error(ErrorCode::InvalidArgument, "locus " + std::to_string(i) + " has fewer than 2 alleles");
      std::set<std::string> distinct(a.begin(), a.end());
      if (distinct.size() != a.size())
        throw Error(ErrorCode::InvalidArgument, "duplicate allele symbol at locus " + std::to_string(i));
      strides_.push_back(total);
      if (total > kLimit / a.size())
        throw Error(ErrorCode::SpaceTooLarge, "genotype space exceeds 2^63 codes");
      total *= a.size();
      radix_.push_back(static_cast<std::uint32_t>(a.size()));
    }
    total_ = total;
  }

  static SequenceSpace preset(AlphabetPreset preset, std::size_t loci) {
    return SequenceSpace(std::vector<std::vector<std::string>>(loci, preset_symbols(preset)));
  }

  /// Space with m_i alleles per locus, symbols "0".."9","A".."Z".
  static SequenceSpace with_sizes(std::span<const std::uint32_t> sizes) {
    static constexpr std::string_view kDigits = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";
    std::vector<std::vector<std::string>> alphabets;
    for (auto m : sizes) {
      if (m > kDigits.size())
        throw Error(ErrorCode::InvalidArgument, "generated alphabets support at most 36 alleles per locus");
      std::vector<std::string> a;
      for (std::uint32_t k = 0; k < m; ++k) a.emplace_back(1, kDigits[k]);
      alphabets.push_back(std::move(a));
    }
    return SequenceSpace(std::move(alphabets));
  }

  std::size_t loci() const { return alphabets_.size(); }
  std::uint32_t radix(std::size_t locus) const { return radix_[locus]; }
  std::span<const std::uint32_t> radices() const { return radix_; }
  GenotypeCode stride(std::size_t locus) const { return strides_[locus]; }
  GenotypeCode total_size() const { return total_; }
  const std::vector<std::vector<std::string>>& alphabets() const { return alphabets_; }
  const std::vector<std::string>& alphabet(std::size_t locus) const { return alphabets_[locus]; }

  /// Σ(m_i − 1): neighbour count of every genotype in the complete space.
  std::size_t neighborhood_size() const {
    std::size_t s = 0;
    for (auto m : radix_) s += m - 1;
    return s;
  }

  bool single_char_symbols() const {
    for (const auto& a : alphabets_)
      for (const auto& s : a)
        if (s.size() != 1) return false;
    return true;
  }

  void check(GenotypeCode code) const {
    if (code >= total_) throw Error(ErrorCode::CodeOutOfRange, "code " + std::to_string(code));
  }

  std::uint32_t digit(GenotypeCode code, std::size_t locus) const {
    return static_cast<std::uint32_t>((code / strides_[locus]) % radix_[locus]);
  }

  GenotypeCode with_digit(GenotypeCode code, std::size_t locus, std::uint32_t allele) const {
    const auto current = digit(code, locus);
    return code - current * strides_[locus] + allele * strides_[locus];
  }

  std::vector<std::uint32_t> digits(GenotypeCode code) const {
    check(code);
    std::vector<std::uint32_t> out(loci());
    for (std::size_t i = 0; i < loci(); ++i) {
      out[i] = static_cast<std::uint32_t>(code % radix_[i]);
      code /= radix_[i];
    }
    return out;
  }

  GenotypeCode from_digits(std::span<const std::uint32_t> d) const {
    if (d.size() != loci()) throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(loci()) + " loci");
    GenotypeCode code = 0;
    for (std::size_t i = 0; i < loci(); ++i) {
      if (d[i] >= radix_[i]) throw Error(ErrorCode::UnknownAllele, "allele index out of range at locus " + std::to_string(i));
      code += d[i] * strides_[i];
    }
    return code;
  }

  std::uint32_t allele_index(std::size_t locus, std::string_view symbol) const {
    const auto& a = alphabets_[locus];
    const auto it = std::find(a.begin(), a.end(), symbol);
    if (it == a.end())
      throw Error(ErrorCode::UnknownAllele,
                  "symbol '" + std::string(symbol) + "' at locus " + std::to_string(locus));
    return static_cast<std::uint32_t>(it - a.begin());
  }

  GenotypeCode encode(std::span<const std::string> alleles) const {
    if (alleles.size() != loci())
      throw Error(ErrorCode::LengthMismatch,
                  "expected " + std::to_string(loci()) + " alleles, got " + std::to_string(alleles.size()));
    GenotypeCode code = 0;
    for (std::size_t i = 0; i < loci(); ++i) code += allele_index(i, alleles[i]) * strides_[i];
    return code;
  }

  /// Plain string form, one character per locus.
  GenotypeCode encode(std::string_view sequence) const {
    std::vector<std::string> alleles;
    alleles.reserve(sequence.size());
    for (char c : sequence) alleles.emplace_back(1, c);
    return encode(alleles);
  }

  std::vector<std::string> decode(GenotypeCode code) const {
    check(code);
    std::vector<std::string> out;
    out.reserve(loci());
    for (std::size_t i = 0; i < loci(); ++i) {
      out.push_back(alphabets_[i][code % radix_[i]]);
      code /= radix_[i];
    }
    return out;
  }

  /// Symbols joined with `delimiter` (empty for one-character alphabets).
  std::string to_string(GenotypeCode code, std::string_view delimiter = {}) const {
    std::string s;
    const auto parts = decode(code);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i > 0) s += delimiter;
      s += parts[i];
    }
    return s;
  }

  std::size_t hamming(GenotypeCode a, GenotypeCode b) const {
    check(a);
    check(b);
    std::size_t d = 0;
    for (std::size_t i = 0; i < loci(); ++i) {
      d += (a % radix_[i]) != (b % radix_[i]);
      a /= radix_[i];
      b /= radix_[i];
    }
    return d;
  }

  /// All Σ(m_i − 1) single-mutation neighbours, locus-major then allele order.
  std::vector<GenotypeCode> neighbors(GenotypeCode code) const {
    check(code);
    std::vector<GenotypeCode> out;
    out.reserve(neighborhood_size());
    for_each_neighbor(code, [&](GenotypeCode v, std::size_t, std::uint32_t) { out.push_back(v); });
    return out;
  }

  /// fn(neighbour code, locus, new allele index). No range check.
  template <typename Fn>
  void for_each_neighbor(GenotypeCode code, Fn&& fn) const {
    GenotypeCode rest = code;
    for (std::size_t i = 0; i < loci(); ++i) {
      const auto m = radix_[i];
      const auto current = static_cast<std::uint32_t>(rest % m);
      rest /= m;
      const GenotypeCode base = code - current * strides_[i];
      for (std::uint32_t a = 0; a < m; ++a)
        if (a != current) fn(base + a * strides_[i], i, a);
    }
  }

  /// Sequence-lexicographic order: compares allele indices starting at locus 0.
  /// This is the deterministic tie-break used for optima and greedy moves.
  bool lex_less(GenotypeCode a, GenotypeCode b) const {
    for (std::size_t i = 0; i < loci() && a != b; ++i) {
      const auto da = a % radix_[i];
      const auto db = b % radix_[i];
      if (da != db) return da < db;
      a /= radix_[i];
      b /= radix_[i];
    }
    return false;
  }

  friend bool operator==(const SequenceSpace& x, const SequenceSpace& y) {
    return x.alphabets_ == y.alphabets_;
  }

 private:
  std::vector<std::vector<std::string>> alphabets_;
  std::vector<std::uint32_t> radix_;
  std::vector<GenotypeCode> strides_;
  GenotypeCode total_ = 0;
};

}  // namespace fla
