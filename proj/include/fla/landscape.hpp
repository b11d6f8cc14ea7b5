#pragma once

// Landscape construction: record ingestion, space inference, and the
// immutable directed variant graph.
//
// Nodes are kept sorted by genotype code, so a NodeId is the rank of the
// code among observed variants. Three adjacency lists are stored in
// compressed sparse form:
//   neighbours  every present single-mutation neighbour (with its locus)
//   out edges   neighbours with strictly higher fitness
//   in edges    neighbours with strictly lower fitness
// Equal-fitness neighbours appear only in the neighbour list.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fla/error.hpp"
#include "fla/parallel.hpp"
#include "fla/sequence_space.hpp"

namespace fla {

using NodeId = std::uint32_t;

struct VariantRecord {
  std::vector<std::string> alleles;
  double fitness = 0.0;
  std::optional<double> variance;
};

struct IngestOptions {
  /// nullopt: infer each locus alphabet as the sorted set of observed symbols.
  std::optional<AlphabetPreset> preset;
};

struct IngestReport {
  std::size_t input_rows = 0;
  std::size_t unique_records = 0;
  std::size_t duplicates_dropped = 0;
  /// Loci with a single observed symbol (inference only); removed from the space.
  std::vector<std::size_t> dropped_loci;
  std::vector<std::size_t> alphabet_sizes;
  double completeness = 0.0;
};

struct Ingested {
  SequenceSpace space;
  std::vector<VariantRecord> records;
  IngestReport report;
};

inline Ingested ingest(std::vector<VariantRecord> records, const IngestOptions& options = {}) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no records");
  const std::size_t width = records.front().alleles.size();
  if (width == 0) throw Error(ErrorCode::LengthMismatch, "empty sequence in row 0");
  for (std::size_t r = 0; r < records.size(); ++r) {
    if (records[r].alleles.size() != width)
      throw Error(ErrorCode::LengthMismatch, "row " + std::to_string(r) + " has " +
                                                 std::to_string(records[r].alleles.size()) + " loci, expected " +
                                                 std::to_string(width));
    if (!std::isfinite(records[r].fitness))
      throw Error(ErrorCode::NonFiniteFitness, "row " + std::to_string(r));
    if (records[r].variance && !(*records[r].variance >= 0.0 && std::isfinite(*records[r].variance)))
      throw Error(ErrorCode::InvalidArgument, "negative or non-finite variance in row " + std::to_string(r));
  }

  IngestReport report;
  report.input_rows = records.size();

  std::vector<VariantRecord> unique;
  unique.reserve(records.size());
  {
    std::unordered_map<std::string, std::size_t> seen;
    seen.reserve(records.size());
    for (auto& rec : records) {
      std::string key;
      for (const auto& a : rec.alleles) {
        key += a;
        key += '\x1f';
      }
      auto [it, inserted] = seen.emplace(key, unique.size());
      if (inserted) {
        unique.push_back(std::move(rec));
        continue;
      }
      const auto& kept = unique[it->second];
      if (kept.fitness != rec.fitness) {
        std::string seq;
        for (const auto& a : kept.alleles) seq += a;
        throw Error(ErrorCode::ConflictingDuplicate, "sequence " + seq + " has fitness " +
                                                         std::to_string(kept.fitness) + " and " +
                                                         std::to_string(rec.fitness));
      }
      ++report.duplicates_dropped;
    }
  }

  std::vector<std::vector<std::string>> alphabets;
  if (options.preset) {
    alphabets.assign(width, preset_symbols(*options.preset));
  } else {
    std::vector<std::set<std::string>> observed(width);
    for (const auto& rec : unique)
      for (std::size_t i = 0; i < width; ++i) observed[i].insert(rec.alleles[i]);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < width; ++i) {
      if (observed[i].size() < 2) {
        report.dropped_loci.push_back(i);
        continue;
      }
      keep.push_back(i);
      alphabets.emplace_back(observed[i].begin(), observed[i].end());
    }
    if (keep.empty()) throw Error(ErrorCode::NoPolymorphicLoci, "every locus is monomorphic");
    if (!report.dropped_loci.empty()) {
      for (auto& rec : unique) {
        std::vector<std::string> reduced;
        reduced.reserve(keep.size());
        for (auto i : keep) reduced.push_back(std::move(rec.alleles[i]));
        rec.alleles = std::move(reduced);
      }
    }
  }

  SequenceSpace space(std::move(alphabets));
  for (const auto& rec : unique) space.encode(rec.alleles);  // validates symbols against presets

  report.unique_records = unique.size();
  for (std::size_t i = 0; i < space.loci(); ++i) report.alphabet_sizes.push_back(space.radix(i));
  report.completeness = static_cast<double>(unique.size()) / static_cast<double>(space.total_size());
  return {std::move(space), std::move(unique), std::move(report)};
}

/// Maps genotype codes to node ids.
class CodeIndex {
 public:
  CodeIndex() = default;

  CodeIndex(std::span<const GenotypeCode> sorted_codes, GenotypeCode total_size) : codes_(sorted_codes) {
    const auto n = static_cast<GenotypeCode>(sorted_codes.size());
    if (n == total_size) {
      mode_ = Mode::Identity;
    } else if (total_size <= 8 * n + (GenotypeCode{1} << 20)) {
      mode_ = Mode::Dense;
      dense_.assign(static_cast<std::size_t>(total_size), kAbsent);
      for (std::size_t i = 0; i < sorted_codes.size(); ++i)
        dense_[static_cast<std::size_t>(sorted_codes[i])] = static_cast<NodeId>(i);
    } else {
      mode_ = Mode::Sorted;
    }
  }

  std::optional<NodeId> find(GenotypeCode code) const {
    switch (mode_) {
      case Mode::Identity:
        if (code < codes_.size()) return static_cast<NodeId>(code);
        return std::nullopt;
      case Mode::Dense:
        if (code < dense_.size() && dense_[static_cast<std::size_t>(code)] != kAbsent)
          return dense_[static_cast<std::size_t>(code)];
        return std::nullopt;
      case Mode::Sorted: {
        const auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
        if (it != codes_.end() && *it == code) return static_cast<NodeId>(it - codes_.begin());
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

 private:
  enum class Mode { Identity, Dense, Sorted };
  static constexpr NodeId kAbsent = ~NodeId{0};
  std::span<const GenotypeCode> codes_;
  Mode mode_ = Mode::Sorted;
  std::vector<NodeId> dense_;
};

/// Compressed sparse adjacency.
struct Csr {
  std::vector<std::uint64_t> offsets{0};
  std::vector<NodeId> targets;

  std::span<const NodeId> row(NodeId u) const {
    return {targets.data() + offsets[u], targets.data() + offsets[u + 1]};
  }
  std::size_t size() const { return targets.size(); }
  friend bool operator==(const Csr&, const Csr&) = default;
};

class Landscape {
 public:
  Landscape() = default;
  Landscape(const Landscape&) = delete;
  Landscape& operator=(const Landscape&) = delete;
  Landscape(Landscape&& o) noexcept { *this = std::move(o); }
  Landscape& operator=(Landscape&& o) noexcept {
    space_ = std::move(o.space_);
    codes_ = std::move(o.codes_);
    fitness_ = std::move(o.fitness_);
    variance_ = std::move(o.variance_);
    has_variance_ = o.has_variance_;
    neighbors_ = std::move(o.neighbors_);
    neighbor_locus_ = std::move(o.neighbor_locus_);
    out_ = std::move(o.out_);
    in_ = std::move(o.in_);
    // The index views codes_, whose buffer moved with it.
    index_ = std::move(o.index_);
    return *this;
  }

  /// Builds from codes (any order, unique) and fitness. `variance` is either
  /// empty or parallel to `codes`, NaN marking an absent value.
  static Landscape from_codes(SequenceSpace space, std::vector<GenotypeCode> codes, std::vector<double> fitness,
                              std::vector<double> variance = {}) {
    if (codes.empty()) throw Error(ErrorCode::EmptyInput, "landscape needs at least one node");
    if (codes.size() != fitness.size() || (!variance.empty() && variance.size() != codes.size()))
      throw Error(ErrorCode::LengthMismatch, "codes, fitness and variance lengths differ");
    if (codes.size() >= std::numeric_limits<NodeId>::max())
      throw Error(ErrorCode::SpaceTooLarge, "too many nodes");
    for (std::size_t i = 0; i < codes.size(); ++i) {
      space.check(codes[i]);
      if (!std::isfinite(fitness[i])) throw Error(ErrorCode::NonFiniteFitness, "node " + std::to_string(i));
    }

    Landscape l;
    l.space_ = std::move(space);
    std::vector<std::size_t> order(codes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    if (!std::is_sorted(codes.begin(), codes.end()))
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return codes[a] < codes[b]; });
    l.codes_.resize(codes.size());
    l.fitness_.resize(codes.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      l.codes_[i] = codes[order[i]];
      l.fitness_[i] = fitness[order[i]];
    }
    for (std::size_t i = 1; i < l.codes_.size(); ++i)
      if (l.codes_[i] == l.codes_[i - 1])
        throw Error(ErrorCode::InvalidArgument, "duplicate genotype code " + std::to_string(l.codes_[i]));
    if (!variance.empty()) {
      l.variance_.resize(codes.size());
      for (std::size_t i = 0; i < order.size(); ++i) {
        l.variance_[i] = variance[order[i]];
        if (!std::isnan(l.variance_[i])) l.has_variance_ = true;
      }
      if (!l.has_variance_) l.variance_.clear();
    }
    l.index_ = CodeIndex(l.codes_, l.space_.total_size());
    l.link();
    return l;
  }

  static Landscape build(SequenceSpace space, std::span<const VariantRecord> records) {
    std::vector<GenotypeCode> codes;
    std::vector<double> fitness;
    std::vector<double> variance;
    bool any_variance = false;
    codes.reserve(records.size());
    for (const auto& r : records) {
      codes.push_back(space.encode(r.alleles));
      fitness.push_back(r.fitness);
      any_variance |= r.variance.has_value();
    }
    if (any_variance)
      for (const auto& r : records) variance.push_back(r.variance.value_or(std::nan("")));
    return from_codes(std::move(space), std::move(codes), std::move(fitness), std::move(variance));
  }

  static Landscape build(Ingested ingested) { return build(std::move(ingested.space), ingested.records); }

  /// Induced landscape on a subset of nodes.
  Landscape induced(std::span<const NodeId> keep) const {
    std::vector<GenotypeCode> codes;
    std::vector<double> fitness;
    std::vector<double> variance;
    codes.reserve(keep.size());
    fitness.reserve(keep.size());
    for (auto u : keep) {
      codes.push_back(codes_[u]);
      fitness.push_back(fitness_[u]);
      if (has_variance_) variance.push_back(variance_[u]);
    }
    return from_codes(space_, std::move(codes), std::move(fitness), std::move(variance));
  }

  /// Same genotypes, new fitness values (parallel to node order).
  Landscape with_fitness(std::vector<double> fitness) const {
    std::vector<double> variance = has_variance_ ? variance_ : std::vector<double>{};
    return from_codes(space_, codes_, std::move(fitness), std::move(variance));
  }

  const SequenceSpace& space() const { return space_; }
  std::size_t size() const { return codes_.size(); }
  std::span<const GenotypeCode> codes() const { return codes_; }
  std::span<const double> fitness() const { return fitness_; }
  GenotypeCode code(NodeId u) const { return codes_[u]; }
  double fitness(NodeId u) const { return fitness_[u]; }
  bool has_variance() const { return has_variance_; }
  /// Empty unless has_variance(); NaN where a node has no replicate variance.
  std::span<const double> variance() const { return variance_; }

  std::optional<NodeId> find(GenotypeCode code) const {
    if (code >= space_.total_size()) return std::nullopt;
    return index_.find(code);
  }

  NodeId node(GenotypeCode code) const {
    auto u = find(code);
    if (!u) throw Error(ErrorCode::StartNotFound, "genotype code " + std::to_string(code) + " not in landscape");
    return *u;
  }

  std::span<const NodeId> neighbors(NodeId u) const { return neighbors_.row(u); }
  std::span<const std::uint16_t> neighbor_loci(NodeId u) const {
    return {neighbor_locus_.data() + neighbors_.offsets[u], neighbor_locus_.data() + neighbors_.offsets[u + 1]};
  }
  std::span<const NodeId> out_edges(NodeId u) const { return out_.row(u); }
  std::span<const NodeId> in_edges(NodeId u) const { return in_.row(u); }
  bool is_sink(NodeId u) const { return out_.offsets[u] == out_.offsets[u + 1]; }

  const Csr& out_csr() const { return out_; }
  const Csr& in_csr() const { return in_; }
  const Csr& neighbor_csr() const { return neighbors_; }

  std::size_t edge_count() const { return out_.size(); }
  double completeness() const {
    return static_cast<double>(size()) / static_cast<double>(space_.total_size());
  }

 private:
  struct BlockAdjacency {
    std::vector<std::uint32_t> degree, out_degree, in_degree;
    std::vector<NodeId> neighbors, out, in;
    std::vector<std::uint16_t> loci;
  };

  void link() {
    const std::size_t n = size();
    std::vector<BlockAdjacency> blocks(block_count(n));
    for_each_block(n, [&](std::size_t b, std::size_t begin, std::size_t end) {
      auto& blk = blocks[b];
      const auto span = end - begin;
      blk.degree.resize(span);
      blk.out_degree.resize(span);
      blk.in_degree.resize(span);
      for (std::size_t u = begin; u < end; ++u) {
        std::uint32_t deg = 0, up = 0, down = 0;
        const double fu = fitness_[u];
        space_.for_each_neighbor(codes_[u], [&](GenotypeCode vc, std::size_t locus, std::uint32_t) {
          const auto v = index_.find(vc);
          if (!v) return;
          blk.neighbors.push_back(*v);
          blk.loci.push_back(static_cast<std::uint16_t>(locus));
          ++deg;
          const double fv = fitness_[*v];
          if (fv > fu) {
            blk.out.push_back(*v);
            ++up;
          } else if (fv < fu) {
            blk.in.push_back(*v);
            ++down;
          }
        });
        blk.degree[u - begin] = deg;
        blk.out_degree[u - begin] = up;
        blk.in_degree[u - begin] = down;
      }
    });

    auto assemble = [&](Csr& csr, auto degree_of, auto targets_of) {
      csr.offsets.assign(n + 1, 0);
      std::size_t u = 0;
      for (auto& blk : blocks)
        for (auto d : degree_of(blk)) {
          csr.offsets[u + 1] = csr.offsets[u] + d;
          ++u;
        }
      csr.targets.clear();
      csr.targets.reserve(csr.offsets[n]);
      for (auto& blk : blocks) {
        auto& t = targets_of(blk);
        csr.targets.insert(csr.targets.end(), t.begin(), t.end());
        std::vector<NodeId>().swap(t);
      }
    };
    neighbor_locus_.clear();
    for (auto& blk : blocks) {
      neighbor_locus_.insert(neighbor_locus_.end(), blk.loci.begin(), blk.loci.end());
      std::vector<std::uint16_t>().swap(blk.loci);
    }
    assemble(neighbors_, [](auto& b) -> auto& { return b.degree; }, [](auto& b) -> auto& { return b.neighbors; });
    assemble(out_, [](auto& b) -> auto& { return b.out_degree; }, [](auto& b) -> auto& { return b.out; });
    assemble(in_, [](auto& b) -> auto& { return b.in_degree; }, [](auto& b) -> auto& { return b.in; });
  }

  SequenceSpace space_;
  std::vector<GenotypeCode> codes_;
  std::vector<double> fitness_;
  std::vector<double> variance_;
  bool has_variance_ = false;
  CodeIndex index_;
  Csr neighbors_;
  std::vector<std::uint16_t> neighbor_locus_;
  Csr out_;
  Csr in_;
};

}  // namespace fla
