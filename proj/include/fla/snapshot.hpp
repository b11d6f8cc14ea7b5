#pragma once

// Binary snapshot of a built landscape. All integers and doubles are
// little-endian; the layout is documented in README.md.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fla/error.hpp"
#include "fla/landscape.hpp"

namespace fla {

inline constexpr std::array<char, 8> kSnapshotMagic = {'F', 'L', 'A', 'S', 'N', 'A', 'P', '\0'};
inline constexpr std::uint32_t kSnapshotVersion = 1;

namespace detail {

class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) { put(v); }
  void u64(std::uint64_t v) { put(v); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v)); }
  void bytes(const void* p, std::size_t n) { out_.append(static_cast<const char*>(p), n); }
  const std::string& str() const { return out_; }

 private:
  template <class T>
  void put(T v) {
    for (std::size_t b = 0; b < sizeof(T); ++b) out_.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
  }
  std::string out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}
  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
  std::uint32_t u32() { return get<std::uint32_t>(); }
  std::uint64_t u64() { return get<std::uint64_t>(); }
  double f64() { return std::bit_cast<double>(get<std::uint64_t>()); }
  std::string_view take(std::size_t n) {
    if (n > data_.size() - pos_) throw Error(ErrorCode::CorruptSnapshot, "truncated snapshot");
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == data_.size(); }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  template <class T>
  T get() {
    const auto s = take(sizeof(T));
    T v = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b) v |= static_cast<T>(static_cast<unsigned char>(s[b])) << (8 * b);
    return v;
  }
  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::string snapshot_bytes(const Landscape& l) {
  detail::ByteWriter w;
  w.bytes(kSnapshotMagic.data(), kSnapshotMagic.size());
  w.u32(kSnapshotVersion);
  const auto& space = l.space();
  w.u32(static_cast<std::uint32_t>(space.loci()));
  for (std::size_t i = 0; i < space.loci(); ++i) {
    w.u32(space.radix(i));
    for (const auto& s : space.alphabet(i)) {
      w.u32(static_cast<std::uint32_t>(s.size()));
      w.bytes(s.data(), s.size());
    }
  }
  w.u64(l.size());
  for (NodeId u = 0; u < l.size(); ++u) {
    w.u64(l.code(u));
    w.f64(l.fitness(u));
    const bool has_var = l.has_variance() && !std::isnan(l.variance()[u]);
    w.u8(has_var ? 1 : 0);
    w.f64(has_var ? l.variance()[u] : 0.0);
  }
  const auto& out = l.out_csr();
  for (auto o : out.offsets) w.u64(o);
  for (auto t : out.targets) w.u64(t);
  return w.str();
}

/// Rebuilds the landscape and checks the stored edge array against it.
inline Landscape landscape_from_snapshot(std::string_view data) {
  detail::ByteReader r(data);
  const auto magic = r.take(kSnapshotMagic.size());
  if (std::memcmp(magic.data(), kSnapshotMagic.data(), kSnapshotMagic.size()) != 0)
    throw Error(ErrorCode::CorruptSnapshot, "bad magic");
  if (const auto v = r.u32(); v != kSnapshotVersion)
    throw Error(ErrorCode::CorruptSnapshot, "unsupported snapshot version " + std::to_string(v));
  const auto loci = r.u32();
  if (loci == 0 || loci > r.remaining()) throw Error(ErrorCode::CorruptSnapshot, "bad locus count");
  std::vector<std::vector<std::string>> alphabets(loci);
  for (auto& alphabet : alphabets) {
    const auto m = r.u32();
    if (m > r.remaining()) throw Error(ErrorCode::CorruptSnapshot, "bad alphabet size");
    for (std::uint32_t a = 0; a < m; ++a) alphabet.emplace_back(r.take(r.u32()));
  }
  std::optional<SequenceSpace> space;
  try {
    space.emplace(std::move(alphabets));
  } catch (const Error& e) {
    throw Error(ErrorCode::CorruptSnapshot, std::string("bad alphabet table: ") + e.what());
  }
  const auto nodes = r.u64();
  if (nodes == 0 || nodes > r.remaining() / 25) throw Error(ErrorCode::CorruptSnapshot, "bad node count");
  std::vector<GenotypeCode> codes(nodes);
  std::vector<double> fitness(nodes);
  std::vector<double> variance(nodes, std::nan(""));
  bool any_var = false;
  for (std::size_t u = 0; u < nodes; ++u) {
    codes[u] = r.u64();
    fitness[u] = r.f64();
    const auto flag = r.u8();
    const double v = r.f64();
    if (flag > 1) throw Error(ErrorCode::CorruptSnapshot, "bad variance flag");
    if (flag) {
      variance[u] = v;
      any_var = true;
    }
  }
  if (!std::is_sorted(codes.begin(), codes.end())) throw Error(ErrorCode::CorruptSnapshot, "nodes out of order");
  if (!any_var) variance.clear();
  Landscape l;
  try {
    l = Landscape::from_codes(std::move(*space), std::move(codes), std::move(fitness), std::move(variance));
  } catch (const Error& e) {
    throw Error(ErrorCode::CorruptSnapshot, std::string("bad node array: ") + e.what());
  }
  const auto& out = l.out_csr();
  for (auto o : out.offsets)
    if (r.u64() != o) throw Error(ErrorCode::CorruptSnapshot, "edge offsets do not match the node array");
  for (auto t : out.targets)
    if (r.u64() != t) throw Error(ErrorCode::CorruptSnapshot, "edge targets do not match the node array");
  if (!r.done()) throw Error(ErrorCode::CorruptSnapshot, "trailing bytes");
  return l;
}

inline void write_snapshot(const Landscape& l, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  const auto bytes = snapshot_bytes(l);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

inline Landscape read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return landscape_from_snapshot(data);
}

}  // namespace fla
