#pragma once

// Variant tables as CSV: `sequence,fitness[,variance]`, header required,
// extra columns ignored. Numbers use the C locale regardless of environment.

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fla/error.hpp"
#include "fla/landscape.hpp"

namespace fla {

struct CsvOptions {
  /// Separator between alleles inside the sequence cell. Empty: one
  /// character per locus.
  std::string delimiter;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line, std::string_view sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, next - pos));
    pos = next + sep.size();
  }
}

inline std::optional<double> to_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace detail

inline std::vector<VariantRecord> parse_csv(std::string_view text, const CsvOptions& options = {}) {
  if (options.delimiter == ",") throw Error(ErrorCode::InvalidArgument, "allele delimiter cannot be ','");
  std::vector<VariantRecord> records;
  std::optional<std::size_t> seq_col, fit_col, var_col;
  std::size_t columns = 0;
  bool have_header = false;
  std::size_t width = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split(line, ",");
    if (!have_header) {
      have_header = true;
      columns = cells.size();
      for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto name = detail::trim(cells[c]);
        if (name == "sequence") seq_col = c;
        else if (name == "fitness") fit_col = c;
        else if (name == "variance") var_col = c;
      }
      if (!seq_col) throw Error(ErrorCode::MissingColumn, "missing column 'sequence'");
      if (!fit_col) throw Error(ErrorCode::MissingColumn, "missing column 'fitness'");
      continue;
    }
    const auto where = " on line " + std::to_string(line_no);
    if (cells.size() != columns) throw Error(ErrorCode::RaggedRow, "wrong number of fields" + where);

    VariantRecord rec;
    const auto seq = detail::trim(cells[*seq_col]);
    if (seq.empty()) throw Error(ErrorCode::RaggedRow, "empty sequence" + where);
    if (options.delimiter.empty()) {
      for (char ch : seq) rec.alleles.emplace_back(1, ch);
    } else {
      for (auto a : detail::split(seq, options.delimiter)) rec.alleles.emplace_back(a);
    }
    if (records.empty()) width = rec.alleles.size();
    else if (rec.alleles.size() != width)
      throw Error(ErrorCode::RaggedRow, "sequence has " + std::to_string(rec.alleles.size()) + " loci, expected " +
                                            std::to_string(width) + where);

    const auto fit = detail::to_double(detail::trim(cells[*fit_col]));
    if (!fit) throw Error(ErrorCode::NonNumericFitness, "fitness is not a number" + where);
    if (!std::isfinite(*fit)) throw Error(ErrorCode::NonFiniteFitness, "fitness is not finite" + where);
    rec.fitness = *fit;
    if (var_col) {
      const auto cell = detail::trim(cells[*var_col]);
      if (!cell.empty()) {
        const auto var = detail::to_double(cell);
        if (!var || !std::isfinite(*var) || *var < 0)
          throw Error(ErrorCode::NonNumericFitness, "variance is not a non-negative number" + where);
        rec.variance = *var;
      }
    }
    records.push_back(std::move(rec));
  }
  if (!have_header) throw Error(ErrorCode::EmptyInput, "empty file");
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no data rows");
  return records;
}

inline std::vector<VariantRecord> read_csv(const std::string& path, const CsvOptions& options = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_csv(text, options);
}

/// Allele delimiter used when writing: none for single-character alphabets.
inline std::string default_delimiter(const SequenceSpace& space) { return space.single_char_symbols() ? "" : "|"; }

inline std::string landscape_to_csv(const Landscape& l, std::string_view delimiter) {
  std::string out = l.has_variance() ? "sequence,fitness,variance\n" : "sequence,fitness\n";
  char buf[64];
  for (NodeId u = 0; u < l.size(); ++u) {
    out += l.space().to_string(l.code(u), delimiter);
    out += ',';
    out.append(buf, std::to_chars(buf, buf + sizeof buf, l.fitness(u)).ptr);
    if (l.has_variance()) {
      out += ',';
      if (!std::isnan(l.variance()[u])) out.append(buf, std::to_chars(buf, buf + sizeof buf, l.variance()[u]).ptr);
    }
    out += '\n';
  }
  return out;
}

inline void write_csv(const Landscape& l, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << landscape_to_csv(l, default_delimiter(l.space()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace fla
