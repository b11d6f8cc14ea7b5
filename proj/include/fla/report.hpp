#pragma once

// The full feature report: computation, JSON / CSV serialisation and parsing.
//
// Every report carries all twenty feature keys. A feature that is undefined on
// the data, or was not requested, is null; requested-but-skipped features are
// listed in `skipped_features`.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fla/epistasis.hpp"
#include "fla/landscape.hpp"
#include "fla/navigability.hpp"
#include "fla/ruggedness.hpp"
#include "fla/stats.hpp"
#include "fla/walks.hpp"

namespace fla {

inline constexpr std::array<std::string_view, 20> kFeatureKeys = {
    "phi_lo", "rs_ratio", "rho_a",     "gamma",    "nfc",       "eps_mag",    "eps_sign",
    "eps_reci", "eps_pos", "eps_neg",  "i_id",     "eps_dr",    "eps_ic",     "eps_pairwise_r2",
    "fdc",    "alpha_go", "bfc_acc",   "bfc_greedy", "phi_ee",  "eta"};

struct FeatureReport {
  std::optional<double> phi_lo, rs_ratio, rho_a, gamma, nfc;
  std::optional<double> eps_mag, eps_sign, eps_reci, eps_pos, eps_neg;
  std::optional<double> i_id, eps_dr, eps_ic, eps_pairwise_r2;
  std::optional<double> fdc, alpha_go, bfc_acc, bfc_greedy, phi_ee, eta;

  std::uint64_t node_count = 0;
  std::uint64_t edge_count = 0;
  double completeness = 0.0;
  std::uint64_t n_local_optima = 0;
  std::uint64_t global_tie_count = 0;
  std::optional<double> mean_acc_path;
  std::optional<double> mean_hamming_to_optimum;  // over the global optimum's accessible basin
  double sigma_used = 0.0;
  double eps_tol_used = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t n_walks = 0;
  std::uint64_t walk_length = 0;
  std::optional<std::uint64_t> n_squares_total;
  std::optional<std::uint64_t> n_squares_epistatic;
  bool sampled_bfc_acc = false;
  bool sampled_eps_pairwise_r2 = false;
  std::string skipped_features;    // ';'-separated, not requested
  std::string undefined_features;  // ';'-separated, requested but undefined on this data

  using Member = std::optional<double> FeatureReport::*;
  static constexpr std::array<Member, 20> kFeatureMembers = {
      &FeatureReport::phi_lo,   &FeatureReport::rs_ratio, &FeatureReport::rho_a,    &FeatureReport::gamma,
      &FeatureReport::nfc,      &FeatureReport::eps_mag,  &FeatureReport::eps_sign, &FeatureReport::eps_reci,
      &FeatureReport::eps_pos,  &FeatureReport::eps_neg,  &FeatureReport::i_id,     &FeatureReport::eps_dr,
      &FeatureReport::eps_ic,   &FeatureReport::eps_pairwise_r2, &FeatureReport::fdc, &FeatureReport::alpha_go,
      &FeatureReport::bfc_acc,  &FeatureReport::bfc_greedy, &FeatureReport::phi_ee, &FeatureReport::eta};

  std::optional<double> feature(std::string_view key) const {
    for (std::size_t k = 0; k < kFeatureKeys.size(); ++k)
      if (kFeatureKeys[k] == key) return this->*kFeatureMembers[k];
    throw Error(ErrorCode::InvalidArgument, "unknown feature '" + std::string(key) + "'");
  }
  std::optional<double>& feature(std::string_view key) {
    for (std::size_t k = 0; k < kFeatureKeys.size(); ++k)
      if (kFeatureKeys[k] == key) return this->*kFeatureMembers[k];
    throw Error(ErrorCode::InvalidArgument, "unknown feature '" + std::string(key) + "'");
  }

  friend bool operator==(const FeatureReport&, const FeatureReport&) = default;
};

struct AnalyzeOptions {
  /// Empty: all features.
  std::set<std::string, std::less<>> features;
  std::optional<double> eps_tol;
  std::optional<double> sigma;
  std::size_t walks = 1000;
  std::optional<std::size_t> walk_length;
  std::uint64_t seed = 0;
  std::size_t max_fit_nodes = 100000;
  std::size_t max_optima = 10000;
};

/// "all" or a comma-separated list of feature keys.
inline std::set<std::string, std::less<>> parse_feature_list(std::string_view list) {
  std::set<std::string, std::less<>> out;
  if (list.empty() || list == "all") return out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const auto comma = list.find(',', pos);
    auto item = list.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      if (std::find(kFeatureKeys.begin(), kFeatureKeys.end(), item) == kFeatureKeys.end())
        throw Error(ErrorCode::InvalidArgument, "unknown feature '" + std::string(item) + "'");
      out.emplace(item);
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

/// Median replicate standard deviation, if any node carries a variance.
inline std::optional<double> median_replicate_sd(const Landscape& l) {
  if (!l.has_variance()) return std::nullopt;
  std::vector<double> sds;
  for (double v : l.variance())
    if (!std::isnan(v)) sds.push_back(std::sqrt(v));
  if (sds.empty()) return std::nullopt;
  return stats::median(std::move(sds));
}

inline FeatureReport analyze(const Landscape& l, const AnalyzeOptions& options = {}) {
  FeatureReport r;
  auto wanted = [&](std::string_view key) { return options.features.empty() || options.features.count(key) > 0; };
  const auto replicate_sd = median_replicate_sd(l);
  r.eps_tol_used = options.eps_tol.value_or(replicate_sd.value_or(1e-9));
  r.sigma_used = options.sigma.value_or(replicate_sd.value_or(0.0));
  r.seed = options.seed;
  r.n_walks = options.walks;
  r.walk_length = options.walk_length.value_or(l.space().loci());
  r.node_count = l.size();
  r.edge_count = l.edge_count();
  r.completeness = l.completeness();
  const auto optima = local_optima(l);
  r.n_local_optima = optima.local_optima.size();
  r.global_tie_count = optima.global_tie_count;

  // Data-dependent failures leave the feature null.
  auto guarded = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      switch (e.code()) {
        case ErrorCode::DegenerateFit:
        case ErrorCode::DegenerateVariance:
        case ErrorCode::NoNeighbors:
        case ErrorCode::SingleLocus:
        case ErrorCode::NoCompleteSquares:
          return;
        default:
          throw;
      }
    }
  };

  if (wanted("phi_lo")) r.phi_lo = static_cast<double>(r.n_local_optima) / static_cast<double>(l.size());
  if (wanted("rs_ratio")) guarded([&] { r.rs_ratio = rs_ratio(l); });
  if (wanted("rho_a")) guarded([&] { r.rho_a = autocorrelation(l, r.n_walks, r.walk_length, options.seed); });
  if (wanted("gamma")) guarded([&] { r.gamma = gamma1(l); });
  if (wanted("nfc")) r.nfc = neighbor_fitness_correlation(l);

  const bool any_squares = wanted("eps_mag") || wanted("eps_sign") || wanted("eps_reci") || wanted("eps_pos") ||
                           wanted("eps_neg");
  if (any_squares)
    guarded([&] {
      const auto e = classify_squares(l, r.eps_tol_used);
      r.n_squares_total = e.n_squares_total;
      r.n_squares_epistatic = e.n_squares_epistatic;
      if (wanted("eps_mag")) r.eps_mag = e.eps_mag;
      if (wanted("eps_sign")) r.eps_sign = e.eps_sign;
      if (wanted("eps_reci")) r.eps_reci = e.eps_reci;
      if (wanted("eps_pos")) r.eps_pos = e.eps_pos;
      if (wanted("eps_neg")) r.eps_neg = e.eps_neg;
    });
  if (wanted("i_id")) guarded([&] { r.i_id = idiosyncrasy_index(l); });
  if (wanted("eps_dr") || wanted("eps_ic")) {
    const auto g = global_epistasis(l);
    if (wanted("eps_dr")) r.eps_dr = g.diminishing_returns;
    if (wanted("eps_ic")) r.eps_ic = g.increasing_costs;
  }
  if (wanted("eps_pairwise_r2"))
    guarded([&] {
      const auto p = pairwise_r2(l, options.max_fit_nodes, options.seed);
      r.eps_pairwise_r2 = p.r_squared;
      r.sampled_eps_pairwise_r2 = p.sampled;
    });

  if (wanted("fdc")) r.fdc = fdc(l);
  if (wanted("alpha_go")) {
    const auto paths = accessible_paths(l);
    r.alpha_go = static_cast<double>(paths.basin_size) / static_cast<double>(l.size());
    r.mean_acc_path = paths.mean_accessible;
    r.mean_hamming_to_optimum = paths.mean_hamming;
  }
  if (wanted("bfc_acc")) {
    const auto b = basin_fitness_correlation(l, BasinMode::Accessible, options.max_optima, options.seed);
    r.bfc_acc = b.value;
    r.sampled_bfc_acc = b.sampled;
  }
  if (wanted("bfc_greedy")) r.bfc_greedy = basin_fitness_correlation(l, BasinMode::Greedy).value;
  if (wanted("phi_ee")) r.phi_ee = ee_fraction(l, r.sigma_used);
  if (wanted("eta")) r.eta = neutrality(l, r.sigma_used);

  for (auto key : kFeatureKeys) {
    auto& list = wanted(key) ? r.undefined_features : r.skipped_features;
    if (wanted(key) && r.feature(key)) continue;
    if (!list.empty()) list += ';';
    list += key;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Serialisation

inline nlohmann::ordered_json to_json(const FeatureReport& r) {
  nlohmann::ordered_json j;
  auto put = [&](std::string_view key, const auto& opt) {
    if (opt) j[std::string(key)] = *opt;
    else j[std::string(key)] = nullptr;
  };
  for (std::size_t k = 0; k < kFeatureKeys.size(); ++k) put(kFeatureKeys[k], r.*FeatureReport::kFeatureMembers[k]);
  j["node_count"] = r.node_count;
  j["edge_count"] = r.edge_count;
  j["completeness"] = r.completeness;
  j["n_local_optima"] = r.n_local_optima;
  j["global_tie_count"] = r.global_tie_count;
  put("mean_acc_path", r.mean_acc_path);
  put("mean_hamming_to_optimum", r.mean_hamming_to_optimum);
  j["sigma_used"] = r.sigma_used;
  j["eps_tol_used"] = r.eps_tol_used;
  j["seed"] = r.seed;
  j["n_walks"] = r.n_walks;
  j["walk_length"] = r.walk_length;
  put("n_squares_total", r.n_squares_total);
  put("n_squares_epistatic", r.n_squares_epistatic);
  j["sampled_bfc_acc"] = r.sampled_bfc_acc;
  j["sampled_eps_pairwise_r2"] = r.sampled_eps_pairwise_r2;
  j["skipped_features"] = r.skipped_features;
  j["undefined_features"] = r.undefined_features;
  return j;
}

inline FeatureReport report_from_json(const nlohmann::json& j) {
  FeatureReport r;
  auto opt_double = [&](const char* key) -> std::optional<double> {
    const auto& v = j.at(key);
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
  };
  auto opt_u64 = [&](const char* key) -> std::optional<std::uint64_t> {
    const auto& v = j.at(key);
    if (v.is_null()) return std::nullopt;
    return v.get<std::uint64_t>();
  };
  try {
    for (std::size_t k = 0; k < kFeatureKeys.size(); ++k)
      r.*FeatureReport::kFeatureMembers[k] = opt_double(std::string(kFeatureKeys[k]).c_str());
    r.node_count = j.at("node_count").get<std::uint64_t>();
    r.edge_count = j.at("edge_count").get<std::uint64_t>();
    r.completeness = j.at("completeness").get<double>();
    r.n_local_optima = j.at("n_local_optima").get<std::uint64_t>();
    r.global_tie_count = j.at("global_tie_count").get<std::uint64_t>();
    r.mean_acc_path = opt_double("mean_acc_path");
    r.mean_hamming_to_optimum = opt_double("mean_hamming_to_optimum");
    r.sigma_used = j.at("sigma_used").get<double>();
    r.eps_tol_used = j.at("eps_tol_used").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.n_walks = j.at("n_walks").get<std::uint64_t>();
    r.walk_length = j.at("walk_length").get<std::uint64_t>();
    r.n_squares_total = opt_u64("n_squares_total");
    r.n_squares_epistatic = opt_u64("n_squares_epistatic");
    r.sampled_bfc_acc = j.at("sampled_bfc_acc").get<bool>();
    r.sampled_eps_pairwise_r2 = j.at("sampled_eps_pairwise_r2").get<bool>();
    r.skipped_features = j.at("skipped_features").get<std::string>();
    r.undefined_features = j.at("undefined_features").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::IoError, std::string("malformed report: ") + e.what());
  }
  return r;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace detail

/// Two-column key,value table; every value is a JSON scalar literal.
inline std::string to_csv(const FeatureReport& r) {
  std::string out = "key,value\n";
  const auto j = to_json(r);
  for (const auto& [key, value] : j.items()) {
    out += key;
    out += ',';
    if (value.is_number_float()) out += detail::format_double(value.get<double>());
    else out += value.dump();
    out += '\n';
  }
  return out;
}

inline FeatureReport report_from_csv(std::string_view text) {
  nlohmann::json j = nlohmann::json::object();
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::IoError, "malformed report row: " + line);
    const auto key = line.substr(0, comma);
    const auto value = std::string_view(line).substr(comma + 1);
    if (auto d = detail::parse_double(value); d && value.find_first_of(".eE") != std::string_view::npos)
      j[key] = *d;
    else
      j[key] = nlohmann::json::parse(value);
  }
  return report_from_json(j);
}

enum class ReportFormat { Json, Csv };

inline void write_report(const FeatureReport& r, const std::string& path, ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  if (format == ReportFormat::Json) out << to_json(r).dump(2) << '\n';
  else out << to_csv(r);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

inline FeatureReport read_report(const std::string& path, ReportFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  if (format == ReportFormat::Csv) return report_from_csv(buf.str());
  try {
    return report_from_json(nlohmann::json::parse(buf.str()));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::IoError, std::string("malformed report: ") + e.what());
  }
}

}  // namespace fla
