#pragma once

// The `fla` command-line front end. Exit codes: 0 success, 1 usage error,
// 2 data error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fla/fla.hpp"

namespace fla::cli {

inline bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline bool is_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[8] = {};
  in.read(magic, sizeof magic);
  return in.gcount() == 8 && std::equal(magic, magic + 8, kSnapshotMagic.begin());
}

inline IngestOptions ingest_options(const std::string& alphabet) {
  IngestOptions o;
  if (alphabet == "binary") o.preset = AlphabetPreset::Binary;
  else if (alphabet == "dna") o.preset = AlphabetPreset::Dna;
  else if (alphabet == "rna") o.preset = AlphabetPreset::Rna;
  else if (alphabet == "protein") o.preset = AlphabetPreset::Protein;
  else if (alphabet != "infer") throw Error(ErrorCode::InvalidArgument, "unknown alphabet '" + alphabet + "'");
  return o;
}

/// A snapshot (detected by its magic bytes) or a CSV variant table.
inline Landscape load_landscape(const std::string& path, const std::string& alphabet, const std::string& delimiter,
                                IngestReport* report = nullptr) {
  if (is_snapshot(path)) return read_snapshot(path);
  auto ingested = ingest(read_csv(path, {delimiter}), ingest_options(alphabet));
  if (report) *report = ingested.report;
  return Landscape::build(std::move(ingested));
}

inline GenotypeCode parse_sequence(const SequenceSpace& space, const std::string& text, const std::string& delimiter) {
  if (delimiter.empty()) return space.encode(text);
  std::vector<std::string> alleles;
  for (auto a : detail::split(text, delimiter)) alleles.emplace_back(a);
  return space.encode(alleles);
}

/// `.bin` paths get a snapshot, anything else CSV.
inline void save_landscape(const Landscape& l, const std::string& path) {
  if (ends_with(path, ".bin")) write_snapshot(l, path);
  else write_csv(l, path);
}

inline void write_json(const nlohmann::ordered_json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Fitness landscape analysis"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0: hardware concurrency)");

  std::string input, graph, output, alphabet = "infer", delimiter;
  std::uint64_t seed = 0;

  auto* build = app.add_subcommand("build", "Build a landscape from CSV and write a binary snapshot");
  build->add_option("--input", input, "Variant CSV")->required();
  build->add_option("--alphabet", alphabet, "dna|rna|protein|binary|infer")
      ->check(CLI::IsMember({"dna", "rna", "protein", "binary", "infer"}));
  build->add_option("--delimiter", delimiter, "Allele separator inside the sequence cell");
  build->add_option("--out", output, "Snapshot path")->required();

  std::string features = "all";
  std::optional<double> eps_tol, sigma;
  std::size_t walks = 1000;
  std::optional<std::size_t> walk_length;
  std::size_t max_fit_nodes = 100000, max_optima = 10000;
  auto* analyze_cmd = app.add_subcommand("analyze", "Compute landscape features");
  auto* in_opt = analyze_cmd->add_option("--input", input, "Variant CSV");
  auto* graph_opt = analyze_cmd->add_option("--graph", graph, "Binary snapshot");
  in_opt->excludes(graph_opt);
  analyze_cmd->add_option("--alphabet", alphabet, "dna|rna|protein|binary|infer")
      ->check(CLI::IsMember({"dna", "rna", "protein", "binary", "infer"}));
  analyze_cmd->add_option("--delimiter", delimiter, "Allele separator inside the sequence cell");
  analyze_cmd->add_option("--features", features, "Comma-separated feature keys or 'all'");
  analyze_cmd->add_option("--eps-tol", eps_tol, "Epistasis tolerance");
  analyze_cmd->add_option("--sigma", sigma, "Neutrality threshold");
  analyze_cmd->add_option("--walks", walks, "Random walks for autocorrelation")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--walk-length", walk_length, "Random walk length")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--seed", seed, "Seed");
  analyze_cmd->add_option("--max-fit-nodes", max_fit_nodes, "Row cap for the pairwise regression");
  analyze_cmd->add_option("--max-optima", max_optima, "Optimum cap for accessible basins");
  analyze_cmd->add_option("--out", output, "Report path (.csv for CSV, JSON otherwise; stdout if omitted)");

  GeneratorConfig gen;
  std::string model = "nk", neighborhood = "random";
  auto* generate_cmd = app.add_subcommand("generate", "Generate a synthetic landscape");
  generate_cmd->add_option("--model", model, "additive|hoc|rmf|nk|eggbox")->required();
  generate_cmd->add_option("--n", gen.n, "Number of loci")->required();
  generate_cmd->add_option("--k", gen.k, "NK interaction order");
  generate_cmd->add_option("--neighborhood", neighborhood, "NK partners: random|adjacent")
      ->check(CLI::IsMember({"random", "adjacent"}));
  generate_cmd->add_option("--alphabet-sizes", gen.alphabet_sizes, "Per-locus allele counts (default binary)")
      ->delimiter(',');
  generate_cmd->add_option("--mu", gen.mu_a, "Mean allele effect");
  generate_cmd->add_option("--sigma-a", gen.sigma_a, "Allele effect sd");
  generate_cmd->add_option("--sigma-hoc", gen.sigma_hoc, "Random genotype term sd");
  generate_cmd->add_option("--base", gen.base, "Eggbox base fitness");
  generate_cmd->add_option("--amplitude", gen.amplitude, "Eggbox amplitude");
  generate_cmd->add_option("--seed", gen.seed, "Seed")->required();
  generate_cmd->add_option("--out", output, "Output path (.bin for a snapshot, CSV otherwise)")->required();

  std::optional<double> missing, noise, biased_rate;
  std::optional<std::size_t> biased_draws;
  std::string focal = "global";
  bool drop_global = false;
  auto* perturb_cmd = app.add_subcommand("perturb", "Delete, add noise to, or resample a landscape");
  perturb_cmd->add_option("--input", input, "Variant CSV or snapshot")->required();
  perturb_cmd->add_option("--alphabet", alphabet, "dna|rna|protein|binary|infer")
      ->check(CLI::IsMember({"dna", "rna", "protein", "binary", "infer"}));
  perturb_cmd->add_option("--delimiter", delimiter, "Allele separator inside the sequence cell");
  auto* missing_opt = perturb_cmd->add_option("--missing", missing, "Deletion fraction in [0, 1)");
  auto* noise_opt = perturb_cmd->add_option("--noise", noise, "Noise sd as a multiple of the fitness sd");
  auto* rate_opt = perturb_cmd->add_option("--biased-rate", biased_rate, "Per-site mutation probability");
  auto* draws_opt = perturb_cmd->add_option("--biased-draws", biased_draws, "Mutagenesis draws");
  perturb_cmd->add_option("--focal", focal, "Focal sequence, or 'global' for the global optimum");
  perturb_cmd->add_flag("--drop-global", drop_global, "Allow deleting the global optimum");
  perturb_cmd->add_option("--seed", seed, "Seed")->required();
  perturb_cmd->add_option("--out", output, "Output path (.bin for a snapshot, CSV otherwise)")->required();
  missing_opt->excludes(noise_opt)->excludes(rate_opt);
  noise_opt->excludes(rate_opt);
  rate_opt->needs(draws_opt);
  draws_opt->needs(rate_opt);

  std::string method = "greedy";
  std::size_t runs = 100;
  auto* walk_cmd = app.add_subcommand("walk", "Simulate directed evolution with adaptive walks");
  walk_cmd->add_option("--input", input, "Variant CSV or snapshot")->required();
  walk_cmd->add_option("--alphabet", alphabet, "dna|rna|protein|binary|infer")
      ->check(CLI::IsMember({"dna", "rna", "protein", "binary", "infer"}));
  walk_cmd->add_option("--delimiter", delimiter, "Allele separator inside the sequence cell");
  walk_cmd->add_option("--method", method, "greedy|stochastic")->check(CLI::IsMember({"greedy", "stochastic"}));
  walk_cmd->add_option("--runs", runs, "Number of walks")->check(CLI::PositiveNumber);
  walk_cmd->add_option("--seed", seed, "Seed");
  walk_cmd->add_option("--out", output, "Result JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    app.exit(e, out, err);
    return 1;
  }

  try {
    set_threads(threads);
    if (*build) {
      IngestReport report;
      auto l = load_landscape(input, alphabet, delimiter, &report);
      write_snapshot(l, output);
      out << "nodes " << l.size() << ", edges " << l.edge_count() << ", completeness " << l.completeness();
      if (!report.dropped_loci.empty()) out << ", dropped " << report.dropped_loci.size() << " monomorphic loci";
      if (report.duplicates_dropped) out << ", " << report.duplicates_dropped << " duplicate rows";
      out << '\n';
    } else if (*analyze_cmd) {
      if (input.empty() == graph.empty()) {
        err << "analyze: exactly one of --input or --graph is required\n";
        return 1;
      }
      AnalyzeOptions o;
      o.features = parse_feature_list(features);
      o.eps_tol = eps_tol;
      o.sigma = sigma;
      o.walks = walks;
      o.walk_length = walk_length;
      o.seed = seed;
      o.max_fit_nodes = max_fit_nodes;
      o.max_optima = max_optima;
      const auto l = graph.empty() ? load_landscape(input, alphabet, delimiter) : read_snapshot(graph);
      const auto report = analyze(l, o);
      if (output.empty()) out << to_json(report).dump(2) << '\n';
      else write_report(report, output, ends_with(output, ".csv") ? ReportFormat::Csv : ReportFormat::Json);
    } else if (*generate_cmd) {
      gen.model = parse_model(model);
      gen.neighborhood = neighborhood == "adjacent" ? NkNeighborhood::Adjacent : NkNeighborhood::Random;
      save_landscape(generate(gen), output);
    } else if (*perturb_cmd) {
      const auto l = load_landscape(input, alphabet, delimiter);
      if (missing) {
        save_landscape(subsample(l, *missing, seed, !drop_global), output);
      } else if (noise) {
        save_landscape(add_noise(l, *noise, seed), output);
      } else if (biased_rate) {
        GenotypeCode origin = 0;
        if (focal == "global") {
          origin = l.code(global_optimum(l));
        } else {
          try {
            origin = parse_sequence(l.space(), focal, delimiter);
          } catch (const Error& e) {
            throw Error(ErrorCode::FocalNotFound, std::string("focal sequence: ") + e.what());
          }
        }
        const auto lib = biased_sample(l, origin, *biased_rate, *biased_draws, seed);
        save_landscape(lib.landscape, output);
        out << "library size " << lib.library_size << '\n';
      } else {
        err << "perturb: one of --missing, --noise or --biased-rate is required\n";
        return 1;
      }
    } else if (*walk_cmd) {
      const auto l = load_landscape(input, alphabet, delimiter);
      const auto result = run_de(l, parse_walk_method(method), runs, seed);
      nlohmann::ordered_json j;
      j["method"] = std::string(to_string(result.method));
      j["runs"] = result.runs;
      j["seed"] = seed;
      j["mean_percentile"] = result.mean_percentile;
      auto& per_run = j["per_run"] = nlohmann::ordered_json::array();
      for (const auto& r : result.per_run)
        per_run.push_back({{"start", l.space().to_string(r.start, default_delimiter(l.space()))},
                           {"endpoint", l.space().to_string(r.endpoint, default_delimiter(l.space()))},
                           {"endpoint_fitness", r.endpoint_fitness},
                           {"percentile", r.percentile},
                           {"steps", r.steps}});
      write_json(j, output);
    }
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::InvalidK ? 1 : 2;
  }
  return 0;
}

}  // namespace fla::cli
