#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace fla;
using namespace testing;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

ErrorCode error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("fla_io_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(file(name), std::ios::binary) << text;
    return file(name);
  }

 private:
  fs::path path_;
};

struct CliResult {
  int code;
  std::string out, err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "fla");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = fla::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  return nlohmann::json::parse(in);
}

const std::string kL1Csv = "sequence,fitness\n00,0\n01,1\n10,1\n11,0.5\n";
const std::string kL2Csv = "sequence,fitness\n00,0\n01,1\n10,2\n11,3\n";

}  // namespace

TEST_CASE("csv parsing", "[io]") {
  const auto rows = parse_csv(kL1Csv);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].alleles == std::vector<std::string>{"0", "0"});
  CHECK(rows[3].alleles == std::vector<std::string>{"1", "1"});
  CHECK(rows[3].fitness == 0.5);
  CHECK_FALSE(rows[0].variance.has_value());

  const auto l = Landscape::build(ingest(rows, {AlphabetPreset::Binary}));
  CHECK(l.size() == 4);
  CHECK(l.edge_count() == 4);

  const auto with_var = parse_csv("fitness,variance,sequence\r\n1.5,0.25,AC\r\n-2e-3,0.5,GT\r\n");
  REQUIRE(with_var.size() == 2);
  CHECK(with_var[0].alleles == std::vector<std::string>{"A", "C"});
  CHECK(with_var[1].fitness == -0.002);
  CHECK(*with_var[1].variance == 0.5);

  const auto multi = parse_csv("sequence,fitness\nwt|K12R,1\nK3A|wt,2\n", {"|"});
  CHECK(multi[0].alleles == std::vector<std::string>{"wt", "K12R"});
}

TEST_CASE("csv errors", "[io]") {
  CHECK(error_of([] { parse_csv("sequence,fitness\n"); }) == ErrorCode::EmptyInput);
  CHECK(error_of([] { parse_csv(""); }) == ErrorCode::EmptyInput);
  CHECK(error_of([] { parse_csv("sequence,fitness\n0A,1\n0,2\n"); }) == ErrorCode::RaggedRow);
  CHECK(error_of([] { parse_csv("sequence,fitness\n00,1\n01\n"); }) == ErrorCode::RaggedRow);
  CHECK(error_of([] { parse_csv("seq,fitness\n00,1\n"); }) == ErrorCode::MissingColumn);
  CHECK(error_of([] { parse_csv("sequence,score\n00,1\n"); }) == ErrorCode::MissingColumn);
  CHECK(error_of([] { parse_csv("sequence,fitness\n00,abc\n"); }) == ErrorCode::NonNumericFitness);
  CHECK(error_of([] { parse_csv("sequence,fitness\n00,1,5\n"); }) == ErrorCode::RaggedRow);
  CHECK(error_of([] { parse_csv(kL1Csv, {","}); }) == ErrorCode::InvalidArgument);
  CHECK(error_of([] { read_csv("/nonexistent/file.csv"); }) == ErrorCode::IoError);
  try {
    parse_csv("sequence,fitness\n00,1\n01,1\n1,2\n");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("landscape csv round trip is exact", "[io][property]") {
  const auto l = random_landscape(900, {2, 2, 2, 2, 2}, 0.7);
  const auto text = landscape_to_csv(l, default_delimiter(l.space()));
  const auto back = Landscape::build(ingest(parse_csv(text), {AlphabetPreset::Binary}));
  CHECK(std::ranges::equal(back.codes(), l.codes()));
  CHECK(std::ranges::equal(back.fitness(), l.fitness()));

  const SequenceSpace space(std::vector<std::vector<std::string>>{{"wt", "K12R", "K12A"}, {"a", "b"}});
  const auto multi = Landscape::from_codes(space, {0, 2, 3, 5}, {0.1, 1.0 / 3.0, -7.25, 1e300});
  const auto mtext = landscape_to_csv(multi, default_delimiter(space));
  const auto mback = Landscape::build(ingest(parse_csv(mtext, {"|"})));
  REQUIRE(mback.size() == multi.size());
  for (NodeId u = 0; u < multi.size(); ++u) {
    const auto seq = multi.space().decode(multi.code(u));
    CHECK(mback.fitness(*mback.find(mback.space().encode(seq))) == multi.fitness(u));
  }
}

TEST_CASE("report key set and null handling", "[io][report]") {
  const auto r = analyze(constant2(), {.sigma = 0.1});
  const auto j = to_json(r);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  REQUIRE(keys.size() >= 20);
  for (std::size_t k = 0; k < kFeatureKeys.size(); ++k) CHECK(keys[k] == kFeatureKeys[k]);
  const std::vector<std::string> diagnostics = {
      "node_count",     "edge_count",      "completeness",          "n_local_optima",  "global_tie_count",
      "mean_acc_path",  "mean_hamming_to_optimum", "sigma_used",   "eps_tol_used",     "seed",
      "n_walks",        "walk_length",     "n_squares_total",       "n_squares_epistatic", "sampled_bfc_acc",
      "sampled_eps_pairwise_r2", "skipped_features", "undefined_features"};
  CHECK(std::vector<std::string>(keys.begin() + 20, keys.end()) == diagnostics);

  CHECK(j["rho_a"].is_null());
  CHECK(j["rs_ratio"].is_null());
  CHECK(j["eta"] == 1.0);
  CHECK(j["phi_lo"] == 1.0);
  CHECK(j["undefined_features"].get<std::string>().find("rho_a") != std::string::npos);
}

TEST_CASE("micro landscape reports", "[io][report]") {
  const auto l2 = to_json(analyze(L2()));
  CHECK(l2["rs_ratio"] == 0.0);
  CHECK(l2["fdc"].get<double>() == Approx(-0.9487).margin(5e-5));
  CHECK(l2["alpha_go"] == 1.0);
  CHECK(l2["n_local_optima"] == 1);
  CHECK(l2["edge_count"] == 4);

  const auto l1 = analyze(L1());
  CHECK(*l1.eps_reci == 1.0);
  CHECK(*l1.alpha_go == 0.75);
  CHECK(*l1.mean_acc_path == Approx(2.0 / 3.0).margin(1e-12));
  CHECK(l1.n_local_optima == 2);
  CHECK(l1.global_tie_count == 2);
}

TEST_CASE("feature selection", "[io][report]") {
  CHECK(parse_feature_list("all").empty());
  CHECK(parse_feature_list("fdc, eta").size() == 2);
  CHECK(error_of([] { parse_feature_list("fdc,roughness"); }) == ErrorCode::InvalidArgument);
  const auto r = analyze(L1(), {.features = parse_feature_list("fdc,alpha_go")});
  CHECK(r.fdc.has_value());
  CHECK(r.alpha_go.has_value());
  CHECK_FALSE(r.rho_a.has_value());
  CHECK(r.skipped_features.find("rho_a") != std::string::npos);
  CHECK(r.skipped_features.find("fdc") == std::string::npos);
}

TEST_CASE("report serialization round trips", "[io][report][property]") {
  TempDir dir;
  for (const auto& l : {L1(), L2(), constant2(), random_landscape(901, {3, 2, 2, 4}, 0.8)}) {
    const auto r = analyze(l, {.walks = 50, .seed = 3});
    CHECK(report_from_json(nlohmann::json::parse(to_json(r).dump())) == r);
    CHECK(report_from_csv(to_csv(r)) == r);
    write_report(r, dir.file("r.json"), ReportFormat::Json);
    write_report(r, dir.file("r.csv"), ReportFormat::Csv);
    CHECK(read_report(dir.file("r.json"), ReportFormat::Json) == r);
    CHECK(read_report(dir.file("r.csv"), ReportFormat::Csv) == r);
  }
  dir.write("bad.json", "{\"phi_lo\": ");
  CHECK(error_of([&] { read_report(dir.file("bad.json"), ReportFormat::Json); }) == ErrorCode::IoError);
  dir.write("partial.json", "{\"phi_lo\": 1}");
  CHECK(error_of([&] { read_report(dir.file("partial.json"), ReportFormat::Json); }) == ErrorCode::IoError);
  CHECK(error_of([&] { write_report(FeatureReport{}, "/nonexistent/dir/r.json", ReportFormat::Json); }) ==
        ErrorCode::IoError);
}

TEST_CASE("snapshot round trip is bit exact", "[io][snapshot]") {
  for (const auto& l : {L1(), random_landscape(902, {3, 4, 2, 2}, 0.6),
                        Landscape::from_codes(SequenceSpace(std::vector<std::vector<std::string>>{{"wt", "K12R"}, {"a", "b", "c"}}),
                                              {0, 3, 5}, {1.0, -2.5, 1.0 / 7.0}, {0.1, 0.2, std::nan("")})}) {
    const auto bytes = snapshot_bytes(l);
    const auto back = landscape_from_snapshot(bytes);
    CHECK(snapshot_bytes(back) == bytes);
    CHECK(std::ranges::equal(back.codes(), l.codes()));
    CHECK(std::ranges::equal(back.fitness(), l.fitness()));
    CHECK(oracle::library_edges(back) == oracle::library_edges(l));
    CHECK(back.space().alphabet(0) == l.space().alphabet(0));
    CHECK(back.has_variance() == l.has_variance());
  }
}

TEST_CASE("snapshot corruption is detected", "[io][snapshot]") {
  const auto bytes = snapshot_bytes(random_landscape(903, {2, 2, 2, 3}, 0.9));
  auto corrupt = [&](auto&& edit) {
    auto b = bytes;
    edit(b);
    return error_of([&] { landscape_from_snapshot(b); });
  };
  CHECK(corrupt([](std::string& b) { b[0] = 'X'; }) == ErrorCode::CorruptSnapshot);
  CHECK(corrupt([](std::string& b) { b[8] = 2; }) == ErrorCode::CorruptSnapshot);
  CHECK(corrupt([](std::string& b) { b.resize(b.size() - 3); }) == ErrorCode::CorruptSnapshot);
  CHECK(corrupt([](std::string& b) { b.resize(b.size() / 2); }) == ErrorCode::CorruptSnapshot);
  CHECK(corrupt([](std::string& b) { b += '\0'; }) == ErrorCode::CorruptSnapshot);
  CHECK(corrupt([](std::string& b) { b[b.size() - 8] ^= 1; }) == ErrorCode::CorruptSnapshot);
  CHECK(corrupt([](std::string& b) { b.clear(); }) == ErrorCode::CorruptSnapshot);
  CHECK(error_of([] { read_snapshot("/nonexistent.bin"); }) == ErrorCode::IoError);
}

TEST_CASE("cli generate then analyze", "[io][cli]") {
  TempDir dir;
  const auto nk = dir.file("nk.csv"), report = dir.file("r.json");
  REQUIRE(run_cli({"generate", "--model", "nk", "--n", "10", "--k", "0", "--seed", "1", "--out", nk}).code == 0);
  const auto res = run_cli({"analyze", "--input", nk, "--features", "all", "--seed", "1"});
  REQUIRE(res.code == 0);
  const auto j = nlohmann::json::parse(res.out);
  CHECK(j["n_local_optima"] == 1);
  CHECK(j["node_count"] == 1024);

  REQUIRE(run_cli({"analyze", "--input", nk, "--seed", "1", "--out", report}).code == 0);
  CHECK(read_json(report) == j);
}

TEST_CASE("cli analyze on a micro landscape", "[io][cli]") {
  TempDir dir;
  const auto csv = dir.write("l1.csv", kL1Csv);
  REQUIRE(run_cli({"analyze", "--input", csv, "--out", dir.file("r.json")}).code == 0);
  const auto j = read_json(dir.file("r.json"));
  CHECK(j["eps_reci"] == 1.0);
  CHECK(j["alpha_go"] == 0.75);

  REQUIRE(run_cli({"analyze", "--input", csv, "--alphabet", "binary", "--out", dir.file("r.csv")}).code == 0);
  CHECK(read_report(dir.file("r.csv"), ReportFormat::Csv) == report_from_json(j));
}

TEST_CASE("cli walk", "[io][cli]") {
  TempDir dir;
  const auto csv = dir.write("l2.csv", kL2Csv);
  REQUIRE(run_cli({"walk", "--input", csv, "--method", "greedy", "--runs", "100", "--seed", "7", "--out", dir.file("w.json")})
              .code == 0);
  const auto j = read_json(dir.file("w.json"));
  CHECK(j["mean_percentile"] == 1.0);
  CHECK(j["runs"] == 100);
  CHECK(j["per_run"].size() == 100);
  for (const auto& run : j["per_run"]) CHECK(run["endpoint"] == "11");
}

TEST_CASE("cli snapshot analysis equals csv analysis", "[io][cli][property]") {
  TempDir dir;
  for (std::string model : {"rmf", "nk"}) {
    const auto csv = dir.file(model + ".csv"), bin = dir.file(model + ".bin");
    REQUIRE(run_cli({"generate", "--model", model, "--n", "8", "--k", "3", "--seed", "5", "--out", csv}).code == 0);
    REQUIRE(run_cli({"perturb", "--input", csv, "--missing", "0.3", "--seed", "2", "--out", csv}).code == 0);
    REQUIRE(run_cli({"build", "--input", csv, "--alphabet", "binary", "--out", bin}).code == 0);
    const auto a = run_cli({"analyze", "--input", csv, "--alphabet", "binary", "--seed", "4"});
    const auto b = run_cli({"analyze", "--graph", bin, "--seed", "4"});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    const auto ra = report_from_json(nlohmann::json::parse(a.out));
    const auto rb = report_from_json(nlohmann::json::parse(b.out));
    for (auto key : kFeatureKeys) {
      const auto x = ra.feature(key), y = rb.feature(key);
      REQUIRE(x.has_value() == y.has_value());
      if (x) CHECK(std::abs(*x - *y) <= 1e-12);
    }
    CHECK(ra.edge_count == rb.edge_count);
  }
}

TEST_CASE("cli is deterministic and thread independent", "[io][cli][property]") {
  TempDir dir;
  const auto csv = dir.file("hoc.csv");
  REQUIRE(run_cli({"generate", "--model", "hoc", "--n", "9", "--alphabet-sizes", "2,2,3,2,2,2,2,2,2", "--seed", "3", "--out",
               csv})
              .code == 0);
  const auto a = run_cli({"--threads", "1", "analyze", "--input", csv, "--seed", "8"});
  const auto b = run_cli({"--threads", "3", "analyze", "--input", csv, "--seed", "8"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  set_threads(0);
}

TEST_CASE("cli perturb", "[io][cli]") {
  TempDir dir;
  const auto csv = dir.file("nk.csv");
  REQUIRE(run_cli({"generate", "--model", "nk", "--n", "8", "--k", "2", "--seed", "1", "--out", csv}).code == 0);
  const auto lib = run_cli({"perturb", "--input", csv, "--biased-rate", "0", "--biased-draws", "10", "--seed", "1", "--out",
                        dir.file("lib.csv")});
  REQUIRE(lib.code == 0);
  CHECK(lib.out == "library size 1\n");
  const auto focal = run_cli({"perturb", "--input", csv, "--biased-rate", "1", "--biased-draws", "5", "--focal", "00000000",
                          "--seed", "1", "--out", dir.file("lib2.bin")});
  REQUIRE(focal.code == 0);
  const auto l = read_snapshot(dir.file("lib2.bin"));
  CHECK(l.size() == 2);
  CHECK(l.code(1) == 255);

  REQUIRE(run_cli({"perturb", "--input", csv, "--noise", "0", "--seed", "1", "--out", dir.file("same.csv")}).code == 0);
  const auto original = fla::cli::load_landscape(csv, "binary", "");
  const auto same = fla::cli::load_landscape(dir.file("same.csv"), "binary", "");
  CHECK(std::ranges::equal(original.fitness(), same.fitness()));

  const auto missing = run_cli({"perturb", "--input", csv, "--missing", "0.5", "--seed", "1", "--out", dir.file("half.csv")});
  REQUIRE(missing.code == 0);
  CHECK(fla::cli::load_landscape(dir.file("half.csv"), "binary", "").size() == 128);
}

TEST_CASE("cli exit codes", "[io][cli]") {
  TempDir dir;
  const auto csv = dir.write("l1.csv", kL1Csv);
  CHECK(run_cli({}).code == 1);
  CHECK(run_cli({"frobnicate"}).code == 1);
  CHECK(run_cli({"analyze", "--out", dir.file("r.json")}).code == 1);
  CHECK(run_cli({"analyze", "--input", csv, "--graph", csv}).code == 1);
  CHECK(run_cli({"analyze", "--input", csv, "--features", "nope"}).code == 1);
  CHECK(run_cli({"generate", "--model", "nk", "--n", "5", "--k", "5", "--seed", "1", "--out", dir.file("x.csv")}).code == 1);
  CHECK(run_cli({"perturb", "--input", csv, "--seed", "1", "--out", dir.file("p.csv")}).code == 1);
  CHECK(run_cli({"--help"}).code == 0);

  const auto missing = run_cli({"analyze", "--input", dir.file("absent.csv")});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("error [") == 0);
  const auto ragged = dir.write("ragged.csv", "sequence,fitness\n0A,1\n0,2\n");
  CHECK(run_cli({"build", "--input", ragged, "--out", dir.file("g.bin")}).code == 2);
  const auto dna = run_cli({"build", "--input", csv, "--alphabet", "dna", "--out", dir.file("g.bin")});
  CHECK(dna.code == 2);
  CHECK(dna.err.find("UnknownAllele") != std::string::npos);
  CHECK(run_cli({"perturb", "--input", csv, "--biased-rate", "0.1", "--biased-draws", "3", "--focal", "22", "--seed", "1",
             "--out", dir.file("p.csv")})
            .code == 2);
  CHECK(run_cli({"analyze", "--graph", csv}).code == 2);
}
