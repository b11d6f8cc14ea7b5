#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "support.hpp"

using namespace fla;
using namespace testing;
using Catch::Approx;

namespace {
constexpr double kTol = 1e-9;
}

TEST_CASE("fitness distance correlation", "[navigability]") {
  const auto ref = oracle::pearson({0, 1, 2, 3}, {2, 1, 1, 0});
  CHECK(*ref == Approx(-0.9487).margin(5e-5));
  CHECK(*fdc(L2()) == Approx(*ref).margin(kTol));
  CHECK(*fdc(L1()) == Approx(0.0).margin(kTol));
  const auto egg = binary({{"00", 1}, {"01", 0}, {"10", 0}, {"11", 1}});
  CHECK(egg.space().to_string(egg.code(global_optimum(egg))) == "00");
  CHECK(*fdc(egg) == Approx(0.0).margin(kTol));
  CHECK_FALSE(fdc(constant2()).has_value());
}

TEST_CASE("global optimum accessibility", "[navigability]") {
  CHECK(global_accessibility(L2()) == 1.0);
  CHECK(global_accessibility(L1()) == 0.75);
  CHECK(global_accessibility(constant2()) == 0.25);
  CHECK(corrected_accessibility(0.4, 0.5) == 0.8);
  CHECK(corrected_accessibility(0.9, 0.5) == 1.0);
  CHECK(corrected_accessibility(0.75, 0.0) == 0.75);
  CHECK_THROWS_AS(corrected_accessibility(0.5, 1.0), Error);
}

TEST_CASE("basin fitness correlation", "[navigability]") {
  CHECK(*basin_fitness_correlation(L6(), BasinMode::Greedy).value == Approx(1.0).margin(kTol));
  for (auto mode : {BasinMode::Greedy, BasinMode::Accessible}) {
    CHECK_FALSE(basin_fitness_correlation(L1(), mode).value.has_value());
    CHECK_FALSE(basin_fitness_correlation(L2(), mode).value.has_value());
  }
}

TEST_CASE("accessible basin correlation matches brute force, with sampling", "[navigability][property]") {
  std::uint64_t seed = 400;
  for (double completeness : {1.0, 0.7}) {
    const auto l = random_landscape(++seed, {2, 3, 2, 3, 2}, completeness);
    std::vector<double> f, size;
    for (auto opt : local_optima(l).local_optima) {
      f.push_back(l.fitness(opt));
      size.push_back(static_cast<double>(oracle::accessible_set(l, l.code(opt)).size()));
    }
    const auto ref = oracle::pearson(f, size);
    const auto lib = basin_fitness_correlation(l, BasinMode::Accessible);
    CHECK_FALSE(lib.sampled);
    REQUIRE(lib.value.has_value() == ref.has_value());
    if (ref) CHECK(*lib.value == Approx(*ref).margin(1e-9));

    const auto sampled = basin_fitness_correlation(l, BasinMode::Accessible, 3, 5);
    CHECK(sampled.sampled);
    CHECK(sampled.optima_used == 3);
    CHECK(basin_fitness_correlation(l, BasinMode::Accessible, 3, 5).value == sampled.value);
  }
}

TEST_CASE("evolvability-enhancing mutations", "[navigability]") {
  CHECK(*ee_fraction(L2(), 0.0) == 0.0);
  CHECK(*ee_fraction(L1(), 0.0) == 0.0);
  CHECK(*ee_fraction(L7(), 0.0) == 0.5);
  const auto c = evolvability_counts(L7(), 0.0);
  CHECK(c.evaluated == 4);
  CHECK(c.enhancing == 2);
  // Only neutral mutations on a constant landscape, and no σ-band to hold them.
  CHECK_FALSE(ee_fraction(constant2(), 0.0).has_value());
}

TEST_CASE("neutrality", "[navigability]") {
  CHECK(neutrality(constant2(), 0.1) == 1.0);
  CHECK(neutrality(L2(), 0.1) == 0.0);
  CHECK(neutrality(L8(), 0.1) == 0.5);
}

TEST_CASE("neutrality is monotone in sigma", "[navigability][property]") {
  const auto l = random_landscape(9, {3, 3, 2, 2}, 0.9);
  double previous = 0.0;
  for (double sigma : {0.0, 0.05, 0.1, 0.3, 0.8, 2.0, 10.0}) {
    const double eta = neutrality(l, sigma);
    CHECK(eta >= previous);
    CHECK(eta <= 1.0);
    previous = eta;
  }
}

TEST_CASE("mean accessible path length", "[navigability]") {
  CHECK(mean_accessible_path_length(L2()) == Approx(1.0).margin(kTol));
  CHECK(mean_accessible_path_length(L1()) == Approx(2.0 / 3.0).margin(kTol));
  CHECK(mean_accessible_path_length(constant2()) == 0.0);
}

TEST_CASE("accessible paths are never shorter than Hamming distance", "[navigability][property]") {
  std::uint64_t seed = 500;
  for (double completeness : {1.0, 0.8}) {
    const auto l = random_landscape(++seed, {2, 2, 3, 2, 2}, completeness);
    const auto p = accessible_paths(l);
    CHECK(p.mean_accessible >= p.mean_hamming - 1e-12);
  }
  GeneratorConfig c;
  c.model = Model::Additive;
  c.n = 6;
  c.alphabet_sizes = {2, 3, 2, 2, 4, 2};
  c.seed = 4;
  const auto p = accessible_paths(generate(c));
  CHECK(p.mean_accessible == Approx(p.mean_hamming).margin(1e-12));
}

TEST_CASE("single-optimum complete landscapes are fully accessible", "[navigability][property]") {
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 200 && checked < 10; ++seed) {
    GeneratorConfig c;
    c.model = Model::Rmf;
    c.n = 8;
    c.sigma_hoc = 0.3;
    c.seed = seed;
    const auto l = generate(c);
    if (local_optima(l).local_optima.size() != 1) continue;
    ++checked;
    CHECK(global_accessibility(l) == 1.0);
    CHECK(oracle::accessible_set(l, l.code(global_optimum(l))).size() == l.size());
  }
  CHECK(checked > 0);
}

TEST_CASE("deleting nodes never grows the global basin", "[navigability][property]") {
  GeneratorConfig c;
  c.model = Model::Nk;
  c.n = 10;
  c.k = 4;
  c.seed = 12;
  const auto l = generate(c);
  const auto best = l.code(global_optimum(l));
  std::size_t previous = accessible_basin_size(l, global_optimum(l));
  for (double alpha : {0.1, 0.2, 0.5, 0.8}) {
    const auto sub = subsample(l, alpha, 3);
    REQUIRE(sub.find(best));
    const auto size = accessible_basin_size(sub, *sub.find(best));
    CHECK(size <= previous);
    previous = size;
  }
}

TEST_CASE("navigability is affine invariant at the graph level", "[navigability][property]") {
  const auto l = random_landscape(600, {3, 2, 2, 2, 3}, 0.85);
  const double a = 4.0, b = -3.0;
  const auto t = affine(l, a, b);
  CHECK(*fdc(t) == Approx(*fdc(l)).margin(1e-9));
  CHECK(global_accessibility(t) == global_accessibility(l));
  CHECK(greedy_basins(t) == greedy_basins(l));
  for (auto mode : {BasinMode::Greedy, BasinMode::Accessible}) {
    const auto x = basin_fitness_correlation(l, mode).value, y = basin_fitness_correlation(t, mode).value;
    REQUIRE(x.has_value() == y.has_value());
    if (x) CHECK(*y == Approx(*x).margin(1e-9));
  }
  CHECK(ee_fraction(t, 0.1 * a) == ee_fraction(l, 0.1));
  CHECK(neutrality(t, 0.1 * a) == Approx(neutrality(l, 0.1)).margin(1e-12));
  CHECK(mean_accessible_path_length(t) == mean_accessible_path_length(l));
}
