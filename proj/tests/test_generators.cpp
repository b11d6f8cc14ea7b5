#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "oracles.hpp"
#include "support.hpp"

using namespace fla;
using namespace testing;
using Catch::Approx;

namespace {

GeneratorConfig config(Model m, std::size_t n, std::uint64_t seed) {
  GeneratorConfig c;
  c.model = m;
  c.n = n;
  c.seed = seed;
  return c;
}

double mean_over_seeds(std::size_t seeds, auto&& fn) {
  double total = 0;
  for (std::uint64_t s = 0; s < seeds; ++s) total += fn(s);
  return total / static_cast<double>(seeds);
}

}  // namespace

TEST_CASE("generators are deterministic in config and seed", "[generators]") {
  for (auto m : {Model::Additive, Model::Hoc, Model::Rmf, Model::Nk, Model::Eggbox}) {
    auto c = config(m, 8, 11);
    c.k = 3;
    const auto a = generate(c), b = generate(c);
    REQUIRE(a.size() == 256);
    CHECK(std::equal(a.fitness().begin(), a.fitness().end(), b.fitness().begin()));
    CHECK(a.completeness() == 1.0);
    if (m == Model::Eggbox) continue;
    c.seed = 12;
    const auto d = generate(c);
    CHECK_FALSE(std::equal(a.fitness().begin(), a.fitness().end(), d.fitness().begin()));
  }
}

TEST_CASE("model names round trip", "[generators]") {
  for (auto m : {Model::Additive, Model::Hoc, Model::Rmf, Model::Nk, Model::Eggbox})
    CHECK(parse_model(to_string(m)) == m);
  CHECK_THROWS_AS(parse_model("potts"), Error);
}

TEST_CASE("NK with k = 0 collapses to an additive model", "[generators]") {
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    auto c = config(Model::Nk, 10, seed);
    const auto l = generate(c);
    CHECK(local_optima(l).local_optima.size() == 1);
    CHECK(*rs_ratio(l) <= 1e-9);
    CHECK(*gamma1(l) == Approx(1.0).margin(1e-9));
    CHECK(global_accessibility(l) == 1.0);
  }
}

TEST_CASE("NK parameter validation", "[generators]") {
  auto c = config(Model::Nk, 6, 0);
  c.k = 6;
  try {
    generate(c);
    FAIL("expected InvalidK");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidK);
  }
  c.k = 5;
  CHECK_NOTHROW(generate(c));
  c.k = 1;
  c.alphabet_sizes = {2, 2, 3, 2, 2, 2};
  CHECK_THROWS_AS(generate(c), Error);
}

TEST_CASE("NK interaction partners", "[generators]") {
  auto c = config(Model::Nk, 12, 9);
  c.k = 4;
  const auto partners = detail::nk_partners(c);
  REQUIRE(partners.size() == 12);
  for (std::size_t i = 0; i < partners.size(); ++i) {
    const std::set<std::size_t> s(partners[i].begin(), partners[i].end());
    CHECK(s.size() == 4);
    CHECK_FALSE(s.count(i));
    CHECK(*s.rbegin() < 12);
  }
  c.neighborhood = NkNeighborhood::Adjacent;
  const auto adj = detail::nk_partners(c);
  for (std::size_t i = 0; i < adj.size(); ++i)
    for (std::size_t d = 1; d <= 4; ++d)
      CHECK(std::count(adj[i].begin(), adj[i].end(), (i + d) % 12) == 1);
}

TEST_CASE("eggbox takes two values alternating with distance", "[generators]") {
  auto c = config(Model::Eggbox, 6, 0);
  c.base = 1;
  c.amplitude = 2.5;
  const auto l = generate(c);
  const std::set<double> values(l.fitness().begin(), l.fitness().end());
  CHECK(values == std::set<double>{1.0, 3.5});
  const auto& space = l.space();
  for (NodeId u = 0; u < l.size(); u += 3)
    for (NodeId v = 0; v < l.size(); ++v)
      if (space.hamming(l.code(u), l.code(v)) % 2 == 1) CHECK(std::abs(l.fitness(u) - l.fitness(v)) == 2.5);
  CHECK(*gamma1(l) == Approx(-1.0).margin(1e-9));
  CHECK(classify_squares(l, 1e-9).eps_reci == 1.0);
}

TEST_CASE("eggbox parity over multi-allelic loci", "[generators]") {
  auto c = config(Model::Eggbox, 3, 0);
  c.alphabet_sizes = {3, 2, 4};
  const auto l = generate(c);
  for (auto n : oracle::nodes(l)) {
    const auto sum = n.index[0] + n.index[1] + n.index[2];
    CHECK(n.fitness == static_cast<double>(sum % 2));
  }
}

TEST_CASE("additive generator uses a zero reference allele", "[generators]") {
  auto c = config(Model::Additive, 4, 5);
  c.alphabet_sizes = {3, 2, 2, 4};
  const auto l = generate(c);
  CHECK(l.fitness(*l.find(0)) == 0.0);
  CHECK(local_optima(l).local_optima.size() == 1);
  CHECK(global_accessibility(l) == 1.0);
}

TEST_CASE("HoC fitness is standard normal at scale sigma", "[generators]") {
  auto c = config(Model::Hoc, 16, 2);
  c.sigma_hoc = 2.0;
  const auto l = generate(c);
  const std::vector<double> f(l.fitness().begin(), l.fitness().end());
  CHECK(stats::mean(f) == Approx(0.0).margin(0.03));
  CHECK(std::sqrt(stats::variance(f)) == Approx(2.0).margin(0.03));
}

TEST_CASE("RMF limiting behaviour", "[generators][property]") {
  for (std::uint64_t seed : {1, 2, 3}) {
    auto c = config(Model::Rmf, 8, seed);
    c.sigma_hoc = 0.0;
    CHECK(*gamma1(generate(c)) == Approx(1.0).margin(1e-9));
  }
  const double mean_gamma = mean_over_seeds(20, [](std::uint64_t s) {
    auto c = config(Model::Rmf, 8, s);
    c.mu_a = 0.0;
    c.sigma_a = 0.0;
    return *gamma1(generate(c));
  });
  CHECK(std::abs(mean_gamma) <= 0.1);
}

TEST_CASE("NK local optima fraction rises with k", "[generators][property]") {
  double previous = -1.0;
  for (std::size_t k = 0; k <= 11; ++k) {
    const double phi = mean_over_seeds(20, [k](std::uint64_t s) {
      auto c = config(Model::Nk, 12, s);
      c.k = k;
      return fraction_local_optima(generate(c));
    });
    CHECK(phi > previous);
    previous = phi;
  }
}

TEST_CASE("NK ruggedness trend over k", "[generators][ruggedness][property]") {
  double phi_prev = -1.0, rho_prev = 2.0;
  for (std::size_t k : {0, 2, 4, 8, 11}) {
    double phi = 0, rho = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
      auto c = config(Model::Nk, 12, s);
      c.k = k;
      const auto l = generate(c);
      phi += fraction_local_optima(l) / 20.0;
      rho += *autocorrelation(l, 200, 12, s) / 20.0;
    }
    CHECK(phi >= phi_prev);
    CHECK(rho <= rho_prev);
    phi_prev = phi;
    rho_prev = rho;
  }
}
