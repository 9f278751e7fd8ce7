#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <limits>
#include <set>

#include "helpers.hpp"
#include "mpsanneal/exact.hpp"

using namespace mpsanneal;
using testing_support::chain;
using testing_support::ladder;
using testing_support::uniform_chain;

namespace {

std::set<SpinConfig> as_set(const GroundTruth& g) { return {g.configs.begin(), g.configs.end()}; }

void check_truth_invariants(const IsingInstance& inst, const GroundTruth& g) {
  REQUIRE(g.degeneracy >= 1);
  REQUIRE_FALSE(g.configs.empty());
  CHECK(as_set(g).size() == g.configs.size());
  for (const auto& c : g.configs) CHECK(classical_energy(inst, c) == Catch::Approx(g.energy).margin(1e-9));
}

}  // namespace

TEST_CASE("brute force on tiny instances", "[exact]") {
  const auto fm = uniform_chain(3, 0.0, -1.0);
  const auto g = ground_state_bruteforce(fm);
  CHECK(g.energy == Catch::Approx(-2.0));
  CHECK(g.degeneracy == 2);
  CHECK(as_set(g) == std::set<SpinConfig>{SpinConfig::from_string("+++"), SpinConfig::from_string("---")});

  const auto one = ground_state_bruteforce(IsingInstance(Topology::chain, {-0.4}, {}));
  CHECK(one.energy == Catch::Approx(-0.4));
  CHECK(one.degeneracy == 1);
  CHECK(one.configs.front() == SpinConfig::from_string("+"));
}

TEST_CASE("brute force equals an explicit enumeration", "[exact]") {
  const auto inst = generate_random_chain(10, 42);
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < 1024; ++mask) {
    std::vector<int> v(10);
    for (int i = 0; i < 10; ++i) v[i] = (mask >> i) & 1 ? -1 : 1;
    best = std::min(best, classical_energy(inst, SpinConfig(v)));
  }
  const auto g = ground_state_bruteforce(inst);
  CHECK(g.energy == Catch::Approx(best).margin(1e-12));
  check_truth_invariants(inst, g);
  CHECK_THROWS_AS(ground_state_bruteforce(generate_random_chain(25, 1)), SizeError);
}

TEST_CASE("chain DP agrees with brute force", "[exact][property]") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const auto inst = generate_random_chain(2 + seed % 19, 1000 + seed);
    const auto dp = ground_state_chain_dp(inst);
    const auto bf = ground_state_bruteforce(inst);
    INFO("seed " << seed);
    CHECK(dp.energy == Catch::Approx(bf.energy).margin(1e-12));
    CHECK(dp.degeneracy == bf.degeneracy);
    if (!bf.capped()) CHECK(as_set(dp) == as_set(bf));
    check_truth_invariants(inst, dp);
  }
}

TEST_CASE("chain DP examples", "[exact]") {
  const auto afm = uniform_chain(4, 0.0, 1.0);
  const auto g = ground_state_chain_dp(afm);
  CHECK(g.energy == Catch::Approx(-3.0));
  CHECK(g.degeneracy == 2);
  CHECK(as_set(g) == std::set<SpinConfig>{SpinConfig::from_string("+-+-"), SpinConfig::from_string("-+-+")});
  CHECK_THROWS_AS(ground_state_chain_dp(generate_ladder16(1)), TopologyError);

  const auto big = generate_random_chain(100, 5);
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = ground_state_chain_dp(big);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  CHECK(ms < 50.0);
  check_truth_invariants(big, r);
}

TEST_CASE("degeneracy list is capped but the count stays exact", "[exact]") {
  const auto free_spins = uniform_chain(12, 0.0, 0.0);
  const auto g = ground_state_chain_dp(free_spins);
  CHECK(g.energy == 0.0);
  CHECK(g.degeneracy == 4096);
  CHECK(g.configs.size() == max_listed_configs);
  CHECK(g.capped());
  check_truth_invariants(free_spins, g);
  CHECK(ground_state_bruteforce(free_spins).degeneracy == 4096);
  // Long zero chains saturate rather than overflow.
  CHECK(ground_state_chain_dp(uniform_chain(70, 0.0, 0.0)).degeneracy == std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("ground truth properties on random instances", "[exact][property]") {
  Rng rng(2024);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = generate_random_chain(30, 77 + seed);
    const auto g = ground_state(inst);
    for (int probe = 0; probe < 1000; ++probe) {
      std::vector<int> v(inst.size());
      for (auto& s : v) s = rng.below(2) ? 1 : -1;
      CHECK(g.energy <= classical_energy(inst, SpinConfig(v)) + 1e-12);
    }
    std::vector<Edge> edges(inst.edges().begin(), inst.edges().end());
    const IsingInstance sym(Topology::chain, std::vector<double>(inst.size(), 0.0), edges);
    CHECK(ground_state(sym).degeneracy % 2 == 0);
  }
}

TEST_CASE("ladder16 oracle", "[exact]") {
  const auto fm = ladder(std::vector<double>(16, 0.0), -1.0, -1.0);
  const auto g = ground_state_ladder16(fm);
  CHECK(g.degeneracy == 2);
  CHECK(g.energy == Catch::Approx(-19.0));
  CHECK(as_set(g) == std::set<SpinConfig>{SpinConfig::all_up(16), SpinConfig::from_string("----------------")});

  std::vector<double> h(16, 0.0);
  h[0] = 0.2;
  const auto broken = ground_state_ladder16(ladder(h, -1.0, -1.0));
  CHECK(broken.degeneracy == 1);
  CHECK(broken.configs.front() == SpinConfig::from_string("----------------"));

  for (std::uint64_t seed : {3u, 4u}) {
    const auto inst = generate_ladder16(seed);
    const auto a = ground_state_ladder16(inst);
    const auto b = ground_state_bruteforce(inst);
    CHECK(a.energy == Catch::Approx(b.energy).margin(1e-12));
    CHECK(a.degeneracy == b.degeneracy);
    CHECK(as_set(a) == as_set(b));
  }
  CHECK_THROWS_AS(ground_state_ladder16(generate_random_chain(16, 1)), TopologyError);
}
