#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "error.hpp"
#include "instance.hpp"

namespace mpsanneal {

// Energies closer than this are treated as degenerate.
inline constexpr double degeneracy_tolerance = 1e-9;
inline constexpr std::size_t max_listed_configs = 64;
inline constexpr std::size_t bruteforce_max_sites = 24;

// Ground-state energy with the degenerate minima. `configs` holds at most
// max_listed_configs entries; `degeneracy` is the exact count (saturating at
// 2^64 - 1).
struct GroundTruth {
  double energy = 0.0;
  std::vector<SpinConfig> configs;
  std::uint64_t degeneracy = 0;

  bool capped() const noexcept { return degeneracy > configs.size(); }
  bool contains(const SpinConfig& c) const {
    return std::find(configs.begin(), configs.end(), c) != configs.end();
  }
};

namespace detail {

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max()
                                                           : a + b;
}

inline SpinConfig config_from_bits(std::uint64_t bits, std::size_t n) {
  std::vector<int> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = (bits >> i) & 1U ? -1 : 1;
  return SpinConfig(std::move(v));
}

}  // namespace detail

// Exhaustive search over all 2^N assignments.
inline GroundTruth ground_state_bruteforce(const IsingInstance& instance) {
  const std::size_t n = instance.size();
  if (n > bruteforce_max_sites)
    throw SizeError("brute force supports at most 24 sites (got " + std::to_string(n) +
                    "); use ground_state_chain_dp for chains");
  const auto edges = instance.edges();
  const auto fields = instance.fields();
  const std::uint64_t total = std::uint64_t{1} << n;

  double best = std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> minima;
  std::uint64_t count = 0;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    double e = 0.0;
    for (const auto& edge : edges) {
      const bool anti = ((bits >> edge.i) ^ (bits >> edge.j)) & 1U;
      e += anti ? -edge.coupling : edge.coupling;
    }
    for (std::size_t i = 0; i < n; ++i) e += (bits >> i) & 1U ? -fields[i] : fields[i];

    if (e < best - degeneracy_tolerance) {
      best = e;
      minima.clear();
      count = 0;
    }
    if (std::abs(e - best) <= degeneracy_tolerance) {
      best = std::min(best, e);
      ++count;
      if (minima.size() < max_listed_configs) minima.push_back(bits);
    }
  }
  GroundTruth gt;
  gt.degeneracy = count;
  for (auto bits : minima) gt.configs.push_back(detail::config_from_bits(bits, n));
  gt.energy = classical_energy(instance, gt.configs.front());
  return gt;
}

// Transfer-matrix dynamic programme over the two-state frontier s_i = +-1.
// Ties are carried through the lattice, so the degeneracy is exact and every
// listed configuration is a true minimum.
inline GroundTruth ground_state_chain_dp(const IsingInstance& instance) {
  if (instance.topology() != Topology::chain)
    throw TopologyError("ground_state_chain_dp requires a chain instance");
  const std::size_t n = instance.size();
  const auto edges = instance.edges();
  constexpr std::array<int, 2> spin{1, -1};

  // best[i][a]: minimum energy of sites 0..i with s_i = spin[a].
  std::vector<std::array<double, 2>> best(n);
  std::vector<std::array<std::uint64_t, 2>> ways(n);
  // from[i][a] bit b set when s_{i-1} = spin[b] attains best[i][a].
  std::vector<std::array<std::uint8_t, 2>> from(n, {0, 0});

  for (int a = 0; a < 2; ++a) {
    best[0][a] = instance.field(0) * spin[a];
    ways[0][a] = 1;
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double j = edges[i - 1].coupling;
    for (int a = 0; a < 2; ++a) {
      std::array<double, 2> cand{};
      for (int b = 0; b < 2; ++b) cand[b] = best[i - 1][b] + j * spin[b] * spin[a];
      const double m = std::min(cand[0], cand[1]);
      std::uint64_t w = 0;
      for (int b = 0; b < 2; ++b) {
        if (cand[b] - m <= degeneracy_tolerance) {
          from[i][a] |= static_cast<std::uint8_t>(1U << b);
          w = detail::saturating_add(w, ways[i - 1][b]);
        }
      }
      best[i][a] = m + instance.field(i) * spin[a];
      ways[i][a] = w;
    }
  }

  const double m = std::min(best[n - 1][0], best[n - 1][1]);
  GroundTruth gt;
  std::array<bool, 2> final_ok{};
  for (int a = 0; a < 2; ++a) {
    final_ok[a] = best[n - 1][a] - m <= degeneracy_tolerance;
    if (final_ok[a]) gt.degeneracy = detail::saturating_add(gt.degeneracy, ways[n - 1][a]);
  }

  // Depth-first enumeration of argmin paths, right to left, stopping at the cap.
  std::vector<int> current(n, 1);
  auto visit = [&](auto&& self, std::size_t i, int a) -> void {
    if (gt.configs.size() >= max_listed_configs) return;
    current[i] = spin[a];
    if (i == 0) {
      gt.configs.emplace_back(current);
      return;
    }
    for (int b = 0; b < 2; ++b)
      if (from[i][a] & (1U << b)) self(self, i - 1, b);
  };
  for (int a = 0; a < 2; ++a)
    if (final_ok[a]) visit(visit, n - 1, a);

  gt.energy = classical_energy(instance, gt.configs.front());
  return gt;
}

// Exhaustive search on the ladder16 graph, walking the 2^16 states in Gray-code
// order with incremental energy updates.
inline GroundTruth ground_state_ladder16(const IsingInstance& instance) {
  if (instance.topology() != Topology::ladder16)
    throw TopologyError("ground_state_ladder16 requires a ladder16 instance");
  const std::size_t n = instance.size();
  SpinConfig config = SpinConfig::all_up(n);
  double e = classical_energy(instance, config);
  double best = e;
  std::uint64_t count = 1;
  std::vector<SpinConfig> minima{config};

  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto site = static_cast<std::size_t>(std::countr_zero(step));
    e += flip_energy_change(instance, config, site);
    config.flip(site);
    if (e < best - degeneracy_tolerance) {
      best = e;
      count = 0;
      minima.clear();
    }
    if (std::abs(e - best) <= degeneracy_tolerance) {
      best = std::min(best, e);
      ++count;
      if (minima.size() < max_listed_configs) minima.push_back(config);
    }
  }
  GroundTruth gt;
  gt.degeneracy = count;
  gt.configs = std::move(minima);
  gt.energy = classical_energy(instance, gt.configs.front());
  return gt;
}

// Picks the exact solver for the instance topology.
inline GroundTruth ground_state(const IsingInstance& instance) {
  return instance.topology() == Topology::chain ? ground_state_chain_dp(instance)
                                                : ground_state_ladder16(instance);
}

}  // namespace mpsanneal
