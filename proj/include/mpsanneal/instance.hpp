#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "random.hpp"

namespace mpsanneal {

enum class Topology { chain, ladder16 };

inline std::string_view to_string(Topology t) {
  return t == Topology::chain ? "chain" : "ladder16";
}

inline Topology topology_from_string(std::string_view s) {
  if (s == "chain") return Topology::chain;
  if (s == "ladder16") return Topology::ladder16;
  throw ArgumentError("unknown topology '" + std::string(s) + "'");
}

// Coupling J between sites i < j.
struct Edge {
  int i = 0;
  int j = 0;
  double coupling = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

inline constexpr double max_abs_coupling = 1.0;
inline constexpr double max_abs_field = 2.0;

// Embeddable two-leg ladder with 16 spins. Spin 2k sits on the upper leg and
// spin 2k+1 on the lower leg of rung k, so a rung is one 4-level hyper-spin.
// All eight rungs and all seven upper-leg links are kept; the lower leg keeps
// only the links leaving even rungs, which leaves four square plaquettes
// joined by single upper-leg links. This table is the normative edge set.
inline constexpr int ladder16_spins = 16;
inline constexpr int ladder16_rungs = 8;

inline constexpr auto ladder16_links = [] {
  std::array<std::pair<int, int>, 19> links{};
  std::size_t n = 0;
  for (int k = 0; k < ladder16_rungs; ++k) links[n++] = {2 * k, 2 * k + 1};
  for (int k = 0; k + 1 < ladder16_rungs; ++k) links[n++] = {2 * k, 2 * k + 2};
  for (int k = 0; k + 1 < ladder16_rungs; k += 2) links[n++] = {2 * k + 1, 2 * k + 3};
  return links;
}();

// Classical assignment s_i in {+1, -1}.
class SpinConfig {
 public:
  SpinConfig() = default;
  explicit SpinConfig(std::vector<int> values) {
    values_.reserve(values.size());
    for (int v : values) {
      if (v != 1 && v != -1) throw ArgumentError("spin values must be +1 or -1");
      values_.push_back(static_cast<std::int8_t>(v));
    }
  }
  static SpinConfig all_up(std::size_t n) { return SpinConfig(std::vector<int>(n, 1)); }

  // Parses a string of '+' and '-' characters.
  static SpinConfig from_string(std::string_view s) {
    std::vector<int> v;
    for (char c : s) {
      if (c == '+') v.push_back(1);
      else if (c == '-') v.push_back(-1);
      else throw ArgumentError("spin string may only contain '+' and '-'");
    }
    return SpinConfig(std::move(v));
  }

  std::size_t size() const noexcept { return values_.size(); }
  int operator[](std::size_t i) const { return values_[i]; }
  void set(std::size_t i, int v) {
    if (v != 1 && v != -1) throw ArgumentError("spin values must be +1 or -1");
    values_[i] = static_cast<std::int8_t>(v);
  }
  void flip(std::size_t i) { values_[i] = static_cast<std::int8_t>(-values_[i]); }

  std::string to_string() const {
    std::string s;
    s.reserve(values_.size());
    for (auto v : values_) s.push_back(v > 0 ? '+' : '-');
    return s;
  }

  friend bool operator==(const SpinConfig&, const SpinConfig&) = default;
  friend auto operator<=>(const SpinConfig&, const SpinConfig&) = default;

 private:
  std::vector<std::int8_t> values_;
};

// Transverse-field Ising problem
//   H_target = sum_<ij> J_ij s^z_i s^z_j + sum_i h_i s^z_i,   H_start = sum_i delta s^x_i.
// Immutable once constructed; the constructor enforces all invariants.
class IsingInstance {
 public:
  IsingInstance(Topology topology, std::vector<double> fields, std::vector<Edge> edges,
                double delta = 1.0)
      : topology_(topology), fields_(std::move(fields)), edges_(std::move(edges)), delta_(delta) {
    validate();
    for (auto& e : edges_)
      if (e.i > e.j) std::swap(e.i, e.j);
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return std::pair(a.i, a.j) < std::pair(b.i, b.j); });
    neighbours_.resize(fields_.size());
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      neighbours_[edges_[k].i].push_back({edges_[k].j, edges_[k].coupling});
      neighbours_[edges_[k].j].push_back({edges_[k].i, edges_[k].coupling});
    }
  }

  struct Neighbour {
    int site;
    double coupling;
  };

  Topology topology() const noexcept { return topology_; }
  std::size_t size() const noexcept { return fields_.size(); }
  double delta() const noexcept { return delta_; }
  std::span<const double> fields() const noexcept { return fields_; }
  double field(std::size_t i) const { return fields_[i]; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const Neighbour> neighbours(std::size_t i) const { return neighbours_[i]; }

  bool has_zero_fields() const {
    return std::all_of(fields_.begin(), fields_.end(), [](double h) { return h == 0.0; });
  }

  friend bool operator==(const IsingInstance& a, const IsingInstance& b) {
    return a.topology_ == b.topology_ && a.fields_ == b.fields_ && a.edges_ == b.edges_ &&
           a.delta_ == b.delta_;
  }

 private:
  void validate() const {
    const auto n = static_cast<int>(fields_.size());
    if (n < 1) throw StructureError("instance needs at least one site");
    if (!(delta_ > 0.0) || !std::isfinite(delta_)) throw RangeError("delta must be positive");
    for (int i = 0; i < n; ++i) {
      const double h = fields_[i];
      if (!std::isfinite(h) || std::abs(h) > max_abs_field)
        throw RangeError("field h_" + std::to_string(i) + " = " + std::to_string(h) +
                         " outside |h| <= 2");
    }
    std::vector<std::pair<int, int>> seen;
    for (const auto& e : edges_) {
      if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n)
        throw StructureError("edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                             ") references a missing site");
      if (e.i == e.j) throw StructureError("self-loop on site " + std::to_string(e.i));
      if (!std::isfinite(e.coupling) || std::abs(e.coupling) > max_abs_coupling)
        throw RangeError("coupling J_" + std::to_string(e.i) + "," + std::to_string(e.j) + " = " +
                         std::to_string(e.coupling) + " outside |J| <= 1");
      seen.emplace_back(std::min(e.i, e.j), std::max(e.i, e.j));
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
      throw StructureError("duplicate edge");
    if (topology_ == Topology::chain) {
      if (seen.size() != fields_.size() - 1)
        throw StructureError("chain of " + std::to_string(n) + " sites needs " +
                             std::to_string(n - 1) + " edges");
      for (std::size_t k = 0; k < seen.size(); ++k)
        if (seen[k] != std::pair<int, int>(static_cast<int>(k), static_cast<int>(k) + 1))
          throw StructureError("chain edges must be (i, i+1)");
    } else {
      if (n != ladder16_spins) throw StructureError("ladder16 needs exactly 16 sites");
      std::vector<std::pair<int, int>> expected(ladder16_links.begin(), ladder16_links.end());
      std::sort(expected.begin(), expected.end());
      if (seen != expected) throw StructureError("edge set differs from the ladder16 table");
    }
  }

  Topology topology_;
  std::vector<double> fields_;
  std::vector<Edge> edges_;
  double delta_;
  std::vector<std::vector<Neighbour>> neighbours_;
};

// E = sum_<ij> J_ij s_i s_j + sum_i h_i s_i.
inline double classical_energy(const IsingInstance& instance, const SpinConfig& config) {
  if (config.size() != instance.size())
    throw DimensionError("config has " + std::to_string(config.size()) + " spins, instance has " +
                         std::to_string(instance.size()));
  double e = 0.0;
  for (const auto& edge : instance.edges()) e += edge.coupling * config[edge.i] * config[edge.j];
  for (std::size_t i = 0; i < instance.size(); ++i) e += instance.field(i) * config[i];
  return e;
}

// Energy change from flipping spin i: -2 s_i (h_i + sum_j J_ij s_j).
inline double flip_energy_change(const IsingInstance& instance, const SpinConfig& config,
                                 std::size_t i) {
  double local = instance.field(i);
  for (const auto& nb : instance.neighbours(i)) local += nb.coupling * config[nb.site];
  return -2.0 * config[i] * local;
}

// Random couplings from +-{0.2, 0.4, 0.6, 0.8, 1}, ten equally likely values.
inline double draw_coupling(Rng& rng) {
  const auto k = static_cast<int>(rng.below(10));
  const double magnitude = (k % 5 + 1) / 5.0;
  return k < 5 ? magnitude : -magnitude;
}

// Random fields from {-1, -0.8, ..., 0, ..., 0.8, 1}, eleven equally likely values.
inline double draw_field(Rng& rng) {
  const auto k = static_cast<int>(rng.below(11)) - 5;
  return k / 5.0;
}

// Random chain. Fields h_0..h_{N-1} are drawn first, then couplings along the chain.
inline IsingInstance generate_random_chain(std::size_t length, std::uint64_t seed,
                                           double delta = 1.0) {
  if (length < 2) throw ArgumentError("chain length must be at least 2");
  Rng rng(seed);
  std::vector<double> h(length);
  for (auto& v : h) v = draw_field(rng);
  std::vector<Edge> edges;
  edges.reserve(length - 1);
  for (std::size_t i = 0; i + 1 < length; ++i)
    edges.push_back({static_cast<int>(i), static_cast<int>(i) + 1, draw_coupling(rng)});
  return IsingInstance(Topology::chain, std::move(h), std::move(edges), delta);
}

// Random instance on the fixed ladder16 edge table; couplings follow table order.
inline IsingInstance generate_ladder16(std::uint64_t seed, double delta = 1.0) {
  Rng rng(seed);
  std::vector<double> h(ladder16_spins);
  for (auto& v : h) v = draw_field(rng);
  std::vector<Edge> edges;
  for (const auto& [i, j] : ladder16_links) edges.push_back({i, j, draw_coupling(rng)});
  return IsingInstance(Topology::ladder16, std::move(h), std::move(edges), delta);
}

}  // namespace mpsanneal
