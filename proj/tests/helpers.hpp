#pragma once

#include <vector>

#include "mpsanneal/instance.hpp"

namespace testing_support {

inline mpsanneal::IsingInstance chain(std::vector<double> h, const std::vector<double>& j, double delta = 1.0) {
  std::vector<mpsanneal::Edge> edges;
  for (std::size_t i = 0; i < j.size(); ++i) edges.push_back({static_cast<int>(i), static_cast<int>(i) + 1, j[i]});
  return mpsanneal::IsingInstance(mpsanneal::Topology::chain, std::move(h), std::move(edges), delta);
}

inline mpsanneal::IsingInstance uniform_chain(std::size_t n, double h, double j, double delta = 1.0) {
  return chain(std::vector<double>(n, h), std::vector<double>(n - 1, j), delta);
}

inline mpsanneal::IsingInstance ladder(const std::vector<double>& h, double rung, double leg) {
  std::vector<mpsanneal::Edge> edges;
  for (const auto& [i, j] : mpsanneal::ladder16_links) edges.push_back({i, j, j == i + 1 ? rung : leg});
  return mpsanneal::IsingInstance(mpsanneal::Topology::ladder16, h, std::move(edges));
}

}  // namespace testing_support
