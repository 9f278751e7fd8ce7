// Classifies a small cohort by threshold Schmidt rank and prints the histogram.
#include <cstdio>
#include <map>

#include "mpsanneal/mpsanneal.hpp"

using namespace mpsanneal;

int main() {
  CohortSpec spec;
  spec.n = 10;
  spec.count = 12;
  spec.seed = 1;
  const Cohort cohort = generate_cohort(spec);
  std::map<int, int> hist;
  int unclassified = 0;
  for (const auto& e : cohort.entries) {
    const auto c = classify_chi_star(e.instance, e.truth, {1, 2, 3, 4}, default_time_grid(e.instance), default_dt,
                                     ClassifyMode::stop_at_chi_star);
    if (c.chi_star) {
      ++hist[*c.chi_star];
      std::printf("%s chi* = %d at T = %g\n", e.id.c_str(), *c.chi_star, *c.t_star.at(*c.chi_star));
    } else {
      ++unclassified;
      std::printf("%s unclassified\n", e.id.c_str());
    }
  }
  for (const auto& [chi, n] : hist) std::printf("chi* = %d: %d\n", chi, n);
  std::printf("unclassified: %d\n", unclassified);
}
