// Anneals a chain that traps gradient descent at increasing Schmidt rank and prints the outcome.
#include <cstdio>

#include "mpsanneal/mpsanneal.hpp"

using namespace mpsanneal;

int main() {
  const IsingInstance inst = generate_random_chain(10, 6);
  const GroundTruth truth = ground_state(inst);
  std::printf("ground energy %.6f, degeneracy %llu\n", truth.energy,
              static_cast<unsigned long long>(truth.degeneracy));

  const double t0 = default_t0(inst);
  const auto gd = gradient_descent_anneal(inst, default_schedule(t0), step_count(t0, default_dt));
  std::printf("gradient descent: %s energy %.6f\n", gd.config.to_string().c_str(), classical_energy(inst, gd.config));

  for (int chi = 1; chi <= 3; ++chi) {
    const auto r = tebd_anneal(inst, default_schedule(t0), chi, default_dt, truth).record;
    std::printf("chi %d: %s residual %.3e discarded %.2e %s\n", chi, r.readout.to_string().c_str(), r.residual,
                r.max_discarded_weight, r.success ? "success" : "failure");
  }
}
