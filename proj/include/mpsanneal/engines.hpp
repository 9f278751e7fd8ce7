#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "error.hpp"
#include "exact.hpp"
#include "instance.hpp"
#include "langevin_mps.hpp"
#include "schedule.hpp"
#include "spin_dynamics.hpp"
#include "tebd.hpp"

namespace mpsanneal {

enum class Engine { tebd, langevin, gd, llg, metropolis };

inline std::string to_string(Engine e) {
  switch (e) {
    case Engine::tebd: return "tebd";
    case Engine::langevin: return "langevin";
    case Engine::gd: return "gd";
    case Engine::llg: return "llg";
    case Engine::metropolis: return "metropolis";
  }
  return "?";
}

inline Engine engine_from_string(std::string_view s) {
  if (s == "tebd") return Engine::tebd;
  if (s == "langevin") return Engine::langevin;
  if (s == "gd") return Engine::gd;
  if (s == "llg") return Engine::llg;
  if (s == "metropolis") return Engine::metropolis;
  throw ArgumentError("unknown engine '" + std::string(s) + "'");
}

// Quantum engines use chi; classical engines ignore it and record chi = 0.
inline bool uses_rank(Engine e) { return e == Engine::tebd || e == Engine::langevin; }
inline bool is_stochastic(Engine e) {
  return e == Engine::llg || e == Engine::metropolis || e == Engine::langevin;
}

struct EngineOptions {
  Engine engine = Engine::tebd;
  double dt = default_dt;
  double gamma = 0.0;  // 0 selects the engine default for gd (1) and llg (0.1)
  double temperature = 0.0;
  std::optional<AnnealSchedule> shape;  // rescaled to each sweep time; linear if empty
};

inline double effective_gamma(const EngineOptions& o) {
  if (o.gamma > 0.0) return o.gamma;
  if (o.engine == Engine::gd) return 1.0;
  if (o.engine == Engine::llg) return 0.1;
  return o.gamma;
}

namespace detail {

inline RunRecord classical_record(const IsingInstance& instance, const GroundTruth& truth,
                                  const ClassicalSpinState& final_state, const SpinConfig& readout) {
  RunRecord rec;
  rec.chi = 0;
  rec.readout = readout;
  rec.readout_energy = classical_energy(instance, readout);
  rec.final_energy = mean_field_energy(instance, {0.0, 1.0}, final_state);
  rec.ground_energy = truth.energy;
  rec.residual = rec.final_energy - truth.energy;
  rec.success = is_success(truth, instance, readout);
  return rec;
}

}  // namespace detail

inline RunRecord run_engine(const IsingInstance& instance, const GroundTruth& truth, int chi, double sweep_time,
                            const EngineOptions& o, std::uint64_t seed) {
  const AnnealSchedule schedule = o.shape ? o.shape->rescaled(sweep_time) : default_schedule(sweep_time);
  const double gamma = effective_gamma(o);
  RunRecord rec;
  switch (o.engine) {
    case Engine::tebd:
      rec = tebd_anneal(instance, schedule, chi, o.dt, truth).record;
      break;
    case Engine::langevin: {
      LangevinMpsParams p;
      p.gamma = gamma;
      p.temperature = o.temperature;
      p.dt = o.dt;
      p.seed = seed;
      rec = langevin_anneal(instance, schedule, chi, p, truth).record;
      break;
    }
    case Engine::gd: {
      const auto r = gradient_descent_anneal(instance, schedule, step_count(sweep_time, o.dt), gamma);
      rec = detail::classical_record(instance, truth, r.final_state, r.config);
      break;
    }
    case Engine::llg: {
      DynamicsParams p;
      p.gamma = gamma;
      p.temperature = o.temperature;
      p.dt = o.dt;
      p.seed = seed;
      const auto r = llg_anneal(instance, schedule, p);
      rec = detail::classical_record(instance, truth, r.final_state, r.config);
      break;
    }
    case Engine::metropolis: {
      DynamicsParams p;
      p.temperature = o.temperature;
      p.seed = seed;
      const auto r = metropolis_anneal(instance, schedule, step_count(sweep_time, o.dt), p);
      rec = detail::classical_record(instance, truth, r.final_state, r.config);
      break;
    }
  }
  rec.engine = to_string(o.engine);
  rec.sweep_time = sweep_time;
  rec.dt = sweep_time / static_cast<double>(step_count(sweep_time, o.dt));
  rec.gamma = o.engine == Engine::tebd ? 0.0 : gamma;
  rec.temperature = o.temperature;
  rec.seed = is_stochastic(o.engine) ? seed : 0;
  if (!uses_rank(o.engine)) rec.chi = 0;
  return rec;
}

}  // namespace mpsanneal
