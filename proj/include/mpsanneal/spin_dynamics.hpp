#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "error.hpp"
#include "instance.hpp"
#include "random.hpp"
#include "schedule.hpp"

namespace mpsanneal {

using Vec3 = Eigen::Vector3d;

// One O(3) unit vector per site; a spin-coherent product state.
struct ClassicalSpinState {
  std::vector<Vec3> n;

  static ClassicalSpinState uniform(std::size_t sites, const Vec3& direction) {
    return {std::vector<Vec3>(sites, direction.normalized())};
  }
  // Ground state of the transverse term for delta > 0: every spin along -x.
  static ClassicalSpinState transverse_ground(std::size_t sites) {
    return uniform(sites, Vec3(-1.0, 0.0, 0.0));
  }
  static ClassicalSpinState from_config(const SpinConfig& config) {
    ClassicalSpinState s;
    for (std::size_t i = 0; i < config.size(); ++i) s.n.emplace_back(0.0, 0.0, config[i]);
    return s;
  }
  static ClassicalSpinState from_angles(const std::vector<double>& theta, const std::vector<double>& phi) {
    if (theta.size() != phi.size()) throw DimensionError("angle arrays differ in length");
    ClassicalSpinState s;
    for (std::size_t i = 0; i < theta.size(); ++i)
      s.n.emplace_back(std::sin(theta[i]) * std::cos(phi[i]), std::sin(theta[i]) * std::sin(phi[i]),
                       std::cos(theta[i]));
    return s;
  }

  std::size_t size() const noexcept { return n.size(); }

  double max_norm_error() const {
    double m = 0.0;
    for (const auto& v : n) m = std::max(m, std::abs(v.norm() - 1.0));
    return m;
  }

  void renormalize() {
    for (auto& v : n) v.normalize();
  }

  // sign(n^z) per site, zero read as +1.
  SpinConfig readout() const {
    std::vector<int> s(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) s[i] = n[i].z() >= 0.0 ? 1 : -1;
    return SpinConfig(std::move(s));
  }
};

struct DynamicsParams {
  double gamma = 0.1;
  double temperature = 0.0;
  double dt = 0.01;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(gamma >= 0.0)) throw ArgumentError("gamma must be non-negative");
    if (!(temperature >= 0.0)) throw ArgumentError("temperature must be non-negative");
    if (!(dt > 0.0)) throw ArgumentError("dt must be positive");
  }
};

// Mean-field energy A sum_i delta n^x_i + B [sum_<ij> J_ij n^z_i n^z_j + sum_i h_i n^z_i].
inline double mean_field_energy(const IsingInstance& instance, SchedulePoint p,
                                const ClassicalSpinState& state) {
  if (state.size() != instance.size()) throw DimensionError("state size does not match instance");
  double transverse = 0.0;
  double target = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    transverse += instance.delta() * state.n[i].x();
    target += instance.field(i) * state.n[i].z();
  }
  for (const auto& e : instance.edges()) target += e.coupling * state.n[e.i].z() * state.n[e.j].z();
  return p.a * transverse + p.b * target;
}

// dH/dn_i = (A delta, 0, B (sum_j J_ij n^z_j + h_i)).
inline std::vector<Vec3> effective_field(const IsingInstance& instance, SchedulePoint p,
                                         const ClassicalSpinState& state) {
  if (state.size() != instance.size()) throw DimensionError("state size does not match instance");
  std::vector<Vec3> field(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    double local = instance.field(i);
    for (const auto& nb : instance.neighbours(i)) local += nb.coupling * state.n[nb.site].z();
    field[i] = Vec3(p.a * instance.delta(), 0.0, p.b * local);
  }
  return field;
}

namespace detail {

// dn/dt = precession * n x (B + eta) - gamma n x (n x B) with B = -dH/dn.
// The thermal field enters through the precession term only, which makes
// exp(-H/T) the stationary measure for <eta eta> = 2 gamma T.
inline void llg_rhs(const IsingInstance& instance, SchedulePoint p, const ClassicalSpinState& s,
                    double gamma, double precession, const std::vector<Vec3>& noise,
                    std::vector<Vec3>& out) {
  const auto grad = effective_field(instance, p, s);
  out.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Vec3 b = -grad[i];
    const Vec3& n = s.n[i];
    Vec3 drive = b;
    if (!noise.empty()) drive += noise[i];
    out[i] = precession * n.cross(drive) - gamma * n.cross(n.cross(b));
  }
}

inline void heun_step(ClassicalSpinState& state, const IsingInstance& instance, SchedulePoint p,
                      double gamma, double precession, double dt, const std::vector<Vec3>& noise,
                      long step_index) {
  std::vector<Vec3> k1, k2;
  llg_rhs(instance, p, state, gamma, precession, noise, k1);
  ClassicalSpinState predictor = state;
  for (std::size_t i = 0; i < state.size(); ++i) predictor.n[i] += dt * k1[i];
  llg_rhs(instance, p, predictor, gamma, precession, noise, k2);
  for (std::size_t i = 0; i < state.size(); ++i) {
    state.n[i] += 0.5 * dt * (k1[i] + k2[i]);
    if (!state.n[i].allFinite()) throw NumericalError("LLG integration produced NaN", step_index);
    state.n[i].normalize();
  }
}

}  // namespace detail

// One stochastic Heun (Stratonovich) step of the Landau-Lifshitz-Gilbert
// dynamics at fixed schedule point. Thermal noise has per-component variance
// 2 gamma T / dt and is shared by predictor and corrector.
inline void llg_step(ClassicalSpinState& state, const IsingInstance& instance, SchedulePoint p,
                     const DynamicsParams& params, Rng& rng, long step_index = 0) {
  params.validate();
  if (state.size() != instance.size()) throw DimensionError("state size does not match instance");
  std::vector<Vec3> noise;
  if (params.temperature > 0.0 && params.gamma > 0.0) {
    const double sigma = std::sqrt(2.0 * params.gamma * params.temperature / params.dt);
    noise.resize(state.size());
    for (auto& v : noise) v = Vec3(sigma * rng.normal(), sigma * rng.normal(), sigma * rng.normal());
  }
  detail::heun_step(state, instance, p, params.gamma, 1.0, params.dt, noise, step_index);
}

struct TrajectorySample {
  double t = 0.0;
  ClassicalSpinState state;
};

struct ClassicalAnnealResult {
  SpinConfig config;
  ClassicalSpinState final_state;
  std::vector<TrajectorySample> trajectory;
  double acceptance_rate = 0.0;  // Metropolis only
};

// Strong-dissipation limit: dn/dt = -gamma P_n dH/dn along the schedule, no
// precession and no noise. `record_every` > 0 keeps every k-th state.
inline ClassicalAnnealResult gradient_descent_anneal(
    const IsingInstance& instance, const AnnealSchedule& schedule, std::size_t steps,
    double gamma = 1.0, std::optional<ClassicalSpinState> initial = std::nullopt,
    std::size_t record_every = 0) {
  if (steps == 0) throw ArgumentError("steps must be positive");
  ClassicalSpinState state = initial ? *initial : ClassicalSpinState::transverse_ground(instance.size());
  if (state.size() != instance.size()) throw DimensionError("state size does not match instance");
  const double dt = schedule.total_time() / static_cast<double>(steps);
  ClassicalAnnealResult result;
  if (record_every > 0) result.trajectory.push_back({0.0, state});
  for (std::size_t s = 0; s < steps; ++s) {
    const auto p = schedule.at((static_cast<double>(s) + 0.5) * dt);
    detail::heun_step(state, instance, p, gamma, 0.0, dt, {}, static_cast<long>(s));
    if (record_every > 0 && (s + 1) % record_every == 0)
      result.trajectory.push_back({(static_cast<double>(s) + 1.0) * dt, state});
  }
  result.config = state.readout();
  result.final_state = std::move(state);
  return result;
}

// Full stochastic LLG along the schedule; step count is ceil(T / dt).
inline ClassicalAnnealResult llg_anneal(const IsingInstance& instance, const AnnealSchedule& schedule,
                                        const DynamicsParams& params,
                                        std::optional<ClassicalSpinState> initial = std::nullopt,
                                        std::size_t record_every = 0) {
  params.validate();
  ClassicalSpinState state = initial ? *initial : ClassicalSpinState::transverse_ground(instance.size());
  const auto steps = static_cast<std::size_t>(std::ceil(schedule.total_time() / params.dt - 1e-9));
  DynamicsParams p = params;
  p.dt = schedule.total_time() / static_cast<double>(steps);
  Rng rng(params.seed);
  ClassicalAnnealResult result;
  if (record_every > 0) result.trajectory.push_back({0.0, state});
  for (std::size_t s = 0; s < steps; ++s) {
    llg_step(state, instance, schedule.at((static_cast<double>(s) + 0.5) * p.dt), p, rng,
             static_cast<long>(s));
    if (record_every > 0 && (s + 1) % record_every == 0)
      result.trajectory.push_back({(static_cast<double>(s) + 1.0) * p.dt, state});
  }
  result.config = state.readout();
  result.final_state = std::move(state);
  return result;
}

// One Metropolis sweep over the sites in order with fresh uniform proposals on
// the sphere. Returns the number of accepted moves.
inline std::size_t metropolis_sweep(ClassicalSpinState& state, const IsingInstance& instance,
                                    SchedulePoint p, double temperature, Rng& rng) {
  if (!(temperature > 0.0)) throw ArgumentError("Metropolis needs T > 0; use gradient descent at T = 0");
  std::size_t accepted = 0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    double x, y, z;
    rng.unit_vector(x, y, z);
    double local = instance.field(i);
    for (const auto& nb : instance.neighbours(i)) local += nb.coupling * state.n[nb.site].z();
    const Vec3& old = state.n[i];
    const double dh = p.a * instance.delta() * (x - old.x()) + p.b * local * (z - old.z());
    if (dh <= 0.0 || rng.uniform() < std::exp(-dh / temperature)) {
      state.n[i] = Vec3(x, y, z);
      ++accepted;
    }
  }
  return accepted;
}

// Metropolis dynamics over O(3) vectors; the schedule advances once per sweep.
inline ClassicalAnnealResult metropolis_anneal(const IsingInstance& instance,
                                               const AnnealSchedule& schedule, std::size_t sweeps,
                                               const DynamicsParams& params,
                                               std::optional<ClassicalSpinState> initial = std::nullopt) {
  if (!(params.temperature > 0.0))
    throw ArgumentError("Metropolis needs T > 0; use gradient descent at T = 0");
  if (sweeps == 0) throw ArgumentError("sweeps must be positive");
  ClassicalSpinState state = initial ? *initial : ClassicalSpinState::transverse_ground(instance.size());
  if (state.size() != instance.size()) throw DimensionError("state size does not match instance");
  Rng rng(params.seed);
  std::size_t accepted = 0;
  const double T = schedule.total_time();
  for (std::size_t s = 0; s < sweeps; ++s) {
    const auto p = schedule.at((static_cast<double>(s) + 0.5) / static_cast<double>(sweeps) * T);
    accepted += metropolis_sweep(state, instance, p, params.temperature, rng);
  }
  ClassicalAnnealResult result;
  result.acceptance_rate =
      static_cast<double>(accepted) / static_cast<double>(sweeps * state.size());
  result.config = state.readout();
  result.final_state = std::move(state);
  return result;
}

}  // namespace mpsanneal
