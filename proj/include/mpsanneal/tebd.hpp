#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "error.hpp"
#include "exact.hpp"
#include "instance.hpp"
#include "local_hamiltonian.hpp"
#include "mps.hpp"
#include "schedule.hpp"

namespace mpsanneal {

inline constexpr double default_dt = 0.02;
inline constexpr double success_residual_tolerance = 1e-6;

// Default base sweep time: 10 N in dimensionless units (N = number of spins).
// A configuration default only.
inline double default_t0(const IsingInstance& instance) {
  return 10.0 * static_cast<double>(instance.size());
}

// exp(-i dt h) for Hermitian h.
inline Matrix two_site_gate(const Matrix& h, double dt) {
  if (h.rows() != h.cols()) throw ArgumentError("gate Hamiltonian must be square");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ArgumentError("gate Hamiltonian must be Hermitian");
  if (h.isDiagonal(0.0)) {
    Matrix g = Matrix::Zero(h.rows(), h.cols());
    for (Eigen::Index i = 0; i < h.rows(); ++i) g(i, i) = std::exp(cplx(0.0, -dt * h(i, i).real()));
    return g;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  Vector phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) phases(i) = std::exp(cplx(0.0, -dt * eig.eigenvalues()(i)));
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

namespace detail {

// exp(-i tau h) for real symmetric h, from one eigendecomposition.
template <class Real>
Matrix real_gate(const Real& h, double tau) {
  const Eigen::Index n = h.rows();
  Matrix g = Matrix::Zero(n, n);
  if (h.isDiagonal(0.0)) {
    for (Eigen::Index i = 0; i < n; ++i) g(i, i) = std::exp(cplx(0.0, -tau * h(i, i)));
    return g;
  }
  Eigen::SelfAdjointEigenSolver<Real> eig(h);
  const auto& v = eig.eigenvectors();
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx phase = std::exp(cplx(0.0, -tau * eig.eigenvalues()(i)));
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index r = 0; r < n; ++r) g(r, c) += v(r, i) * phase * v(c, i);
  }
  return g;
}

// Gate Hamiltonians are linear in (A, B); each bond keeps its two parts.
struct BondParts {
  RealMatrix transverse;
  RealMatrix target;
};

inline std::vector<BondParts> bond_parts(const LocalTerms& terms) {
  std::vector<BondParts> out;
  for (int k = 0; k + 1 < terms.sites(); ++k)
    out.push_back({terms.gate_hamiltonian(k, {1.0, 0.0}), terms.gate_hamiltonian(k, {0.0, 1.0})});
  return out;
}

inline Matrix bond_gate(const BondParts& parts, SchedulePoint p, double tau) {
  if (parts.target.rows() == 4) {
    const Eigen::Matrix4d h = p.a * parts.transverse + p.b * parts.target;
    return real_gate(h, tau);
  }
  const RealMatrix h = p.a * parts.transverse + p.b * parts.target;
  return real_gate(h, tau);
}

}  // namespace detail

// Accumulated truncation statistics of a run.
struct TruncationStats {
  double max_discarded = 0.0;
  double total_discarded = 0.0;
  // Product of kept norms before renormalization; 1 - this is the norm
  // deficit the truncations alone would have produced.
  double kept_norm_product = 1.0;

  void add(const TruncationResult& r) {
    max_discarded = std::max(max_discarded, r.discarded_weight);
    total_discarded += r.discarded_weight;
    kept_norm_product *= 1.0 - r.discarded_weight;
  }
};

// Second-order Trotter stepper at fixed rank: half step on even-indexed bonds,
// full step on odd-indexed bonds (site terms shared between gates), half step
// on even-indexed bonds again; every bond truncated to chi after its gate.
class TebdStepper {
 public:
  TebdStepper(const IsingInstance& instance, int chi)
      : terms_(instance), parts_(detail::bond_parts(terms_)), chi_(chi) {
    if (chi < 1) throw ArgumentError("chi must be at least 1");
  }

  const LocalTerms& terms() const noexcept { return terms_; }
  int chi() const noexcept { return chi_; }
  const TruncationStats& stats() const noexcept { return stats_; }

  void step(MpsState& state, SchedulePoint p, double dt, long step_index = 0) {
    if (state.sites() == 1) {
      state.apply_one_site(0, detail::real_gate(terms_.onsite(0, p), dt));
      return;
    }
    build_even(p, 0.5 * dt);
    even_layer(state, step_index);
    odd_layer(state, p, dt, step_index);
    even_layer(state, step_index);
  }

  // `steps` consecutive steps of length dt with the Hamiltonian of step s taken
  // at point(s). The closing even half layer of one step and the opening one of
  // the next are merged into a single gate per bond; each merged gate is still
  // followed by its truncation. Identical to repeated step() when nothing is
  // truncated.
  template <class PointAt>
  void run(MpsState& state, std::size_t steps, double dt, PointAt point) {
    if (steps == 0) return;
    if (state.sites() == 1) {
      for (std::size_t s = 0; s < steps; ++s) step(state, point(s), dt, static_cast<long>(s));
      return;
    }
    build_even(point(0), 0.5 * dt);
    for (std::size_t s = 0; s < steps; ++s) {
      const long idx = static_cast<long>(s);
      const SchedulePoint p = point(s);
      even_layer(state, idx);
      odd_layer(state, p, dt, idx);
      if (s + 1 == steps) {
        build_even(p, 0.5 * dt);
      } else {
        const SchedulePoint next = point(s + 1);
        for (std::size_t k = 0; k < half_.size(); k += 2)
          half_[k] = detail::bond_gate(parts_[k], next, 0.5 * dt) * detail::bond_gate(parts_[k], p, 0.5 * dt);
      }
    }
    even_layer(state, static_cast<long>(steps) - 1);
  }

 private:
  void build_even(SchedulePoint p, double tau) {
    half_.resize(parts_.size());
    for (std::size_t k = 0; k < parts_.size(); k += 2) half_[k] = detail::bond_gate(parts_[k], p, tau);
  }

  void even_layer(MpsState& state, long step_index) {
    for (std::size_t k = 0; k < parts_.size(); k += 2)
      apply(state, static_cast<int>(k), half_[k], Absorb::right, step_index);
  }

  // Descending so the centre only moves left.
  void odd_layer(MpsState& state, SchedulePoint p, double dt, long step_index) {
    const int bonds = static_cast<int>(parts_.size());
    for (int k = (bonds - 1) % 2 == 1 ? bonds - 1 : bonds - 2; k >= 1; k -= 2)
      apply(state, k, detail::bond_gate(parts_[k], p, dt), Absorb::left, step_index);
  }

  void apply(MpsState& state, int bond, const Matrix& gate, Absorb absorb, long step_index) {
    const auto r = state.apply_two_site(bond, gate, chi_, absorb);
    if (!std::isfinite(r.norm2_before) || r.discarded_weight > 1.0 - 1e-8)
      throw NumericalError("norm collapse under truncation", step_index, bond);
    stats_.add(r);
  }

  LocalTerms terms_;
  std::vector<detail::BondParts> parts_;
  int chi_;
  TruncationStats stats_;
  std::vector<Matrix> half_;
};

// Outcome of one annealing run.
struct RunRecord {
  std::string instance_id;
  std::string engine = "tebd";
  int chi = 1;
  double sweep_time = 0.0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  double gamma = 0.0;
  double temperature = 0.0;
  bool success = false;
  double final_energy = 0.0;    // <H_target> of the final state
  double readout_energy = 0.0;  // classical energy of the readout
  double ground_energy = 0.0;
  double residual = 0.0;        // final_energy - ground_energy
  double max_discarded_weight = 0.0;
  bool numerical_error = false;  // run aborted; counts as a failure
  SpinConfig readout;
};

// Readout is in the exact minimum set; when that list was capped, a readout
// whose classical energy is within tolerance of the minimum also counts.
inline bool is_success(const GroundTruth& truth, const IsingInstance& instance, const SpinConfig& readout) {
  if (truth.contains(readout)) return true;
  return truth.capped() &&
         classical_energy(instance, readout) - truth.energy < success_residual_tolerance;
}

inline std::size_t step_count(double total_time, double dt) {
  if (!(dt > 0.0)) throw ArgumentError("dt must be positive");
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(total_time / dt - 1e-9)));
}

struct TebdResult {
  MpsState state;
  RunRecord record;
  TruncationStats stats;
};

namespace detail {

inline RunRecord finish_record(const MpsState& state, const IsingInstance& instance,
                               const GroundTruth& truth, const LocalTerms& terms) {
  RunRecord rec;
  rec.readout = readout_config(state);
  rec.readout_energy = classical_energy(instance, rec.readout);
  rec.final_energy = expectation_energy(state, terms, {0.0, 1.0});
  rec.ground_energy = truth.energy;
  rec.residual = rec.final_energy - truth.energy;
  rec.success = is_success(truth, instance, rec.readout);
  return rec;
}

}  // namespace detail

// Zero-noise, zero-dissipation projected evolution from the transverse ground
// state along `schedule` at Schmidt rank chi. Steps are ceil(T / dt) of equal
// length; the Hamiltonian of each step is taken at its midpoint.
inline TebdResult tebd_anneal(const IsingInstance& instance, const AnnealSchedule& schedule, int chi,
                              double dt, const GroundTruth& truth) {
  if (chi < 1) throw ArgumentError("chi must be at least 1");
  const std::size_t steps = step_count(schedule.total_time(), dt);
  const double h = schedule.total_time() / static_cast<double>(steps);
  MpsState state = product_init(instance, chi);
  TebdStepper stepper(instance, chi);
  stepper.run(state, steps, h, [&](std::size_t s) { return schedule.at((static_cast<double>(s) + 0.5) * h); });
  RunRecord rec = detail::finish_record(state, instance, truth, stepper.terms());
  rec.chi = chi;
  rec.sweep_time = schedule.total_time();
  rec.dt = h;
  rec.max_discarded_weight = stepper.stats().max_discarded;
  return {std::move(state), std::move(rec), stepper.stats()};
}

inline TebdResult tebd_anneal(const IsingInstance& instance, const AnnealSchedule& schedule, int chi,
                              double dt = default_dt) {
  return tebd_anneal(instance, schedule, chi, dt, ground_state(instance));
}

}  // namespace mpsanneal
