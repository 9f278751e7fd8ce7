#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Eigenvalues>

#include "error.hpp"
#include "exact.hpp"
#include "instance.hpp"
#include "local_hamiltonian.hpp"
#include "mps.hpp"
#include "random.hpp"
#include "schedule.hpp"
#include "svd.hpp"
#include "tebd.hpp"

namespace mpsanneal {

struct LangevinMpsParams {
  double gamma = 0.0;
  double temperature = 0.0;
  double dt = default_dt;
  std::uint64_t seed = 0;
  double epsilon = 1e-10;  // Gram-matrix regularization

  void validate() const {
    if (!(gamma >= 0.0)) throw ArgumentError("gamma must be non-negative");
    if (!(temperature >= 0.0)) throw ArgumentError("temperature must be non-negative");
    if (!(dt > 0.0)) throw ArgumentError("dt must be positive");
    if (!(epsilon > 0.0)) throw ArgumentError("epsilon must be positive");
  }
};

// Matrix-product operator of H_tot(A, B) for nearest-neighbour local terms.
// Index layout: 0 = all terms placed, 1..R = open bond term, R+1 = nothing placed.
class LocalMpo {
 public:
  explicit LocalMpo(const LocalTerms& terms) : terms_(&terms) {
    const int d = terms.local_dim();
    const int bonds = terms.sites() - 1;
    left_.resize(std::max(bonds, 0));
    right_.resize(std::max(bonds, 0));
    for (int k = 0; k < bonds; ++k) {
      // Operator-Schmidt split of the unit-B bond term into sum_r L_r (x) R_r.
      const RealMatrix op = terms.bond(k, {0.0, 1.0});
      Matrix reshaped(d * d, d * d);
      for (int s = 0; s < d; ++s)
        for (int t = 0; t < d; ++t)
          for (int sp = 0; sp < d; ++sp)
            for (int tp = 0; tp < d; ++tp) reshaped(s * d + sp, t * d + tp) = op(s * d + t, sp * d + tp);
      const SvdResult svd = jacobi_svd(reshaped);
      for (Eigen::Index r = 0; r < svd.s.size(); ++r) {
        if (svd.s(r) <= 1e-13 * std::max(1.0, svd.s(0))) break;
        Matrix l(d, d), rr(d, d);
        for (int s = 0; s < d; ++s)
          for (int sp = 0; sp < d; ++sp) l(s, sp) = svd.u(s * d + sp, r) * svd.s(r);
        for (int t = 0; t < d; ++t)
          for (int tp = 0; tp < d; ++tp) rr(t, tp) = std::conj(svd.v(t * d + tp, r));
        left_[k].push_back(std::move(l));
        right_[k].push_back(std::move(rr));
      }
      rank_ = std::max(rank_, static_cast<int>(left_[k].size()));
    }
  }

  int dim() const noexcept { return rank_ + 2; }
  int start() const noexcept { return rank_ + 1; }
  static constexpr int done = 0;

  // W[a][b] for site k as d x d operators (empty matrix: zero).
  std::vector<std::vector<Matrix>> site(int k, SchedulePoint p) const {
    const int d = terms_->local_dim();
    const int D = dim();
    std::vector<std::vector<Matrix>> w(D, std::vector<Matrix>(D));
    const Matrix id = Matrix::Identity(d, d);
    w[start()][start()] = id;
    w[done][done] = id;
    w[start()][done] = terms_->onsite(k, p).cast<cplx>();
    if (k + 1 < terms_->sites())
      for (std::size_t r = 0; r < left_[k].size(); ++r) w[start()][1 + r] = p.b * left_[k][r];
    if (k > 0)
      for (std::size_t r = 0; r < right_[k - 1].size(); ++r) w[1 + r][done] = right_[k - 1][r];
    return w;
  }

 private:
  const LocalTerms* terms_;
  std::vector<std::vector<Matrix>> left_;
  std::vector<std::vector<Matrix>> right_;
  int rank_ = 0;
};

namespace detail {

using Mpo = std::vector<std::vector<Matrix>>;
using Env = std::vector<Matrix>;  // one bond-space matrix per MPO index

inline Env grow_left(const Env& e, const SiteTensor& a, const Mpo& w) {
  const auto D = w.size();
  const int d = static_cast<int>(a.size());
  Env out(D, Matrix::Zero(a[0].cols(), a[0].cols()));
  for (std::size_t x = 0; x < D; ++x) {
    if (e[x].isZero(0.0)) continue;
    for (std::size_t y = 0; y < D; ++y) {
      if (w[x][y].size() == 0) continue;
      for (int s = 0; s < d; ++s)
        for (int t = 0; t < d; ++t)
          if (w[x][y](s, t) != cplx(0.0)) out[y] += w[x][y](s, t) * (a[s].adjoint() * e[x] * a[t]);
    }
  }
  return out;
}

inline Env grow_right(const Env& f, const SiteTensor& a, const Mpo& w) {
  const auto D = w.size();
  const int d = static_cast<int>(a.size());
  Env out(D, Matrix::Zero(a[0].rows(), a[0].rows()));
  for (std::size_t y = 0; y < D; ++y) {
    if (f[y].isZero(0.0)) continue;
    for (std::size_t x = 0; x < D; ++x) {
      if (w[x][y].size() == 0) continue;
      for (int s = 0; s < d; ++s)
        for (int t = 0; t < d; ++t)
          if (w[x][y](s, t) != cplx(0.0)) out[x] += w[x][y](s, t) * (a[t] * f[y] * a[s].adjoint());
    }
  }
  return out;
}

// (H_eff A)^s = sum_{x,y,t} W[x][y](s,t) E[x] A^t F[y].
inline SiteTensor apply_effective(const Env& e, const SiteTensor& a, const Env& f, const Mpo& w) {
  const int d = static_cast<int>(a.size());
  SiteTensor out(d, Matrix::Zero(a[0].rows(), a[0].cols()));
  for (std::size_t x = 0; x < w.size(); ++x) {
    if (e[x].isZero(0.0)) continue;
    for (std::size_t y = 0; y < w.size(); ++y) {
      if (w[x][y].size() == 0 || f[y].isZero(0.0)) continue;
      for (int t = 0; t < d; ++t) {
        const Matrix eaf = e[x] * a[t] * f[y];
        for (int s = 0; s < d; ++s)
          if (w[x][y](s, t) != cplx(0.0)) out[s] += w[x][y](s, t) * eaf;
      }
    }
  }
  return out;
}

// (G + eps)^-1; throws when G is ill-conditioned.
inline Matrix regularized_inverse(const Matrix& gram, double eps, long bond) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  const double lo = eig.eigenvalues().minCoeff();
  if (!(lo > eps)) throw NumericalError("Gram matrix is singular to within epsilon", -1, bond);
  Eigen::VectorXd inv = (eig.eigenvalues().array() + eps).inverse();
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace detail

// Operator-split dynamics over fixed-rank MPS:
//   (a) unitary: one second-order TEBD step at rank chi,
//   (b) dissipation: one left-to-right sweep A_k <- A_k - gamma dt G^{-1}(H_eff - E) A_k
//       in the single-site gauge,
//   (c) noise: one sweep adding complex Gaussian tangent noise of per-mode
//       variance 2 gamma T dt, projected orthogonal to A_k.
// Each site update is followed by renormalization and a QR shift of the centre.
class LangevinMpsIntegrator {
 public:
  LangevinMpsIntegrator(const IsingInstance& instance, int chi, const LangevinMpsParams& params)
      : stepper_(instance, chi), mpo_(stepper_.terms()), params_(params), rng_(params.seed) {
    params_.validate();
  }
  LangevinMpsIntegrator(const LangevinMpsIntegrator&) = delete;
  LangevinMpsIntegrator& operator=(const LangevinMpsIntegrator&) = delete;

  const TruncationStats& stats() const noexcept { return stepper_.stats(); }
  const LocalTerms& terms() const noexcept { return stepper_.terms(); }

  void step(MpsState& state, SchedulePoint p, double dt, long step_index = 0) {
    stepper_.step(state, p, dt, step_index);
    if (params_.gamma > 0.0) dissipate(state, p, dt, step_index);
    if (params_.gamma > 0.0 && params_.temperature > 0.0) add_noise(state, dt, step_index);
  }

  // `steps` steps with the Hamiltonian of step s at point(s). Without damping
  // the substeps (b) and (c) vanish and the unitary steps run back to back.
  template <class PointAt>
  void run(MpsState& state, std::size_t steps, double dt, PointAt point) {
    if (params_.gamma == 0.0) {
      stepper_.run(state, steps, dt, point);
      return;
    }
    for (std::size_t s = 0; s < steps; ++s) step(state, point(s), dt, static_cast<long>(s));
  }

  // Only the dissipative substep (b).
  void dissipate(MpsState& state, SchedulePoint p, double dt, long step_index = 0) {
    const int n = state.sites();
    std::vector<detail::Mpo> w(n);
    for (int k = 0; k < n; ++k) w[k] = mpo_.site(k, p);
    const int D = mpo_.dim();

    state.move_center(0);
    std::vector<detail::Env> right(n + 1);
    std::vector<Matrix> right_gram(n + 1);
    right[n] = detail::Env(D, Matrix::Zero(1, 1));
    right[n][LocalMpo::done] = Matrix::Identity(1, 1);
    right_gram[n] = Matrix::Identity(1, 1);
    for (int k = n - 1; k >= 1; --k) {
      const auto& a = state.site(k);
      right[k] = detail::grow_right(right[k + 1], a, w[k]);
      Matrix g = Matrix::Zero(a[0].rows(), a[0].rows());
      for (const auto& m : a) g += m * right_gram[k + 1] * m.adjoint();
      right_gram[k] = std::move(g);
    }
    detail::Env left(D, Matrix::Zero(1, 1));
    left[mpo_.start()] = Matrix::Identity(1, 1);
    Matrix left_gram = Matrix::Identity(1, 1);

    for (int k = 0; k < n; ++k) {
      SiteTensor& a = state.mutable_site(k);
      const detail::Env& f = right[k + 1];
      const SiteTensor ha = detail::apply_effective(left, a, f, w[k]);
      double norm2 = 0.0;
      cplx e = 0.0;
      for (std::size_t s = 0; s < a.size(); ++s) {
        norm2 += a[s].squaredNorm();
        e += (a[s].adjoint() * ha[s]).trace();
      }
      const double energy = e.real() / norm2;
      const Matrix gl = detail::regularized_inverse(left_gram, params_.epsilon, k - 1);
      const Matrix gr = detail::regularized_inverse(right_gram[k + 1], params_.epsilon, k);
      for (std::size_t s = 0; s < a.size(); ++s) {
        const Matrix grad = gl * (ha[s] - energy * a[s]) * gr;
        a[s] -= params_.gamma * dt * grad;
        if (!a[s].allFinite()) throw NumericalError("Langevin dissipation produced NaN", step_index, k);
      }
      state.normalize();
      if (k + 1 < n) {
        state.move_center(k + 1);
        const auto& left_site = state.site(k);
        left = detail::grow_left(left, left_site, w[k]);
        Matrix g = Matrix::Zero(left_site[0].cols(), left_site[0].cols());
        for (const auto& m : left_site) g += m.adjoint() * left_gram * m;
        left_gram = std::move(g);
      }
    }
  }

  // Only the noise substep (c).
  void add_noise(MpsState& state, double dt, long step_index = 0) {
    const double sigma = std::sqrt(params_.gamma * params_.temperature * dt);  // per real component
    state.move_center(0);
    for (int k = 0; k < state.sites(); ++k) {
      SiteTensor& a = state.mutable_site(k);
      SiteTensor xi(a.size(), Matrix(a[0].rows(), a[0].cols()));
      for (auto& m : xi)
        for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = cplx(sigma * rng_.normal(), sigma * rng_.normal());
      cplx proj = 0.0;
      double norm2 = 0.0;
      for (std::size_t s = 0; s < a.size(); ++s) {
        proj += (a[s].adjoint() * xi[s]).trace();
        norm2 += a[s].squaredNorm();
      }
      for (std::size_t s = 0; s < a.size(); ++s) {
        a[s] += xi[s] - (proj / norm2) * a[s];
        if (!a[s].allFinite()) throw NumericalError("Langevin noise produced NaN", step_index, k);
      }
      state.normalize();
      if (k + 1 < state.sites()) state.move_center(k + 1);
    }
  }

 private:
  TebdStepper stepper_;
  LocalMpo mpo_;
  LangevinMpsParams params_;
  Rng rng_;
};

// One step with a caller-owned integrator state folded in; convenient for
// single-step experiments.
inline void langevin_step(MpsState& state, LangevinMpsIntegrator& integrator, SchedulePoint p, double dt,
                          long step_index = 0) {
  integrator.step(state, p, dt, step_index);
}

// Full sweep from the transverse ground state; same readout and success rule
// as tebd_anneal.
inline TebdResult langevin_anneal(const IsingInstance& instance, const AnnealSchedule& schedule, int chi,
                                  const LangevinMpsParams& params, const GroundTruth& truth) {
  params.validate();
  const std::size_t steps = step_count(schedule.total_time(), params.dt);
  const double h = schedule.total_time() / static_cast<double>(steps);
  MpsState state = product_init(instance, chi);
  LangevinMpsIntegrator integrator(instance, chi, params);
  integrator.run(state, steps, h, [&](std::size_t s) { return schedule.at((static_cast<double>(s) + 0.5) * h); });
  RunRecord rec = detail::finish_record(state, instance, truth, integrator.terms());
  rec.engine = "langevin";
  rec.chi = chi;
  rec.sweep_time = schedule.total_time();
  rec.dt = h;
  rec.seed = params.seed;
  rec.gamma = params.gamma;
  rec.temperature = params.temperature;
  rec.max_discarded_weight = integrator.stats().max_discarded;
  return {std::move(state), std::move(rec), integrator.stats()};
}

}  // namespace mpsanneal
