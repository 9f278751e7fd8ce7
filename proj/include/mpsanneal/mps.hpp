#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <Eigen/QR>

#include "error.hpp"
#include "instance.hpp"
#include "local_hamiltonian.hpp"
#include "random.hpp"
#include "schedule.hpp"
#include "svd.hpp"

namespace mpsanneal {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class PhysicalLayout { spin_chain, hyperspin_ladder };

// Singular values below this (relative to the norm) do not count towards rank.
inline constexpr double rank_cutoff = 1e-14;

// One site tensor: slices[sigma] is the (left bond) x (right bond) matrix A^sigma.
using SiteTensor = std::vector<Matrix>;

enum class Absorb { left, right };

struct TruncationResult {
  double discarded_weight = 0.0;  // truncated sum of s^2 over the total
  double norm2_before = 0.0;      // sum of s^2 before truncation
};

// Matrix-product state in mixed-canonical form: sites left of the centre are
// left-orthonormal, sites right of it right-orthonormal, and the centre
// tensor carries the norm. Bond b joins sites b and b+1.
class MpsState {
 public:
  // Takes arbitrary tensors, brings them to canonical form with the centre on
  // site 0 and normalizes.
  static MpsState from_tensors(std::vector<SiteTensor> tensors, PhysicalLayout layout, int chi_max) {
    if (tensors.empty()) throw ArgumentError("MPS needs at least one site");
    if (chi_max < 1) throw ArgumentError("chi must be at least 1");
    const auto d = tensors.front().size();
    for (std::size_t k = 0; k < tensors.size(); ++k) {
      if (tensors[k].size() != d) throw DimensionError("inconsistent physical dimension");
      for (const auto& m : tensors[k]) {
        if (m.rows() != tensors[k][0].rows() || m.cols() != tensors[k][0].cols())
          throw DimensionError("inconsistent slice shapes on site " + std::to_string(k));
      }
      if (k > 0 && tensors[k - 1][0].cols() != tensors[k][0].rows())
        throw DimensionError("bond dimension mismatch at bond " + std::to_string(k - 1));
    }
    if (tensors.front()[0].rows() != 1 || tensors.back()[0].cols() != 1)
      throw DimensionError("open boundary bonds must have dimension 1");
    if ((layout == PhysicalLayout::spin_chain) != (d == 2))
      throw DimensionError("layout and physical dimension disagree");
    MpsState s;
    s.tensors_ = std::move(tensors);
    s.layout_ = layout;
    s.chi_max_ = chi_max;
    s.center_ = s.sites() - 1;
    s.spectra_.assign(s.sites() > 0 ? s.sites() - 1 : 0, std::vector<double>{1.0});
    s.move_center(0);
    s.normalize();
    return s;
  }

  // Product state from one local amplitude vector per site.
  static MpsState product(const std::vector<Vector>& locals, PhysicalLayout layout, int chi_max) {
    std::vector<SiteTensor> t;
    for (const auto& v : locals) {
      SiteTensor site;
      for (Eigen::Index s = 0; s < v.size(); ++s) site.push_back(Matrix::Constant(1, 1, v(s)));
      t.push_back(std::move(site));
    }
    return from_tensors(std::move(t), layout, chi_max);
  }

  int sites() const noexcept { return static_cast<int>(tensors_.size()); }
  int local_dim() const noexcept { return static_cast<int>(tensors_.front().size()); }
  PhysicalLayout layout() const noexcept { return layout_; }
  int physical_spins() const noexcept {
    return layout_ == PhysicalLayout::spin_chain ? sites() : 2 * sites();
  }
  int chi_max() const noexcept { return chi_max_; }
  void set_chi_max(int chi) {
    if (chi < 1) throw ArgumentError("chi must be at least 1");
    chi_max_ = chi;
  }
  int center() const noexcept { return center_; }
  int bond_dim(int bond) const { return static_cast<int>(tensors_.at(bond)[0].cols()); }
  int max_bond_dim() const {
    int m = 1;
    for (int b = 0; b + 1 < sites(); ++b) m = std::max(m, bond_dim(b));
    return m;
  }
  const SiteTensor& site(int k) const { return tensors_.at(k); }
  // Direct access; callers are responsible for the canonical form.
  SiteTensor& mutable_site(int k) { return tensors_.at(k); }

  // Schmidt values recorded the last time the bond was split by an SVD.
  const std::vector<double>& cached_spectrum(int bond) const { return spectra_.at(bond); }

  double norm2() const {
    double n = 0.0;
    for (const auto& m : tensors_[center_]) n += m.squaredNorm();
    return n;
  }

  void normalize() {
    const double n = std::sqrt(norm2());
    if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("cannot normalize a zero or non-finite MPS");
    for (auto& m : tensors_[center_]) m /= n;
  }

  void move_center(int target) {
    if (target < 0 || target >= sites()) throw ArgumentError("centre position out of range");
    while (center_ < target) shift_right();
    while (center_ > target) shift_left();
  }

  // Applies a d x d operator on site k (centre moves to k).
  void apply_one_site(int k, const Matrix& op, bool renormalize = true) {
    move_center(k);
    const int d = local_dim();
    if (op.rows() != d || op.cols() != d) throw DimensionError("one-site operator has wrong size");
    SiteTensor out(d, Matrix::Zero(tensors_[k][0].rows(), tensors_[k][0].cols()));
    for (int s = 0; s < d; ++s)
      for (int t = 0; t < d; ++t)
        if (op(s, t) != cplx(0.0)) out[s] += op(s, t) * tensors_[k][t];
    tensors_[k] = std::move(out);
    if (renormalize) normalize();
  }

  // Applies a d^2 x d^2 operator on sites (bond, bond+1), splits by SVD keeping
  // at most `chi` Schmidt values, and leaves the centre on the side given by
  // `absorb`. Row index of the operator is sigma_left * d + sigma_right.
  TruncationResult apply_two_site(int bond, const Matrix& gate, int chi, Absorb absorb,
                                  bool renormalize = true) {
    if (bond < 0 || bond + 1 >= sites()) throw ArgumentError("bond index out of range");
    if (chi < 1) throw ArgumentError("chi must be at least 1");
    const int d = local_dim();
    if (gate.rows() != d * d || gate.cols() != d * d) throw DimensionError("two-site gate has wrong size");
    if (center_ < bond) move_center(bond);
    if (center_ > bond + 1) move_center(bond + 1);

    const auto& left = tensors_[bond];
    const auto& right = tensors_[bond + 1];
    const Eigen::Index dl = left[0].rows();
    const Eigen::Index dr = right[0].cols();

    std::vector<Matrix> pair(static_cast<std::size_t>(d * d));
    for (int s = 0; s < d; ++s)
      for (int t = 0; t < d; ++t) pair[s * d + t] = left[s] * right[t];

    Matrix theta = Matrix::Zero(d * dl, d * dr);
    for (int out = 0; out < d * d; ++out) {
      const int s = out / d;
      const int t = out % d;
      auto block = theta.block(s * dl, t * dr, dl, dr);
      for (int in = 0; in < d * d; ++in) {
        const cplx g = gate(out, in);
        if (g != cplx(0.0)) block += g * pair[in];
      }
    }
    return split(bond, theta, chi, absorb, renormalize);
  }

  // Splits the centre tensor's bond `bond` (0 <= bond < sites-1) keeping at most
  // chi values, without a gate.
  TruncationResult truncate(int bond, int chi) {
    if (bond < 0 || bond + 1 >= sites()) throw ArgumentError("bond index out of range");
    if (chi < 1) throw ArgumentError("chi must be at least 1");
    const int d = local_dim();
    return apply_two_site(bond, Matrix::Identity(d * d, d * d), chi, Absorb::right);
  }

 private:
  MpsState() = default;

  TruncationResult split(int bond, const Matrix& theta, int chi, Absorb absorb, bool renormalize) {
    const int d = local_dim();
    const Eigen::Index dl = tensors_[bond][0].rows();
    const Eigen::Index dr = tensors_[bond + 1][0].cols();
    const SvdResult svd = jacobi_svd(theta);
    const Eigen::VectorXd& sv = svd.s;
    const double total = sv.squaredNorm();
    if (!(total > 0.0) || !std::isfinite(total))
      throw NumericalError("norm collapse during two-site update", -1, bond);
    const double scale = std::sqrt(total);
    Eigen::Index keep = 0;
    while (keep < sv.size() && keep < chi && sv(keep) / scale > rank_cutoff) ++keep;
    keep = std::max<Eigen::Index>(keep, 1);
    double kept = 0.0;
    for (Eigen::Index i = 0; i < keep; ++i) kept += sv(i) * sv(i);

    TruncationResult result;
    result.norm2_before = total;
    result.discarded_weight = std::max(0.0, 1.0 - kept / total);

    Eigen::VectorXd s = sv.head(keep);
    if (renormalize) s /= std::sqrt(kept);
    const Matrix u = svd.u.leftCols(keep);
    const Matrix vh = svd.v.leftCols(keep).adjoint();

    std::vector<double> spectrum(sv.data(), sv.data() + keep);
    for (auto& x : spectrum) x /= std::sqrt(kept);
    spectra_[bond] = std::move(spectrum);

    SiteTensor& left = tensors_[bond];
    SiteTensor& right = tensors_[bond + 1];
    for (int a = 0; a < d; ++a) {
      if (absorb == Absorb::right) {
        left[a] = u.middleRows(a * dl, dl);
        right[a] = s.asDiagonal() * vh.middleCols(a * dr, dr);
      } else {
        left[a] = u.middleRows(a * dl, dl) * s.asDiagonal();
        right[a] = vh.middleCols(a * dr, dr);
      }
    }
    center_ = absorb == Absorb::right ? bond + 1 : bond;
    return result;
  }

  void shift_right() {
    const int k = center_;
    const int d = local_dim();
    const Eigen::Index dl = tensors_[k][0].rows();
    const Eigen::Index dr = tensors_[k][0].cols();
    Matrix stacked(d * dl, dr);
    for (int s = 0; s < d; ++s) stacked.middleRows(s * dl, dl) = tensors_[k][s];
    Eigen::HouseholderQR<Matrix> qr(stacked);
    const Eigen::Index r = std::min(stacked.rows(), stacked.cols());
    const Matrix q = qr.householderQ() * Matrix::Identity(stacked.rows(), r);
    const Matrix rm = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    for (int s = 0; s < d; ++s) tensors_[k][s] = q.middleRows(s * dl, dl);
    for (auto& m : tensors_[k + 1]) m = rm * m;
    center_ = k + 1;
  }

  void shift_left() {
    const int k = center_;
    const int d = local_dim();
    const Eigen::Index dl = tensors_[k][0].rows();
    const Eigen::Index dr = tensors_[k][0].cols();
    Matrix wide(dl, d * dr);
    for (int s = 0; s < d; ++s) wide.middleCols(s * dr, dr) = tensors_[k][s];
    // wide = L Q from the QR factorization of its adjoint.
    const Matrix adj = wide.adjoint();
    Eigen::HouseholderQR<Matrix> qr(adj);
    const Eigen::Index r = std::min(adj.rows(), adj.cols());
    const Matrix q = qr.householderQ() * Matrix::Identity(adj.rows(), r);
    const Matrix rm = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    const Matrix qh = q.adjoint();
    const Matrix l = rm.adjoint();
    for (int s = 0; s < d; ++s) tensors_[k][s] = qh.middleCols(s * dr, dr);
    for (auto& m : tensors_[k - 1]) m = m * l;
    center_ = k - 1;
  }

  std::vector<SiteTensor> tensors_;
  std::vector<std::vector<double>> spectra_;
  PhysicalLayout layout_ = PhysicalLayout::spin_chain;
  int chi_max_ = 1;
  int center_ = 0;
};

inline PhysicalLayout layout_for(Topology t) {
  return t == Topology::chain ? PhysicalLayout::spin_chain : PhysicalLayout::hyperspin_ladder;
}

// Every spin in the -x eigenstate (|up> - |down>)/sqrt(2), the ground state of
// the transverse term for delta > 0. Ladder rungs become 4-level sites.
inline MpsState product_init(const IsingInstance& instance, int chi_max = 1) {
  const int d = local_dimension(instance.topology());
  Vector local(d);
  if (d == 2) local << 1.0, -1.0;
  else local << 1.0, -1.0, -1.0, 1.0;
  local.normalize();
  return MpsState::product(std::vector<Vector>(mps_sites(instance), local),
                           layout_for(instance.topology()), chi_max);
}

// Random state with bond dimensions min(chi, d^k, d^(N-k)), canonicalized.
inline MpsState random_mps(int sites, PhysicalLayout layout, int chi, Rng& rng) {
  const int d = layout == PhysicalLayout::spin_chain ? 2 : 4;
  std::vector<int> dims(sites + 1, 1);
  for (int b = 1; b < sites; ++b) {
    double cap = chi;
    cap = std::min(cap, std::pow(d, b));
    cap = std::min(cap, std::pow(d, sites - b));
    dims[b] = static_cast<int>(cap);
  }
  std::vector<SiteTensor> t(sites);
  for (int k = 0; k < sites; ++k) {
    for (int s = 0; s < d; ++s) {
      Matrix m(dims[k], dims[k + 1]);
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = cplx(rng.normal(), rng.normal());
      t[k].push_back(std::move(m));
    }
  }
  return MpsState::from_tensors(std::move(t), layout, chi);
}

// Exact Schmidt spectrum across `bond`, descending, sum of squares one.
inline std::vector<double> schmidt_spectrum(const MpsState& state, int bond) {
  if (bond < 0 || bond + 1 >= state.sites()) throw ArgumentError("bond index out of range");
  MpsState s = state;
  s.move_center(bond);
  const int d = s.local_dim();
  const auto& a = s.site(bond);
  const Eigen::Index dl = a[0].rows();
  Matrix stacked(d * dl, a[0].cols());
  for (int k = 0; k < d; ++k) stacked.middleRows(k * dl, dl) = a[k];
  const Eigen::VectorXd sv = jacobi_svd(stacked).s;
  const double norm = sv.norm();
  std::vector<double> out;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) / norm > rank_cutoff) out.push_back(sv(i) / norm);
  return out;
}

// Keeps the chi largest Schmidt values on `bond` and renormalizes. Returns the
// discarded weight.
inline double truncate_bond(MpsState& state, int bond, int chi) {
  return state.truncate(bond, chi).discarded_weight;
}

namespace detail {

inline std::vector<int> site_labels(const MpsState& state, const SpinConfig& config) {
  if (static_cast<int>(config.size()) != state.physical_spins())
    throw DimensionError("config has " + std::to_string(config.size()) + " spins, state has " +
                         std::to_string(state.physical_spins()));
  std::vector<int> labels(state.sites());
  for (int k = 0; k < state.sites(); ++k) {
    if (state.layout() == PhysicalLayout::spin_chain) {
      labels[k] = config[k] > 0 ? 0 : 1;
    } else {
      const int up = config[2 * k] > 0 ? 0 : 1;
      const int low = config[2 * k + 1] > 0 ? 0 : 1;
      labels[k] = 2 * up + low;
    }
  }
  return labels;
}

}  // namespace detail

// Coefficient <sigma_1 sigma_2 ... | psi>.
inline cplx amplitude(const MpsState& state, const SpinConfig& config) {
  const auto labels = detail::site_labels(state, config);
  Matrix acc = state.site(0)[labels[0]];
  for (int k = 1; k < state.sites(); ++k) acc = acc * state.site(k)[labels[k]];
  return acc(0, 0);
}

inline cplx overlap(const MpsState& bra, const MpsState& ket) {
  if (bra.sites() != ket.sites() || bra.local_dim() != ket.local_dim())
    throw DimensionError("overlap of states with different shapes");
  Matrix env = Matrix::Identity(1, 1);
  for (int k = 0; k < bra.sites(); ++k) {
    Matrix next = Matrix::Zero(bra.site(k)[0].cols(), ket.site(k)[0].cols());
    for (int s = 0; s < bra.local_dim(); ++s) next += bra.site(k)[s].adjoint() * env * ket.site(k)[s];
    env = std::move(next);
  }
  return env(0, 0);
}

// <psi| A H_start + B H_target |psi> / <psi|psi>.
inline double expectation_energy(const MpsState& state, const LocalTerms& terms, SchedulePoint p) {
  if (terms.sites() != state.sites() || terms.local_dim() != state.local_dim())
    throw DimensionError("Hamiltonian terms do not match the state");
  MpsState s = state;
  s.move_center(0);
  const int d = s.local_dim();
  const double norm2 = s.norm2();
  cplx e = 0.0;
  for (int k = 0; k < s.sites(); ++k) {
    const auto& a = s.site(k);
    const RealMatrix on = terms.onsite(k, p);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (on(i, j) != 0.0) e += on(i, j) * a[j].cwiseProduct(a[i].conjugate()).sum();
    if (k + 1 < s.sites()) {
      const RealMatrix bond = terms.bond(k, p);
      const auto& b = s.site(k + 1);
      std::vector<Matrix> pair(static_cast<std::size_t>(d * d));
      for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y) pair[x * d + y] = a[x] * b[y];
      for (int i = 0; i < d * d; ++i)
        for (int j = 0; j < d * d; ++j)
          if (bond(i, j) != 0.0) e += bond(i, j) * pair[j].cwiseProduct(pair[i].conjugate()).sum();
      s.move_center(k + 1);
    }
  }
  return e.real() / norm2;
}

inline double expectation_energy(const MpsState& state, const IsingInstance& instance, SchedulePoint p) {
  return expectation_energy(state, LocalTerms(instance), p);
}

// Deterministic maximum-likelihood collapse, left to right: each site takes its
// most probable z outcome given the earlier outcomes (ties go to the lower
// label, i.e. spin up). Hyper-spin labels unpack to (upper, lower) spins.
inline SpinConfig readout_config(const MpsState& state) {
  MpsState s = state;
  s.move_center(0);
  s.normalize();
  const int d = s.local_dim();
  Matrix v = Matrix::Identity(1, 1);
  std::vector<int> spins;
  spins.reserve(static_cast<std::size_t>(s.physical_spins()));
  for (int k = 0; k < s.sites(); ++k) {
    int best = 0;
    double best_p = -1.0;
    Matrix best_w;
    for (int sigma = 0; sigma < d; ++sigma) {
      Matrix w = v * s.site(k)[sigma];
      const double p = w.squaredNorm();
      if (p > best_p + 1e-12) {
        best = sigma;
        best_p = p;
        best_w = std::move(w);
      }
    }
    if (!(best_p > 0.0)) throw NumericalError("readout reached a zero-probability branch", -1, k);
    v = best_w / std::sqrt(best_p);
    if (d == 2) {
      spins.push_back(best == 0 ? 1 : -1);
    } else {
      spins.push_back((best >> 1) ? -1 : 1);
      spins.push_back((best & 1) ? -1 : 1);
    }
  }
  return SpinConfig(std::move(spins));
}

inline constexpr int dense_max_spins = 14;

// Full expansion. Spin i is bit (N-1-i) of the index, with bit value 0 for up.
inline Vector dense_vector(const MpsState& state) {
  if (state.physical_spins() > dense_max_spins)
    throw SizeError("dense_vector supports at most 14 spins");
  const int d = state.local_dim();
  Matrix acc = Matrix::Identity(1, 1);  // rows: basis prefix, cols: right bond
  for (int k = 0; k < state.sites(); ++k) {
    const auto& a = state.site(k);
    Matrix next(acc.rows() * d, a[0].cols());
    for (Eigen::Index r = 0; r < acc.rows(); ++r)
      for (int s = 0; s < d; ++s) next.row(r * d + s) = acc.row(r) * a[s];
    acc = std::move(next);
  }
  return acc.col(0);
}

// Deviation of the canonical form: max over sites of || sum A^dag A - 1 || on
// the left of the centre and || sum A A^dag - 1 || on the right.
inline double canonical_error(const MpsState& state) {
  double err = 0.0;
  for (int k = 0; k < state.sites(); ++k) {
    const auto& a = state.site(k);
    if (k < state.center()) {
      Matrix g = Matrix::Zero(a[0].cols(), a[0].cols());
      for (const auto& m : a) g += m.adjoint() * m;
      err = std::max(err, (g - Matrix::Identity(g.rows(), g.cols())).norm());
    } else if (k > state.center()) {
      Matrix g = Matrix::Zero(a[0].rows(), a[0].rows());
      for (const auto& m : a) g += m * m.adjoint();
      err = std::max(err, (g - Matrix::Identity(g.rows(), g.cols())).norm());
    }
  }
  return err;
}

}  // namespace mpsanneal
