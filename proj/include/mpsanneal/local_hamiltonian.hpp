#pragma once

#include <cstdlib>
#include <vector>

#include <Eigen/Core>

#include "error.hpp"
#include "instance.hpp"
#include "schedule.hpp"

namespace mpsanneal {

using RealMatrix = Eigen::MatrixXd;

// Placement of a physical spin inside the MPS: chains map spin i to site i;
// ladder16 maps rung k (spins 2k, 2k+1) to one 4-level site with local label
// 2 b_upper + b_lower, where b = 0 is spin up.
struct SpinSlot {
  int site = 0;
  int slot = 0;
};

inline int local_dimension(Topology t) { return t == Topology::chain ? 2 : 4; }

inline int mps_sites(const IsingInstance& instance) {
  return instance.topology() == Topology::chain ? static_cast<int>(instance.size())
                                                : static_cast<int>(instance.size()) / 2;
}

inline SpinSlot spin_slot(Topology t, int spin) {
  return t == Topology::chain ? SpinSlot{spin, 0} : SpinSlot{spin / 2, spin % 2};
}

namespace detail {

// Pauli operator acting on `slot` of a d-level site (d = 2 or 4).
inline RealMatrix embed_pauli(int d, int slot, char kind) {
  RealMatrix op = RealMatrix::Zero(d, d);
  const int spins = d == 2 ? 1 : 2;
  const int shift = spins - 1 - slot;
  for (int c = 0; c < d; ++c) {
    const int bit = (c >> shift) & 1;
    if (kind == 'z') op(c, c) = bit ? -1.0 : 1.0;
    else op(c ^ (1 << shift), c) = 1.0;
  }
  return op;
}

inline RealMatrix kron(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace detail

// H_tot(A, B) split into single-site and nearest-neighbour-site pieces:
//   onsite_k = A transverse_k + B target_onsite_k,   bond_k = B target_bond_k,
// with bond operators in the (site k, site k+1) product basis.
class LocalTerms {
 public:
  explicit LocalTerms(const IsingInstance& instance)
      : d_(local_dimension(instance.topology())), sites_(mps_sites(instance)) {
    const auto topo = instance.topology();
    transverse_.assign(sites_, RealMatrix::Zero(d_, d_));
    target_onsite_.assign(sites_, RealMatrix::Zero(d_, d_));
    target_bond_.assign(sites_ > 0 ? sites_ - 1 : 0, RealMatrix::Zero(d_ * d_, d_ * d_));
    const RealMatrix id = RealMatrix::Identity(d_, d_);
    for (int i = 0; i < static_cast<int>(instance.size()); ++i) {
      const auto [site, slot] = spin_slot(topo, i);
      transverse_[site] += instance.delta() * detail::embed_pauli(d_, slot, 'x');
      target_onsite_[site] += instance.field(i) * detail::embed_pauli(d_, slot, 'z');
    }
    for (const auto& e : instance.edges()) {
      const auto a = spin_slot(topo, e.i);
      const auto b = spin_slot(topo, e.j);
      const RealMatrix za = detail::embed_pauli(d_, a.slot, 'z');
      const RealMatrix zb = detail::embed_pauli(d_, b.slot, 'z');
      if (a.site == b.site) {
        target_onsite_[a.site] += e.coupling * za * zb;
      } else if (std::abs(a.site - b.site) == 1) {
        const int k = std::min(a.site, b.site);
        const RealMatrix& left = a.site == k ? za : zb;
        const RealMatrix& right = a.site == k ? zb : za;
        target_bond_[k] += e.coupling * detail::kron(left, right);
      } else {
        throw TopologyError("edge couples MPS sites that are not nearest neighbours");
      }
    }
  }

  int local_dim() const noexcept { return d_; }
  int sites() const noexcept { return sites_; }

  RealMatrix onsite(int k, SchedulePoint p) const {
    return p.a * transverse_[k] + p.b * target_onsite_[k];
  }
  RealMatrix bond(int k, SchedulePoint p) const { return p.b * target_bond_[k]; }

  // Two-site operator for gate k: the bond term plus half of each adjacent
  // site term; end sites put their full weight on their only bond.
  RealMatrix gate_hamiltonian(int k, SchedulePoint p) const {
    const double wl = k == 0 ? 1.0 : 0.5;
    const double wr = k + 2 == sites_ ? 1.0 : 0.5;
    const RealMatrix id = RealMatrix::Identity(d_, d_);
    return bond(k, p) + wl * detail::kron(onsite(k, p), id) + wr * detail::kron(id, onsite(k + 1, p));
  }

 private:
  int d_;
  int sites_;
  std::vector<RealMatrix> transverse_;
  std::vector<RealMatrix> target_onsite_;
  std::vector<RealMatrix> target_bond_;
};

}  // namespace mpsanneal
