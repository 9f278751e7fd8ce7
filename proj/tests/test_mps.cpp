#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <Eigen/SVD>

#include "helpers.hpp"
#include "mpsanneal/mps.hpp"
#include "mpsanneal/svd.hpp"
#include "oracles.hpp"

using namespace mpsanneal;

namespace {

MpsState z_product(const SpinConfig& c) {
  std::vector<Vector> locals;
  for (std::size_t i = 0; i < c.size(); ++i) {
    Vector v = Vector::Zero(2);
    v(c[i] > 0 ? 0 : 1) = 1.0;
    locals.push_back(v);
  }
  return MpsState::product(locals, PhysicalLayout::spin_chain, 4);
}

MpsState ghz(int n) {
  std::vector<SiteTensor> t(n);
  for (int k = 0; k < n; ++k) {
    const int dl = k == 0 ? 1 : 2, dr = k == n - 1 ? 1 : 2;
    Matrix up = Matrix::Zero(dl, dr), down = Matrix::Zero(dl, dr);
    up(0, 0) = 1.0;
    down(dl - 1, dr - 1) = 1.0;
    t[k] = {up, down};
  }
  return MpsState::from_tensors(std::move(t), PhysicalLayout::spin_chain, 2);
}

SpinConfig random_config(Rng& rng, std::size_t n) {
  std::vector<int> v(n);
  for (auto& s : v) s = rng.below(2) ? 1 : -1;
  return SpinConfig(v);
}

std::size_t dense_index(const SpinConfig& c) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < c.size(); ++i) idx = (idx << 1) | (c[i] < 0 ? 1 : 0);
  return idx;
}

void check_state_invariants(const MpsState& s) {
  CHECK(std::abs(s.norm2() - 1.0) < 1e-10);
  CHECK(canonical_error(s) < 1e-8);
  for (int b = 0; b + 1 < s.sites(); ++b) {
    const auto lam = schmidt_spectrum(s, b);
    double sum = 0.0;
    for (std::size_t k = 0; k < lam.size(); ++k) {
      sum += lam[k] * lam[k];
      if (k > 0) CHECK(lam[k] <= lam[k - 1] + 1e-14);
    }
    CHECK(std::abs(sum - 1.0) < 1e-10);
    CHECK(static_cast<int>(lam.size()) <= s.chi_max());
  }
}

}  // namespace

TEST_CASE("one-sided Jacobi SVD matches Eigen", "[mps][svd]") {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int r = 1 + static_cast<int>(rng.below(9)), c = 1 + static_cast<int>(rng.below(9));
    Matrix a(r, c);
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = cplx(rng.normal(), rng.normal());
    if (trial % 5 == 4 && c > 1) a.col(c - 1) = a.col(0) * cplx(0.3, -1.2);  // rank deficient
    const auto mine = jacobi_svd(a);
    const Eigen::JacobiSVD<Matrix> ref(a);
    const auto k = std::min(r, c);
    REQUIRE(mine.s.size() == k);
    for (Eigen::Index i = 0; i < k; ++i) CHECK(std::abs(mine.s(i) - ref.singularValues()(i)) < 1e-12);
    const Matrix back = mine.u * mine.s.cast<cplx>().asDiagonal() * mine.v.adjoint();
    CHECK((back - a).norm() < 1e-12 * std::max(1.0, a.norm()));
    CHECK((mine.v.adjoint() * mine.v - Matrix::Identity(k, k)).norm() < 1e-12);
  }
}

TEST_CASE("product initial state", "[mps]") {
  const auto inst = generate_random_chain(7, 1);
  const auto s = product_init(inst);
  check_state_invariants(s);
  Matrix sx(2, 2);
  sx << 0, 1, 1, 0;
  LocalTerms terms(inst);
  CHECK(expectation_energy(s, terms, {1.0, 0.0}) == Catch::Approx(-7.0));
  for (int k = 0; k < 7; ++k) {
    MpsState t = s;
    const cplx before = overlap(s, s);
    t.apply_one_site(k, sx, false);
    CHECK(std::abs(overlap(s, t) / before - cplx(-1.0)) < 1e-12);
  }
  for (int b = 0; b < 6; ++b) {
    const auto lam = schmidt_spectrum(s, b);
    REQUIRE(lam.size() == 1);
    CHECK(lam[0] == Catch::Approx(1.0));
  }
  const auto lad = product_init(generate_ladder16(2));
  CHECK(lad.sites() == 8);
  CHECK(lad.local_dim() == 4);
  CHECK(lad.physical_spins() == 16);
  CHECK(expectation_energy(lad, generate_ladder16(2), {1.0, 0.0}) == Catch::Approx(-16.0));
}

TEST_CASE("Schmidt spectra", "[mps]") {
  const auto bell = ghz(2);
  auto lam = schmidt_spectrum(bell, 0);
  REQUIRE(lam.size() == 2);
  CHECK(lam[0] == Catch::Approx(std::sqrt(0.5)));
  CHECK(lam[1] == Catch::Approx(std::sqrt(0.5)));
  const auto g = ghz(7);
  for (int b = 0; b < 6; ++b) {
    lam = schmidt_spectrum(g, b);
    REQUIRE(lam.size() == 2);
    CHECK(lam[0] == Catch::Approx(std::sqrt(0.5)));
    CHECK(lam[1] == Catch::Approx(std::sqrt(0.5)));
  }
  CHECK_THROWS_AS(schmidt_spectrum(g, 6), ArgumentError);
  CHECK_THROWS_AS(schmidt_spectrum(g, -1), ArgumentError);
  check_state_invariants(g);
}

TEST_CASE("amplitudes", "[mps]") {
  const auto inst = generate_random_chain(6, 3);
  const auto s = product_init(inst);
  Rng rng(9);
  for (int k = 0; k < 20; ++k) CHECK(std::abs(amplitude(s, random_config(rng, 6))) == Catch::Approx(std::pow(0.5, 3)));

  MpsState r = random_mps(10, PhysicalLayout::spin_chain, 3, rng);
  double total = 0.0;
  for (int mask = 0; mask < 1024; ++mask) {
    std::vector<int> v(10);
    for (int i = 0; i < 10; ++i) v[i] = (mask >> i) & 1 ? -1 : 1;
    total += std::norm(amplitude(r, SpinConfig(v)));
  }
  CHECK(total == Catch::Approx(1.0).epsilon(1e-10));

  Matrix up = Matrix::Zero(2, 2);
  up(0, 0) = 1.0;
  r.apply_one_site(0, up);
  for (int k = 0; k < 20; ++k) {
    auto c = random_config(rng, 10);
    c.set(0, -1);
    CHECK(std::abs(amplitude(r, c)) < 1e-15);
  }
  CHECK_THROWS_AS(amplitude(r, SpinConfig::all_up(9)), DimensionError);
}

TEST_CASE("dense vector expansion", "[mps]") {
  const auto s = product_init(generate_random_chain(8, 4));
  const Vector v = dense_vector(s);
  REQUIRE(v.size() == 256);
  for (Eigen::Index k = 0; k < v.size(); ++k) CHECK(std::abs(v(k)) == Catch::Approx(1.0 / 16.0));
  Rng rng(12);
  const auto r = random_mps(9, PhysicalLayout::spin_chain, 4, rng);
  const Vector w = dense_vector(r);
  CHECK(w.norm() == Catch::Approx(1.0).epsilon(1e-10));
  for (int k = 0; k < 100; ++k) {
    const auto c = random_config(rng, 9);
    CHECK(std::abs(amplitude(r, c) - w(static_cast<Eigen::Index>(dense_index(c)))) < 1e-13);
  }
  CHECK_THROWS_AS(dense_vector(product_init(generate_random_chain(15, 1))), SizeError);
}

TEST_CASE("expectation energy", "[mps]") {
  Rng rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const auto inst = generate_random_chain(8, 60 + trial);
    const auto c = random_config(rng, 8);
    CHECK(expectation_energy(z_product(c), inst, {0.0, 1.0}) == Catch::Approx(classical_energy(inst, c)).margin(1e-12));

    const auto r = random_mps(8, PhysicalLayout::spin_chain, 2, rng);
    const Vector psi = dense_vector(r);
    const double a = rng.uniform(), b = rng.uniform();
    const double dense = (psi.adjoint() * oracle::dense_h(inst, a, b) * psi)(0, 0).real();
    CHECK(std::abs(expectation_energy(r, inst, {a, b}) - dense) < 1e-10);
  }
}

TEST_CASE("hyper-spin energies equal classical energies", "[mps][ladder]") {
  const auto inst = generate_ladder16(11);
  LocalTerms terms(inst);
  for (int mask = 0; mask < (1 << 16); ++mask) {
    std::vector<Vector> locals(8, Vector::Zero(4));
    std::vector<int> spins(16);
    for (int i = 0; i < 16; ++i) spins[i] = (mask >> i) & 1 ? -1 : 1;
    for (int k = 0; k < 8; ++k) locals[k](2 * (spins[2 * k] < 0) + (spins[2 * k + 1] < 0)) = 1.0;
    const auto s = MpsState::product(locals, PhysicalLayout::hyperspin_ladder, 1);
    const double e = expectation_energy(s, terms, {0.0, 1.0});
    const double want = classical_energy(inst, SpinConfig(spins));
    if (std::abs(e - want) > 1e-12) FAIL("mask " << mask << ": " << e << " vs " << want);
    if (mask % 4099 == 0) CHECK(readout_config(s) == SpinConfig(spins));
  }
  SUCCEED();
}

TEST_CASE("z-basis hyper-spin states have no transverse energy", "[mps][ladder]") {
  const auto inst = generate_ladder16(5);
  Rng rng(2);
  const auto c = random_config(rng, 16);
  std::vector<Vector> locals(8, Vector::Zero(4));
  for (int k = 0; k < 8; ++k) locals[k](2 * (c[2 * k] < 0) + (c[2 * k + 1] < 0)) = 1.0;
  const auto s = MpsState::product(locals, PhysicalLayout::hyperspin_ladder, 2);
  CHECK(std::norm(amplitude(s, c)) == Catch::Approx(1.0));
  CHECK(expectation_energy(s, inst, {0.7, 0.0}) == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("bond truncation", "[mps]") {
  auto bell = ghz(2);
  MpsState same = bell;
  CHECK(truncate_bond(same, 0, 2) == Catch::Approx(0.0).margin(1e-15));
  CHECK(std::abs(std::abs(overlap(same, bell)) - 1.0) < 1e-12);
  CHECK(truncate_bond(bell, 0, 1) == Catch::Approx(0.5));
  CHECK(bell.bond_dim(0) == 1);
  CHECK_THROWS_AS(truncate_bond(bell, 0, 0), ArgumentError);

  Rng rng(44);
  for (int trial = 0; trial < 10; ++trial) {
    const auto r = random_mps(8, PhysicalLayout::spin_chain, 4, rng);
    MpsState t = r;
    const int bond = 1 + static_cast<int>(rng.below(6));
    const double dw = truncate_bond(t, bond, 2);
    check_state_invariants(t);
    CHECK(std::abs(std::norm(overlap(t, r)) - (1.0 - dw)) < 1e-10);
  }
}

TEST_CASE("truncation is optimal among rank-2 projections", "[mps][property]") {
  Rng rng(71);
  for (int trial = 0; trial < 5; ++trial) {
    const auto r = random_mps(6, PhysicalLayout::spin_chain, 4, rng);
    MpsState t = r;
    truncate_bond(t, 2, 2);
    const double best = std::norm(overlap(t, r));
    const Vector psi = dense_vector(r);
    const Eigen::Map<const Matrix> m(psi.data(), 8, 8);  // column-major: rows are the right block
    for (int k = 0; k < 50; ++k) {
      Matrix q(8, 2);
      for (Eigen::Index i = 0; i < q.size(); ++i) q(i) = cplx(rng.normal(), rng.normal());
      const Eigen::HouseholderQR<Matrix> qr(q);
      const Matrix basis = qr.householderQ() * Matrix::Identity(8, 2);
      CHECK(best >= (m * basis.conjugate()).squaredNorm() - 1e-12);
    }
  }
}

TEST_CASE("readout", "[mps]") {
  Rng rng(3);
  const auto c = random_config(rng, 9);
  CHECK(readout_config(z_product(c)) == c);

  Vector tilted(2);
  tilted << std::sqrt(0.9), std::sqrt(0.1);
  const auto t = MpsState::product(std::vector<Vector>(6, tilted), PhysicalLayout::spin_chain, 1);
  CHECK(readout_config(t) == SpinConfig::all_up(6));

  const auto g = ghz(6);
  const auto out = readout_config(g);
  CHECK((out == SpinConfig::all_up(6) || out == SpinConfig::from_string("------")));
  CHECK(std::norm(amplitude(g, out)) == Catch::Approx(0.5));
}

TEST_CASE("gates keep the canonical form", "[mps][property]") {
  Rng rng(31);
  MpsState s = random_mps(7, PhysicalLayout::spin_chain, 3, rng);
  for (int k = 0; k < 30; ++k) {
    Matrix h(4, 4);
    for (Eigen::Index i = 0; i < h.size(); ++i) h(i) = cplx(rng.normal(), rng.normal());
    const Eigen::HouseholderQR<Matrix> qr(h);
    const Matrix u = qr.householderQ();
    s.apply_two_site(static_cast<int>(rng.below(6)), u, 3, k % 2 ? Absorb::left : Absorb::right);
    check_state_invariants(s);
    CHECK(s.max_bond_dim() <= 3);
  }
}
