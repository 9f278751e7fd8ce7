#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Core>

namespace mpsanneal {

// Thin SVD a = u diag(s) v^dag with s descending.
struct SvdResult {
  Eigen::MatrixXcd u;
  Eigen::VectorXd s;
  Eigen::MatrixXcd v;
};

namespace detail {

// One-sided (Hestenes) Jacobi on the columns of `w` (rows >= cols). On exit the
// columns of w are mutually orthogonal and w_in * v = w.
inline void hestenes_sweeps(Eigen::MatrixXcd& w, Eigen::MatrixXcd& v) {
  const Eigen::Index n = w.cols();
  const Eigen::Index m = w.rows();
  constexpr double tol = 1e-15;
  constexpr int max_sweeps = 60;
  // Columns are contiguous; work on interleaved (re, im) doubles.
  double* wd = reinterpret_cast<double*>(w.data());
  double* vd = reinterpret_cast<double*>(v.data());
  const Eigen::Index vm = v.rows();
  auto rotate = [](double* x, double* y, Eigen::Index len, double c, double s, double pr, double pi) {
    for (Eigen::Index i = 0; i < len; ++i) {
      const double xr = x[2 * i], xi = x[2 * i + 1];
      const double yr = y[2 * i] * pr - y[2 * i + 1] * pi;
      const double yi = y[2 * i] * pi + y[2 * i + 1] * pr;
      x[2 * i] = c * xr - s * yr;
      x[2 * i + 1] = c * xi - s * yi;
      y[2 * i] = s * xr + c * yr;
      y[2 * i + 1] = s * xi + c * yi;
    }
  };
  std::vector<double> norm2(static_cast<std::size_t>(n));
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    // Squared column norms, refreshed each sweep and updated after every rotation.
    for (Eigen::Index j = 0; j < n; ++j) {
      const double* x = wd + 2 * m * j;
      double a = 0.0;
      for (Eigen::Index i = 0; i < 2 * m; ++i) a += x[i] * x[i];
      norm2[j] = a;
    }
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double* x = wd + 2 * m * p;
        const double* y = wd + 2 * m * q;
        const double alpha = norm2[p], beta = norm2[q];
        double gr = 0.0, gi = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
          const double xr = x[2 * i], xi = x[2 * i + 1], yr = y[2 * i], yi = y[2 * i + 1];
          gr += xr * yr + xi * yi;  // conj(x) y
          gi += xr * yi - xi * yr;
        }
        const double g = std::sqrt(gr * gr + gi * gi);
        if (g == 0.0 || g <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        // Phase e^{-i phi} on column q makes the off-diagonal Gram entry real.
        const double pr = gr / g, pi = -gi / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotate(wd + 2 * m * p, wd + 2 * m * q, m, c, s, pr, pi);
        rotate(vd + 2 * vm * p, vd + 2 * vm * q, vm, c, s, pr, pi);
        norm2[p] = alpha - t * g;
        norm2[q] = beta + t * g;
      }
    }
    if (!rotated) break;
  }
}

}  // namespace detail

// One-sided Jacobi SVD. Left singular vectors belonging to a zero singular
// value are returned as zero columns.
inline SvdResult jacobi_svd(const Eigen::MatrixXcd& a) {
  const bool wide = a.rows() < a.cols();
  Eigen::MatrixXcd w = wide ? Eigen::MatrixXcd(a.adjoint()) : a;
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(w.cols(), w.cols());
  detail::hestenes_sweeps(w, v);

  const Eigen::Index k = w.cols();
  Eigen::VectorXd norms(k);
  for (Eigen::Index j = 0; j < k; ++j) norms(j) = w.col(j).norm();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return norms(x) > norms(y); });

  SvdResult r;
  r.s.resize(k);
  Eigen::MatrixXcd left(w.rows(), k), right(v.rows(), k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    r.s(j) = norms(src);
    left.col(j) = norms(src) > 0.0 ? Eigen::VectorXcd(w.col(src) / norms(src))
                                   : Eigen::VectorXcd::Zero(w.rows());
    right.col(j) = v.col(src);
  }
  if (wide) {
    r.u = std::move(right);
    r.v = std::move(left);
  } else {
    r.u = std::move(left);
    r.v = std::move(right);
  }
  return r;
}

}  // namespace mpsanneal
