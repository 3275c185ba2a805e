// Copyright (c) 2026 The chansim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CHANSIM_STOCHASTICS_HPP
#define CHANSIM_STOCHASTICS_HPP

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

#include "chansim/bessel.hpp"
#include "chansim/errors.hpp"
#include "chansim/parallel.hpp"
#include "chansim/rng.hpp"

namespace chansim {

// C_Jakes for a maximum Doppler f_d sampled every delta_t seconds:
// entry (i, j) = J0(2 pi f_d delta_t |i - j|).  Real symmetric Toeplitz
// with unit diagonal.
inline Eigen::MatrixXcd jakes_covariance(double f_d, double delta_t, int n) {
  if (!(f_d >= 0.0)) throw std::invalid_argument("jakes_covariance: f_d < 0");
  if (!(delta_t > 0.0))
    throw std::invalid_argument("jakes_covariance: delta_t <= 0");
  if (n < 1) throw std::invalid_argument("jakes_covariance: n < 1");
  Eigen::VectorXd row(n);
  for (int k = 0; k < n; ++k)
    row[k] = bessel_j0(2.0 * 3.14159265358979323846 * f_d * delta_t * k);
  Eigen::MatrixXcd c(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c(i, j) = row[std::abs(i - j)];
  return c;
}

// Kronecker product, row-major block convention: out((i*p + k), (j*q + l))
// = a(i, j) * b(k, l) for b of size p x q.
inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a,
                             const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace detail {

inline void require_hermitian(const Eigen::MatrixXcd& c, const char* who) {
  if (c.rows() != c.cols())
    throw std::invalid_argument(std::string(who) + ": matrix not square");
  const double scale = c.norm();
  if ((c - c.adjoint()).norm() > 1e-12 * std::max(1.0, scale))
    throw std::invalid_argument(std::string(who) +
                                ": matrix not Hermitian within 1e-12");
}

}  // namespace detail

// Factor a Hermitian PSD matrix C as F F^H with relative Frobenius residual
// <= 1e-8.  Strategy: Cholesky of C + jitter*I with jitter = 1e-10*trace/dim;
// if that fails (Jakes matrices are numerically rank-deficient at strong
// correlation), eigendecompose, clamp negative eigenvalues to zero and
// return U sqrt(L) restricted to the positive part, so F may have fewer
// columns than rows.
inline Eigen::MatrixXcd psd_factorize(const Eigen::MatrixXcd& c) {
  detail::require_hermitian(c, "psd_factorize");
  const Eigen::Index n = c.rows();
  const double jitter = 1e-10 * std::max(0.0, c.trace().real()) / double(n);
  const double cnorm = std::max(c.norm(), 1e-300);

  Eigen::MatrixXcd jittered = c;
  jittered.diagonal().array() += jitter;
  Eigen::LLT<Eigen::MatrixXcd> llt(jittered);
  if (llt.info() == Eigen::Success) {
    Eigen::MatrixXcd f = llt.matrixL();
    if ((f * f.adjoint() - c).norm() <= 1e-8 * cnorm) return f;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(
      (c + c.adjoint()) * 0.5);
  if (eig.info() != Eigen::Success)
    throw NumericalError("psd_factorize: eigendecomposition failed");
  const Eigen::VectorXd& w = eig.eigenvalues();  // ascending
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (w[i] > 0.0) ++rank;
  Eigen::MatrixXcd f(n, rank);
  for (Eigen::Index i = 0, k = 0; i < n; ++i) {
    if (w[i] <= 0.0) continue;
    // largest eigenvalue first
    f.col(rank - 1 - k) = eig.eigenvectors().col(i) * std::sqrt(w[i]);
    ++k;
  }
  return f;
}

// `count` i.i.d. draws of mean + F z with z circularly-symmetric standard
// complex normal (E[|z_i|^2] = 1), one draw per output row.  Row i uses
// stream.substream(i), so the result is independent of the worker split.
inline Eigen::MatrixXcd sample_complex_gaussian(const Eigen::VectorXcd& mean,
                                                const Eigen::MatrixXcd& factor,
                                                std::size_t count,
                                                const RngStream& stream,
                                                int workers = 0) {
  if (factor.rows() != mean.size())
    throw std::invalid_argument(
        "sample_complex_gaussian: factor rows != mean size");
  const Eigen::Index n = mean.size();
  const Eigen::Index r = factor.cols();
  Eigen::MatrixXcd out(count, n);
  parallel_for(count, worker_count(workers), [&](std::size_t lo, std::size_t hi) {
    Eigen::VectorXcd z(r);
    for (std::size_t i = lo; i < hi; ++i) {
      RngStream row = stream.substream(i);
      for (Eigen::Index k = 0; k < r; ++k) z[k] = row.cnormal();
      out.row(i) = (mean + factor * z).transpose();
    }
  });
  return out;
}

}  // namespace chansim

#endif  // CHANSIM_STOCHASTICS_HPP
