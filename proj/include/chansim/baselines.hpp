// Copyright (c) 2026 The chansim authors
// SPDX-License-Identifier: Apache-2.0
//
// Second-order baselines on channel datasets: sample statistics, PCA
// compression, LMMSE estimation, and Gaussian surrogate generation.

#ifndef CHANSIM_BASELINES_HPP
#define CHANSIM_BASELINES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include "chansim/dataset.hpp"
#include "chansim/errors.hpp"
#include "chansim/rng.hpp"
#include "chansim/stochastics.hpp"

namespace chansim {

inline double snr_to_noise_var(double snr_db) {
  return std::pow(10.0, -snr_db / 10.0);
}

// Normalized mean-square error between paired rows of two datasets:
// (1/(count*dim)) sum_i ||h_i - hhat_i||^2.
inline double nmse(const SampleMatrix& truth, const SampleMatrix& estimate) {
  if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols())
    throw std::invalid_argument("nmse: shape mismatch");
  if (truth.size() == 0) throw std::invalid_argument("nmse: empty input");
  return (truth - estimate).squaredNorm() /
         (double(truth.rows()) * double(truth.cols()));
}

// Sample mean and uncentered sample covariance (1/n) sum_i h_i h_i^H of a
// row-stacked dataset.  Channels here are zero-mean by construction, so the
// uncentered second moment is the covariance; the mean is reported
// separately for drift checks rather than subtracted.
inline CovarianceModel sample_mean_cov(const ChannelDataset& dataset) {
  if (dataset.count() == 0)
    throw std::invalid_argument("sample_mean_cov: empty dataset");
  const double n = double(dataset.count());
  CovarianceModel model;
  model.mean = dataset.samples.colwise().sum().transpose() / n;
  // Rows are samples, so the Gram direction is S^T conj(S): entry (a,b) =
  // (1/n) sum_i h_i[a] conj(h_i[b]).
  model.covariance =
      (dataset.samples.transpose() * dataset.samples.conjugate()) / n;
  model.source = CovarianceSource::sample;
  model.metadata["count"] = std::to_string(dataset.count());
  return model;
}

// Rescale a dataset in place so that the mean squared sample norm equals
// `target_mean_square` exactly.  Returns the applied scale factor, which is
// also multiplied into dataset.normalization_scale so the original units
// can be recovered.
inline double normalize_dataset(ChannelDataset& dataset,
                                double target_mean_square) {
  if (dataset.count() == 0)
    throw std::invalid_argument("normalize_dataset: empty dataset");
  if (!(target_mean_square > 0.0))
    throw std::invalid_argument("normalize_dataset: target <= 0");
  const double total = dataset.samples.squaredNorm();
  if (total <= 0.0)
    throw std::invalid_argument("normalize_dataset: all-zero dataset");
  const double scale =
      std::sqrt(target_mean_square * double(dataset.count()) / total);
  dataset.samples *= scale;
  dataset.normalization_scale *= scale;
  return scale;
}

namespace detail {

// Eigendecomposition of a Hermitian PSD matrix with eigenvalues in
// descending order and a deterministic phase convention: each eigenvector
// is rotated so its first entry of magnitude > 1e-12 is real positive.
// Ties in eigenvalue keep the solver's ascending order, reversed.
inline std::pair<Eigen::VectorXd, Eigen::MatrixXcd> eigh_descending(
    const Eigen::MatrixXcd& cov) {
  require_hermitian(cov, "eigh");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cov);
  if (es.info() != Eigen::Success)
    throw NumericalError("eigh: eigendecomposition failed");
  const Eigen::Index n = cov.rows();
  Eigen::VectorXd vals(n);
  Eigen::MatrixXcd vecs(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    vals[k] = es.eigenvalues()[n - 1 - k];
    Eigen::VectorXcd v = es.eigenvectors().col(n - 1 - k);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v[i]) > 1e-12) {
        v *= std::conj(v[i]) / std::abs(v[i]);
        break;
      }
    }
    vecs.col(k) = v;
  }
  return {std::move(vals), std::move(vecs)};
}

}  // namespace detail

// Linear compression onto the dominant complex eigenvectors of a channel
// covariance.  `n_latent_real` counts real degrees of freedom, so the
// basis keeps n_latent_real / 2 complex columns.
struct PcaCodec {
  Eigen::MatrixXcd basis;       // dim x (n_latent_real / 2)
  Eigen::VectorXd eigenvalues;  // full spectrum, descending
  int n_latent_real = 0;

  Eigen::Index dim() const { return basis.rows(); }
  Eigen::Index n_components() const { return basis.cols(); }
};

inline PcaCodec pca_fit(const CovarianceModel& model, int n_latent_real) {
  if (n_latent_real < 2 || n_latent_real % 2 != 0)
    throw std::invalid_argument("pca_fit: n_latent_real must be even >= 2");
  const Eigen::Index keep = n_latent_real / 2;
  if (keep > model.dim())
    throw std::invalid_argument("pca_fit: more components than dimensions");
  auto [vals, vecs] = detail::eigh_descending(model.covariance);
  PcaCodec codec;
  codec.basis = vecs.leftCols(keep);
  codec.eigenvalues = std::move(vals);
  codec.n_latent_real = n_latent_real;
  return codec;
}

// Project every sample onto the codec basis and reconstruct:
// hhat = P P^H h per row.
inline SampleMatrix pca_roundtrip(const PcaCodec& codec,
                                  const SampleMatrix& samples) {
  if (samples.cols() != codec.dim())
    throw std::invalid_argument("pca_roundtrip: dimension mismatch");
  // Row-stacked: latent = conj(P^H h)^T = h_row conj(P).
  return (samples * codec.basis.conjugate()) * codec.basis.transpose();
}

// Expected reconstruction nMSE under the fitted covariance: the tail
// eigenvalue sum divided by the full dimension.
inline double pca_expected_nmse(const PcaCodec& codec) {
  const Eigen::Index keep = codec.n_components();
  const Eigen::Index n = codec.eigenvalues.size();
  double tail = 0.0;
  for (Eigen::Index k = keep; k < n; ++k) tail += codec.eigenvalues[k];
  return tail / double(n);
}

// LMMSE channel estimator for y = A h + w, w ~ CN(0, noise_var I):
// hhat = mu + C A^H (A C A^H + noise_var I)^{-1} (y - A mu).
// The gain is precomputed through a Hermitian LDLT factorization; the
// system matrix is never inverted explicitly.
struct LmmseEstimator {
  Eigen::VectorXcd mean;    // prior mean mu (dim)
  Eigen::MatrixXcd gain;    // dim x n_obs, hhat = mu + gain (y - A mu)
  Eigen::VectorXcd a_mean;  // A mu, cached
  double mmse = 0.0;        // analytic per-entry MSE (1/dim) tr(C - C A^H M^{-1} A C)

  Eigen::Index dim() const { return gain.rows(); }
  Eigen::Index n_obs() const { return gain.cols(); }
};

inline LmmseEstimator make_lmmse(const CovarianceModel& model,
                                 const Eigen::MatrixXcd& observation,
                                 double noise_var) {
  if (observation.cols() != model.dim())
    throw std::invalid_argument("make_lmmse: observation dim mismatch");
  if (noise_var < 0.0)
    throw std::invalid_argument("make_lmmse: negative noise variance");
  detail::require_hermitian(model.covariance, "make_lmmse");
  const Eigen::MatrixXcd ac = observation * model.covariance;  // A C
  Eigen::MatrixXcd system = ac * observation.adjoint();        // A C A^H
  system.diagonal().array() += noise_var;
  system = (system + system.adjoint().eval()) / 2.0;

  Eigen::LDLT<Eigen::MatrixXcd> ldlt(system);
  if (ldlt.info() != Eigen::Success)
    throw NumericalError("make_lmmse: system factorization failed");
  if (noise_var == 0.0) {
    // Without a noise term the Gram matrix must be invertible outright; a
    // pivoted solve may still look consistent on a rank-deficient system, so
    // inspect the factor pivots directly.
    const Eigen::VectorXd pivots = ldlt.vectorD().cwiseAbs();
    if (!(pivots.minCoeff() > 1e-12 * pivots.maxCoeff()))
      throw NumericalError(
          "make_lmmse: singular observation system; add a noise floor");
  }
  const Eigen::MatrixXcd solved = ldlt.solve(ac);  // M^{-1} A C
  const double resid = (system * solved - ac).norm();
  if (!(resid <= 1e-6 * std::max(1.0, ac.norm())))
    throw NumericalError(
        "make_lmmse: singular observation system; add a noise floor");

  LmmseEstimator est;
  est.mean = model.mean;
  est.gain = solved.adjoint();  // (M^{-1} A C)^H = C A^H M^{-1}
  est.a_mean = observation * model.mean;
  est.mmse = (model.covariance.trace().real() -
              (ac.adjoint() * solved).trace().real()) /
             double(model.dim());
  return est;
}

// Apply the estimator to row-stacked observations y (count x n_obs).
inline SampleMatrix lmmse_estimate(const LmmseEstimator& est,
                                   const SampleMatrix& observations) {
  if (observations.cols() != est.n_obs())
    throw std::invalid_argument("lmmse_estimate: observation dim mismatch");
  SampleMatrix out(observations.rows(), est.dim());
  // Row form: hhat_row = mu^T + (y - A mu)^T gain^T.
  out = (observations.rowwise() - est.a_mean.transpose()) *
        est.gain.transpose();
  out.rowwise() += est.mean.transpose();
  return out;
}

inline double analytic_mmse(const LmmseEstimator& est) { return est.mmse; }

// Gaussian surrogate generator CN(mu, C) via the PSD factor C = F F^H:
// sample i = mu + F z_i with z_i ~ CN(0, I), one RNG substream per row.
struct GaussianGenerator {
  Eigen::VectorXcd mean;
  Eigen::MatrixXcd factor;

  Eigen::Index dim() const { return mean.size(); }
};

inline GaussianGenerator make_gaussian_generator(
    const CovarianceModel& model) {
  GaussianGenerator gen;
  gen.mean = model.mean;
  gen.factor = psd_factorize(model.covariance);
  return gen;
}

inline ChannelDataset gaussian_generate(const GaussianGenerator& gen,
                                        std::size_t count,
                                        std::uint64_t seed, int workers = 0) {
  if (count == 0)
    throw std::invalid_argument("gaussian_generate: count == 0");
  RngStream stream(seed, 0);
  ChannelDataset ds;
  ds.seed = seed;
  ds.samples = sample_complex_gaussian(gen.mean, gen.factor, count, stream,
                                       workers);
  ds.provenance = {{"generator", "gaussian"},
                   {"seed", std::to_string(seed)},
                   {"count", std::to_string(count)}};
  return ds;
}

inline ChannelDataset gaussian_generate(const CovarianceModel& model,
                                        std::size_t count,
                                        std::uint64_t seed, int workers = 0) {
  return gaussian_generate(make_gaussian_generator(model), count, seed,
                           workers);
}

}  // namespace chansim

#endif  // CHANSIM_BASELINES_HPP
