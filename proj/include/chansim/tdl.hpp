// Copyright (c) 2026 The chansim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CHANSIM_TDL_HPP
#define CHANSIM_TDL_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "chansim/dataset.hpp"
#include "chansim/errors.hpp"
#include "chansim/profiles.hpp"
#include "chansim/stochastics.hpp"

namespace chansim {

// OFDM sampling grid: N_f subcarriers spaced delta_f apart, N_t symbols
// of duration delta_t, fading at maximum Doppler f_d.
struct GridConfig {
  int n_subcarriers = 0;
  int n_symbols = 0;
  double subcarrier_spacing = 0.0;  // Hz
  double symbol_duration = 0.0;     // s
  double max_doppler = 0.0;         // Hz

  void validate() const {
    if (n_subcarriers < 1)
      throw std::invalid_argument("grid: n_subcarriers < 1");
    if (n_symbols < 1) throw std::invalid_argument("grid: n_symbols < 1");
    if (!(subcarrier_spacing > 0.0))
      throw std::invalid_argument("grid: subcarrier_spacing <= 0");
    if (!(symbol_duration > 0.0))
      throw std::invalid_argument("grid: symbol_duration <= 0");
    if (!(max_doppler >= 0.0))
      throw std::invalid_argument("grid: max_doppler < 0");
  }

  Eigen::Index dim() const {
    return Eigen::Index(n_subcarriers) * n_symbols;
  }
};

// Frequency response of a pure delay tau sampled on n_f subcarriers:
// entry k = exp(-j 2 pi delta_f k tau).
inline Eigen::VectorXcd frequency_steering(double tau, double delta_f,
                                           int n_f) {
  if (n_f < 1) throw std::invalid_argument("frequency_steering: n_f < 1");
  Eigen::VectorXcd a(n_f);
  for (int k = 0; k < n_f; ++k) {
    const double phase = -2.0 * kPi * delta_f * k * tau;
    a[k] = {std::cos(phase), std::sin(phase)};
  }
  return a;
}

struct TdlOptions {
  int workers = 0;                      // 0 = auto (CHANSIM_THREADS caps)
  std::uint64_t first_stream_index = 0; // offset for disjoint splits
};

// Draw `count` OFDM channel realizations of a delay-scaled TDL profile.
//
// Realization i uses RngStream(seed, first_stream_index + i).  Within a
// realization the draw order is frozen: for each tap in profile order, one
// complex normal per time-factor column (n_symbols of them for a nonzero
// Doppler, one in the static limit); afterwards, if the profile has a LOS
// tap, one uniform phase for its deterministic ray.
//
// The sample vector stacks the grid time-major: index = t*N_f + f.  Each
// tap contributes sqrt(p_fade) a_t (x) a_f with a_t ~ CN(0, C_Jakes); the
// LOS tap additionally contributes a fixed-magnitude ray
// sqrt(p k/(1+k)) exp(j(2 pi fraction f_D dT t + psi)) on its a_f.
inline ChannelDataset generate_tdl_dataset(const LinkProfile& profile,
                                           const GridConfig& grid,
                                           std::size_t count,
                                           std::uint64_t seed,
                                           const TdlOptions& opts = {}) {
  if (!profile.delays_scaled)
    throw StateError("generate_tdl_dataset: profile '" + profile.name +
                     "' has dimensionless delays; call scale_delays first");
  grid.validate();
  const int nt = grid.n_symbols, nf = grid.n_subcarriers;
  const Eigen::Index L = Eigen::Index(profile.taps.size());

  // Zero Doppler is the exact static limit: the time correlation is the
  // all-ones matrix, whose exact factor is a single column of ones.  Going
  // through the generic factorization would instead pick up its
  // regularization jitter and wiggle a channel that must be frozen.
  const Eigen::MatrixXcd f_jakes =
      grid.max_doppler == 0.0
          ? Eigen::MatrixXcd::Ones(nt, 1)
          : psd_factorize(jakes_covariance(grid.max_doppler,
                                           grid.symbol_duration, nt));
  const Eigen::Index r = f_jakes.cols();

  std::vector<Eigen::VectorXcd> a_f(L);
  Eigen::VectorXd amp(L);  // sqrt of the fading power per tap
  Eigen::Index los_tap = -1;
  for (Eigen::Index l = 0; l < L; ++l) {
    const TapEntry& tap = profile.taps[l];
    a_f[l] = frequency_steering(tap.delay, grid.subcarrier_spacing, nf);
    const auto [fading, los] = tap.is_los
                                   ? split_rician(tap.power, profile.k_factor)
                                   : std::pair<double, double>{tap.power, 0.0};
    amp[l] = std::sqrt(fading);
    if (tap.is_los) los_tap = l;
  }
  const double los_amp =
      los_tap >= 0
          ? std::sqrt(split_rician(profile.taps[los_tap].power,
                                   profile.k_factor)
                          .second)
          : 0.0;
  const double los_rate = 2.0 * kPi * profile.los_doppler_fraction *
                          grid.max_doppler * grid.symbol_duration;

  ChannelDataset ds;
  ds.seed = seed;
  ds.samples.resize(Eigen::Index(count), grid.dim());
  parallel_for(count, worker_count(opts.workers),
               [&](std::size_t lo, std::size_t hi) {
    Eigen::VectorXcd z(r), a_t(nt);
    using RowGrid = Eigen::Matrix<std::complex<double>, Eigen::Dynamic,
                                  Eigen::Dynamic, Eigen::RowMajor>;
    for (std::size_t i = lo; i < hi; ++i) {
      RngStream stream(seed, opts.first_stream_index + i);
      Eigen::Map<RowGrid> h(ds.samples.row(i).data(), nt, nf);
      h.setZero();
      for (Eigen::Index l = 0; l < L; ++l) {
        for (Eigen::Index k = 0; k < r; ++k) z[k] = stream.cnormal();
        a_t.noalias() = f_jakes * z;
        h.noalias() += amp[l] * a_t * a_f[l].transpose();
      }
      if (los_tap >= 0) {
        const double psi = stream.uniform_phase();
        for (int t = 0; t < nt; ++t) {
          const double ph = los_rate * t + psi;
          const std::complex<double> ray =
              los_amp * std::complex<double>(std::cos(ph), std::sin(ph));
          h.row(t) += ray * a_f[los_tap].transpose();
        }
      }
    }
  });
  ds.provenance = {{"generator", "tdl"},
                   {"profile", profile.name},
                   {"seed", std::to_string(seed)},
                   {"count", std::to_string(count)}};
  return ds;
}

// Exact covariance of the fading part on the same grid, time-major:
// C = C_Jakes (x) sum_l p_fade_l a_f a_f^H.  The deterministic LOS ray is
// zero-mean (uniform phase) but not Gaussian; its second moment is not
// folded in here and is described in the metadata instead.
inline CovarianceModel analytic_tdl_covariance(const LinkProfile& profile,
                                               const GridConfig& grid) {
  if (!profile.delays_scaled)
    throw StateError("analytic_tdl_covariance: profile '" + profile.name +
                     "' has dimensionless delays; call scale_delays first");
  grid.validate();
  const int nt = grid.n_symbols, nf = grid.n_subcarriers;

  Eigen::MatrixXcd c_freq = Eigen::MatrixXcd::Zero(nf, nf);
  double los_power = 0.0;
  for (const TapEntry& tap : profile.taps) {
    const Eigen::VectorXcd a =
        frequency_steering(tap.delay, grid.subcarrier_spacing, nf);
    const auto [fading, los] = tap.is_los
                                   ? split_rician(tap.power, profile.k_factor)
                                   : std::pair<double, double>{tap.power, 0.0};
    c_freq.noalias() += fading * (a * a.adjoint());
    los_power += los;
  }

  CovarianceModel model;
  model.mean = Eigen::VectorXcd::Zero(grid.dim());
  model.covariance = kron(
      jakes_covariance(grid.max_doppler, grid.symbol_duration, nt), c_freq);
  model.source = CovarianceSource::analytic;
  model.metadata["profile"] = profile.name;
  if (los_power > 0.0) {
    model.metadata["los_power"] = std::to_string(los_power);
    model.metadata["los_structure"] =
        "zero-mean deterministic-magnitude rank-1 component of power " +
        std::to_string(los_power) +
        " (uniform phase per realization), excluded from this matrix";
  }
  return model;
}

}  // namespace chansim

#endif  // CHANSIM_TDL_HPP
