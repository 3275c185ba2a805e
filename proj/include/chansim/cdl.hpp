// Copyright (c) 2026 The chansim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CHANSIM_CDL_HPP
#define CHANSIM_CDL_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <numeric>
#include <string>
#include <vector>

#include "chansim/dataset.hpp"
#include "chansim/errors.hpp"
#include "chansim/parallel.hpp"
#include "chansim/profiles.hpp"
#include "chansim/stochastics.hpp"

namespace chansim {

// Antenna array geometry: element positions in meters, local coordinates.
struct ArrayConfig {
  std::vector<Eigen::Vector3d> element_positions;
  double wavelength = 0.0;  // m

  void validate() const {
    if (element_positions.empty())
      throw std::invalid_argument("array: no elements");
    if (!(wavelength > 0.0))
      throw std::invalid_argument("array: wavelength <= 0");
  }

  Eigen::Index size() const {
    return Eigen::Index(element_positions.size());
  }
};

// Uniform linear array along x: element i at [i*spacing*lambda, 0, 0].
inline ArrayConfig ula_config(int n, double spacing_wavelengths,
                              double wavelength) {
  if (n < 1) throw std::invalid_argument("ula_config: n < 1");
  if (!(spacing_wavelengths > 0.0))
    throw std::invalid_argument("ula_config: spacing <= 0");
  if (!(wavelength > 0.0))
    throw std::invalid_argument("ula_config: wavelength <= 0");
  ArrayConfig a;
  a.wavelength = wavelength;
  a.element_positions.reserve(n);
  for (int i = 0; i < n; ++i)
    a.element_positions.emplace_back(i * spacing_wavelengths * wavelength,
                                     0.0, 0.0);
  return a;
}

// Array response for a plane wave from (azimuth phi, zenith theta):
// entry i = exp(j (2 pi / lambda) e(phi, theta)^T d_i) with the spherical
// unit vector e = [sin(th) cos(ph), sin(th) sin(ph), cos(th)].
inline Eigen::VectorXcd steering_vector(const ArrayConfig& array,
                                        double azimuth, double zenith) {
  array.validate();
  const Eigen::Vector3d e(std::sin(zenith) * std::cos(azimuth),
                          std::sin(zenith) * std::sin(azimuth),
                          std::cos(zenith));
  const double k = 2.0 * kPi / array.wavelength;
  Eigen::VectorXcd a(array.size());
  for (Eigen::Index i = 0; i < array.size(); ++i) {
    const double phase = k * e.dot(array.element_positions[i]);
    a[i] = {std::cos(phase), std::sin(phase)};
  }
  return a;
}

// Per-ray angles of one cluster, radians, all vectors of length M.
struct RayAngleSet {
  Eigen::VectorXd aod, aoa, zod, zoa;

  Eigen::Index rays() const { return aod.size(); }
};

enum class RayMode { iid_laplacian, fixed_offsets };

namespace detail {

// Ray offset table for fixed-offsets mode (unit spread, 20 rays).
inline constexpr std::array<double, 20> kRayOffsets = {
    0.0447,  -0.0447, 0.1413,  -0.1413, 0.2492,  -0.2492, 0.3715,
    -0.3715, 0.5129,  -0.5129, 0.6797,  -0.6797, 0.8844,  -0.8844,
    1.1481,  -1.1481, 1.5195,  -1.5195, 2.1551,  -2.1551};

inline Eigen::VectorXd draw_dimension(double mean, double spread, int m,
                                      RayMode mode, RngStream& stream,
                                      bool zenith) {
  Eigen::VectorXd out(m);
  if (mode == RayMode::iid_laplacian) {
    // Laplace scale b = spread/sqrt(2) makes the standard deviation equal
    // to the tabulated spread.
    const double b = spread / std::sqrt(2.0);
    for (int i = 0; i < m; ++i) out[i] = stream.laplace(mean, b);
  } else {
    if (m != int(kRayOffsets.size()))
      throw std::invalid_argument(
          "draw_ray_angles: fixed-offsets mode requires exactly 20 rays");
    std::array<double, 20> off = kRayOffsets;
    // Fisher-Yates, one permutation per dimension per cluster.
    for (int i = 19; i > 0; --i) {
      const int j = int(stream.uniform01() * (i + 1));
      std::swap(off[i], off[std::min(j, i)]);
    }
    for (int i = 0; i < m; ++i) out[i] = mean + spread * off[i];
  }
  if (zenith)
    for (int i = 0; i < m; ++i) out[i] = std::clamp(out[i], 0.0, kPi);
  return out;
}

}  // namespace detail

// Draw the M ray angles of one cluster.  iid-laplacian draws each of the
// four dimensions i.i.d. Laplacian around the cluster mean; fixed-offsets
// scales the tabulated offsets by the spread and permutes them per
// dimension.  Zenith results are clipped to [0, pi].  Draw order is
// frozen: aod, aoa, zod, zoa.
inline RayAngleSet draw_ray_angles(const CdlCluster& cluster,
                                   const AngularSpreads& spreads, int m,
                                   RayMode mode, RngStream& stream) {
  if (m < 1) throw std::invalid_argument("draw_ray_angles: m < 1");
  RayAngleSet set;
  set.aod = detail::draw_dimension(cluster.aod, spreads.asd, m, mode, stream,
                                   false);
  set.aoa = detail::draw_dimension(cluster.aoa, spreads.asa, m, mode, stream,
                                   false);
  set.zod = detail::draw_dimension(cluster.zod, spreads.zsd, m, mode, stream,
                                   true);
  set.zoa = detail::draw_dimension(cluster.zoa, spreads.zsa, m, mode, stream,
                                   true);
  return set;
}

// One frozen draw of all cluster ray angles (link-level semantics: the
// geometry is a fixed constant of the profile instantiation, only phases
// vary between realizations).
inline std::vector<RayAngleSet> instantiate_rays(const CdlProfile& profile,
                                                 RayMode mode,
                                                 RngStream& stream) {
  std::vector<RayAngleSet> rays;
  rays.reserve(profile.clusters.size());
  for (const CdlCluster& c : profile.clusters)
    rays.push_back(draw_ray_angles(c, profile.spreads,
                                   profile.rays_per_cluster, mode, stream));
  return rays;
}

struct CdlOptions {
  int workers = 0;
  std::uint64_t first_stream_index = 0;
  // Redraw the ray geometry from the realization's own stream instead of
  // freezing one instantiation (scenario-level-style ablations).
  bool redraw_per_realization = false;
};

namespace detail {

// Stack the per-ray array responses as columns of an N x (L*M) matrix,
// rx-major Kronecker per ray: u = a_rx (x) a_tx.  Returns the per-ray
// amplitudes sqrt(p_fade/M) alongside.
struct RayBasis {
  Eigen::MatrixXcd u;       // N x (L*M)
  Eigen::VectorXd amp;      // L*M
  Eigen::VectorXcd los_u;   // N (empty when no LOS cluster)
  double los_amp = 0.0;
};

inline RayBasis build_ray_basis(const CdlProfile& profile,
                                const ArrayConfig& tx, const ArrayConfig& rx,
                                const std::vector<RayAngleSet>& rays) {
  const Eigen::Index n = tx.size() * rx.size();
  const Eigen::Index L = Eigen::Index(profile.clusters.size());
  const int m = profile.rays_per_cluster;
  RayBasis basis;
  basis.u.resize(n, L * m);
  basis.amp.resize(L * m);
  for (Eigen::Index l = 0; l < L; ++l) {
    const CdlCluster& c = profile.clusters[l];
    const auto [fading, los] =
        c.is_los ? split_rician(c.power, profile.k_factor)
                 : std::pair<double, double>{c.power, 0.0};
    const RayAngleSet& set = rays[l];
    for (int i = 0; i < m; ++i) {
      const Eigen::VectorXcd a_tx =
          steering_vector(tx, set.aod[i], set.zod[i]);
      const Eigen::VectorXcd a_rx =
          steering_vector(rx, set.aoa[i], set.zoa[i]);
      basis.u.col(l * m + i) = kron(a_rx, a_tx);
      basis.amp[l * m + i] = std::sqrt(fading / m);
    }
    if (c.is_los) {
      basis.los_u = kron(Eigen::MatrixXcd(steering_vector(rx, c.aoa, c.zoa)),
                         Eigen::MatrixXcd(steering_vector(tx, c.aod, c.zod)));
      basis.los_amp = std::sqrt(los);
    }
  }
  return basis;
}

}  // namespace detail

// Generate `count` narrowband MIMO realizations from a frozen ray
// instantiation.  Realization i uses RngStream(seed, 1 + first + i) — index
// 0 is reserved for the instantiation draw — and draws, in order: M phases
// per cluster in cluster order (plus a fresh geometry first when
// redraw_per_realization), then one LOS phase if the profile has one.
// h = sum_lm sqrt(p_fade_l/M) e^{j beta_lm} (a_rx (x) a_tx)
//   [+ sqrt(p_los) e^{j psi} u_los],  index = i_rx*N_tx + i_tx.
inline ChannelDataset generate_cdl_dataset(
    const CdlProfile& profile, const ArrayConfig& tx, const ArrayConfig& rx,
    std::size_t count, std::uint64_t seed,
    const std::vector<RayAngleSet>& rays, RayMode mode,
    const CdlOptions& opts = {}) {
  tx.validate();
  rx.validate();
  const Eigen::Index n = tx.size() * rx.size();
  const int m = profile.rays_per_cluster;
  const Eigen::Index L = Eigen::Index(profile.clusters.size());

  detail::RayBasis basis;
  if (!opts.redraw_per_realization) {
    if (Eigen::Index(rays.size()) != L)
      throw std::invalid_argument(
          "generate_cdl_dataset: ray set count != cluster count");
    basis = detail::build_ray_basis(profile, tx, rx, rays);
  }

  ChannelDataset ds;
  ds.seed = seed;
  ds.samples.resize(Eigen::Index(count), n);
  parallel_for(count, worker_count(opts.workers),
               [&](std::size_t lo, std::size_t hi) {
    Eigen::VectorXcd rho(L * m);
    detail::RayBasis local;
    for (std::size_t i = lo; i < hi; ++i) {
      RngStream stream(seed, 1 + opts.first_stream_index + i);
      const detail::RayBasis* b = &basis;
      if (opts.redraw_per_realization) {
        local = detail::build_ray_basis(
            profile, tx, rx, instantiate_rays(profile, mode, stream));
        b = &local;
      }
      for (Eigen::Index k = 0; k < L * m; ++k) {
        const double beta = stream.uniform_phase();
        rho[k] = b->amp[k] *
                 std::complex<double>(std::cos(beta), std::sin(beta));
      }
      Eigen::Map<Eigen::VectorXcd> h(ds.samples.row(i).data(), n);
      h.noalias() = b->u * rho;
      if (b->los_amp > 0.0) {
        const double psi = stream.uniform_phase();
        h += b->los_amp *
             std::complex<double>(std::cos(psi), std::sin(psi)) * b->los_u;
      }
    }
  });
  ds.provenance = {{"generator", "cdl"},
                   {"profile", profile.name},
                   {"seed", std::to_string(seed)},
                   {"count", std::to_string(count)}};
  return ds;
}

// Convenience overload: instantiate the ray geometry from
// RngStream(seed, 0), then generate.
inline ChannelDataset generate_cdl_dataset(const CdlProfile& profile,
                                           const ArrayConfig& tx,
                                           const ArrayConfig& rx,
                                           std::size_t count,
                                           std::uint64_t seed,
                                           RayMode mode = RayMode::iid_laplacian,
                                           const CdlOptions& opts = {}) {
  RngStream angle_stream(seed, 0);
  std::vector<RayAngleSet> rays;
  if (!opts.redraw_per_realization)
    rays = instantiate_rays(profile, mode, angle_stream);
  return generate_cdl_dataset(profile, tx, rx, count, seed, rays, mode,
                              opts);
}

// Monte-Carlo estimate of the channel covariance under the ray-angle
// distribution: for each cluster, average p_fade (a_rx a_rx^H)(x)(a_tx
// a_tx^H) over n_draws independent single-ray draws (cluster l uses
// RngStream(seed, l)).  A LOS component contributes its exact second
// moment p_los u u^H at the cluster mean angles, so the trace equals
// sum_l p_l * N for a unit-power profile.
inline CovarianceModel mc_cdl_covariance(const CdlProfile& profile,
                                         const ArrayConfig& tx,
                                         const ArrayConfig& rx,
                                         std::size_t n_draws,
                                         std::uint64_t seed,
                                         int workers = 0) {
  if (n_draws < 1)
    throw std::invalid_argument("mc_cdl_covariance: n_draws < 1");
  tx.validate();
  rx.validate();
  const Eigen::Index n = tx.size() * rx.size();
  const Eigen::Index L = Eigen::Index(profile.clusters.size());

  std::vector<Eigen::MatrixXcd> percluster(
      L, Eigen::MatrixXcd::Zero(n, n));
  parallel_for(L, worker_count(workers), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t l = lo; l < hi; ++l) {
      const CdlCluster& c = profile.clusters[l];
      const auto [fading, los] =
          c.is_los ? split_rician(c.power, profile.k_factor)
                   : std::pair<double, double>{c.power, 0.0};
      RngStream stream(seed, l);
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
      for (std::size_t d = 0; d < n_draws; ++d) {
        const RayAngleSet one =
            draw_ray_angles(c, profile.spreads, 1, RayMode::iid_laplacian,
                            stream);
        const Eigen::VectorXcd u =
            kron(Eigen::MatrixXcd(steering_vector(rx, one.aoa[0], one.zoa[0])),
                 Eigen::MatrixXcd(steering_vector(tx, one.aod[0], one.zod[0])));
        acc.noalias() += u * u.adjoint();
      }
      percluster[l] = (fading / double(n_draws)) * acc;
      if (los > 0.0) {
        const Eigen::VectorXcd u =
            kron(Eigen::MatrixXcd(steering_vector(rx, c.aoa, c.zoa)),
                 Eigen::MatrixXcd(steering_vector(tx, c.aod, c.zod)));
        percluster[l].noalias() += los * (u * u.adjoint());
      }
    }
  });

  CovarianceModel model;
  model.mean = Eigen::VectorXcd::Zero(n);
  model.covariance = Eigen::MatrixXcd::Zero(n, n);
  for (const Eigen::MatrixXcd& c : percluster) model.covariance += c;
  model.source = CovarianceSource::monte_carlo;
  model.metadata["profile"] = profile.name;
  model.metadata["n_draws"] = std::to_string(n_draws);
  return model;
}

}  // namespace chansim

#endif  // CHANSIM_CDL_HPP
