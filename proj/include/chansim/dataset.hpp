// Copyright (c) 2026 The chansim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CHANSIM_DATASET_HPP
#define CHANSIM_DATASET_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>

namespace chansim {

// Row-major so that each sample is contiguous; generators write rows in
// parallel and the binary format is row-major anyway.
using SampleMatrix =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic,
                  Eigen::RowMajor>;

// A seeded collection of complex channel vectors, one per row.
// normalization_scale is the cumulative scalar that has been applied to
// the raw generator output (1.0 = untouched).
struct ChannelDataset {
  SampleMatrix samples;  // count x dim
  double normalization_scale = 1.0;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> provenance;

  Eigen::Index count() const { return samples.rows(); }
  Eigen::Index dim() const { return samples.cols(); }
};

enum class CovarianceSource { analytic, sample, monte_carlo };

inline const char* to_string(CovarianceSource s) {
  switch (s) {
    case CovarianceSource::analytic: return "analytic";
    case CovarianceSource::sample: return "sample";
    default: return "monte-carlo";
  }
}

// First and second moments of a channel distribution.  For models with a
// deterministic (LOS) component whose phase is uniform, the mean is zero
// and the component shows up as a rank-1 part of `covariance`; metadata
// carries the rank-structure note.
struct CovarianceModel {
  Eigen::VectorXcd mean;
  Eigen::MatrixXcd covariance;
  CovarianceSource source = CovarianceSource::sample;
  std::map<std::string, std::string> metadata;

  Eigen::Index dim() const { return covariance.rows(); }
};

}  // namespace chansim

#endif  // CHANSIM_DATASET_HPP
