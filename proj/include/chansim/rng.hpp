// Copyright (c) 2026 The chansim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CHANSIM_RNG_HPP
#define CHANSIM_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace chansim {

namespace detail {

// splitmix64 finalizer; good avalanche, cheap, and stable across platforms.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace detail

// A seeded, indexable random stream.  The pair (root_seed, stream_index)
// fully determines the value sequence; distinct indices give independent
// streams.  Generators hand one stream per realization to worker threads,
// which makes results bit-identical regardless of the worker count.
//
// The derivation below (splitmix64-mixed key feeding a mt19937_64, uniforms
// from the top 53 bits, Box-Muller normals) is a frozen format contract:
// changing any part of it changes every seeded artifact.
class RngStream {
 public:
  RngStream(std::uint64_t root_seed, std::uint64_t stream_index)
      : root_seed_(root_seed),
        stream_index_(stream_index),
        engine_(key(root_seed, stream_index)) {}

  static std::uint64_t key(std::uint64_t root, std::uint64_t index) {
    return detail::mix64(detail::mix64(root) ^ detail::mix64(index));
  }

  std::uint64_t root_seed() const { return root_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  // Child stream i of this stream; the chain (root, i0, i1, ...) is
  // collision-resistant because each level re-mixes the parent key.
  RngStream substream(std::uint64_t index) const {
    return RngStream(key(root_seed_, stream_index_), index);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return double(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on [-pi, pi).
  double uniform_phase() {
    return (2.0 * uniform01() - 1.0) * 3.14159265358979323846;
  }

  // Standard normal via Box-Muller; the second variate of each pair is
  // cached, so normals always cost one pair of uniforms per two values.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]; keeps log() finite
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  // Circularly-symmetric complex normal, E[|z|^2] = 1
  // (variance 1/2 per real component).
  std::complex<double> cnormal() {
    const double re = normal();
    const double im = normal();
    return {re * 0x1.6a09e667f3bcdp-1, im * 0x1.6a09e667f3bcdp-1};  // 1/sqrt(2)
  }

  // Laplace(mu, b) via inverse CDF; b = 0 degenerates to the point mass
  // at mu.
  double laplace(double mu, double b) {
    if (b == 0.0) return mu;
    const double u = uniform01() - 0.5;
    const double s = u < 0.0 ? -1.0 : 1.0;
    return mu - b * s * std::log1p(-2.0 * std::abs(u));
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t root_seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace chansim

#endif  // CHANSIM_RNG_HPP
