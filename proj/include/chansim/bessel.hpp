// Copyright (c) 2026 The chansim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CHANSIM_BESSEL_HPP
#define CHANSIM_BESSEL_HPP

#include <cmath>
#include <complex>
#include <stdexcept>

namespace chansim {

// J0, the zeroth-order Bessel function of the first kind.
//
// |x| < 12 uses the ascending power series in long double arithmetic
// (the worst-case cancellation near the crossover still leaves ~15 good
// digits); |x| >= 12 uses the Hankel asymptotic expansion, whose smallest
// term near x = 12 is ~1e-13.  Absolute error is below 1e-10 across
// |x| <= 1e4.
inline double bessel_j0(double x) {
  if (!std::isfinite(x))
    throw std::domain_error("bessel_j0: non-finite argument");
  const long double ax = std::fabs((long double)x);

  if (ax < 12.0L) {
    // sum_k (-(x/2)^2)^k / (k!)^2
    const long double q = ax * ax / 4.0L;
    long double term = 1.0L, sum = 1.0L;
    for (int k = 1; k <= 200; ++k) {
      term *= -q / ((long double)k * k);
      sum += term;
      if (std::fabs(term) < 1e-22L * std::fabs(sum)) break;
    }
    return double(sum);
  }

  // J0(x) = sqrt(2/(pi x)) * Re[ e^{i(x - pi/4)} * sum_k (-i)^k c_k ],
  // c_0 = 1, c_k = c_{k-1} (2k-1)^2 / (8 k x).  The series is asymptotic:
  // stop at the smallest term.
  const long double pi = 3.14159265358979323846264338328L;
  std::complex<long double> acc(1.0L, 0.0L);
  std::complex<long double> ipow(1.0L, 0.0L);  // (-i)^k
  long double c = 1.0L;
  for (int k = 1; k <= 40; ++k) {
    const long double next = c * (2.0L * k - 1.0L) * (2.0L * k - 1.0L) /
                             (8.0L * k * ax);
    if (next >= c || next < 1e-20L) break;
    c = next;
    ipow *= std::complex<long double>(0.0L, -1.0L);
    acc += ipow * c;
  }
  const long double chi = ax - pi / 4.0L;
  const std::complex<long double> phase(std::cos(chi), std::sin(chi));
  const long double re = (phase * acc).real();
  return double(std::sqrt(2.0L / (pi * ax)) * re);
}

}  // namespace chansim

#endif  // CHANSIM_BESSEL_HPP
