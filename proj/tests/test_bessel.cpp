// Copyright (c) 2026 The chansim authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <chansim/bessel.hpp>

#include <cmath>
#include <limits>

namespace {

// Independent oracle: the defining power series
//   J0(x) = sum_k (-1)^k (x^2/4)^k / (k!)^2
// summed in long double with Kahan compensation.  At |x| <= 20 the largest
// term is ~8e6, so the compensated long-double sum carries an absolute
// error far below 1e-12; the implementation under test uses a different
// split (series only below 12, Hankel asymptotics above).
long double j0_series_oracle(long double x) {
  const long double q = x * x / 4.0L;
  long double term = 1.0L, sum = 1.0L, comp = 0.0L;
  for (int k = 1; k <= 120; ++k) {
    term *= -q / (static_cast<long double>(k) * k);
    const long double y = term - comp;
    const long double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

TEST_CASE("bessel_j0 matches the series oracle on |x| <= 20", "[bessel]") {
  double worst = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double x = -20.0 + 0.01 * i;
    const double err =
        std::abs(chansim::bessel_j0(x) - double(j0_series_oracle(x)));
    worst = std::max(worst, err);
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("bessel_j0 known values", "[bessel]") {
  CHECK(chansim::bessel_j0(0.0) == 1.0);
  // Handbook values.
  CHECK(chansim::bessel_j0(1.0) ==
        Catch::Approx(0.7651976865579666).epsilon(1e-12));
  CHECK(chansim::bessel_j0(5.0) ==
        Catch::Approx(-0.1775967713143383).epsilon(1e-10));
  CHECK(chansim::bessel_j0(10.0) ==
        Catch::Approx(-0.2459357644513483).epsilon(1e-10));
  CHECK(chansim::bessel_j0(20.0) ==
        Catch::Approx(0.1670246643405832).epsilon(1e-9));
  // First zeros of J0.
  CHECK(std::abs(chansim::bessel_j0(2.404825557695773)) < 1e-9);
  CHECK(std::abs(chansim::bessel_j0(5.520078110286311)) < 1e-9);
  CHECK(std::abs(chansim::bessel_j0(8.653727912911013)) < 1e-9);
  CHECK(std::abs(chansim::bessel_j0(14.930917708487786)) < 1e-9);
}

TEST_CASE("bessel_j0 is even", "[bessel]") {
  for (double x : {0.3, 1.7, 7.9, 13.4, 19.99})
    CHECK(chansim::bessel_j0(x) == chansim::bessel_j0(-x));
}

TEST_CASE("bessel_j0 rejects non-finite input", "[bessel]") {
  CHECK_THROWS_AS(chansim::bessel_j0(std::numeric_limits<double>::infinity()),
                  std::domain_error);
  CHECK_THROWS_AS(chansim::bessel_j0(std::numeric_limits<double>::quiet_NaN()),
                  std::domain_error);
}

TEST_CASE("bessel_j0 decays like 1/sqrt(x) at large argument", "[bessel]") {
  // Beyond the tabulated range the asymptotic branch must stay bounded by
  // its leading envelope.
  for (double x : {30.0, 60.0, 120.0, 500.0})
    CHECK(std::abs(chansim::bessel_j0(x)) <
          1.1 * std::sqrt(2.0 / (3.14159265358979323846 * x)));
}
