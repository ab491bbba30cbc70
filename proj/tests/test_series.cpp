#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "wavebound/constants.hpp"
#include "wavebound/series.hpp"

using namespace wavebound;

namespace {

// Brute-force partial sum to n terms plus the plain integral tail bound.
double brute_zeta(double s, long n) {
  double sum = 0.0;
  for (long k = n; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);
  return sum + std::pow(static_cast<double>(n) + 0.5, 1.0 - s) / (s - 1.0);
}

}  // namespace

TEST(Series, ZetaThreeHalves) {
  const auto r = zeta_series(1.5);
  EXPECT_NEAR(r.value, 2.612375348685488, 1e-10 * 2.612375348685488);
  EXPECT_LT(r.error_bound, 1e-10 * r.partial);
  EXPECT_NEAR(r.value, std::riemann_zeta(1.5), 1e-10);
}

TEST(Series, ZetaTwoIsBaselProblem) {
  EXPECT_NEAR(zeta_series(2.0).value, std::numbers::pi * std::numbers::pi / 6.0, 1e-10);
}

TEST(Series, ZetaAgreesWithLongBruteForceSum) {
  for (double s : {1.1, 1.5, 1.75, 2.5}) {
    const double ref = brute_zeta(s, 10'000'000);
    EXPECT_NEAR(zeta_series(s).value / ref, 1.0, 1e-9) << "s=" << s;
  }
}

TEST(Series, ZetaDoublingIsStable) {
  for (double s : {1.25, 1.5, 2.0}) {
    const SeriesOptions opt;
    EXPECT_NEAR(zeta_series(s, opt.doubled()).value / zeta_series(s, opt).value, 1.0, 1e-10);
  }
}

TEST(Series, ZetaRejectsDivergentExponent) {
  EXPECT_THROW(zeta_series(1.0), DomainError);
  EXPECT_THROW(zeta_series(0.5), DomainError);
}

TEST(Series, GeometricAtAlphaZero) {
  // sum_{j>=0} 2^{-j/2} = 1/(1 - 1/sqrt 2) = 2 + sqrt 2
  EXPECT_NEAR(power_geometric_series(0.0, 1.0 / std::sqrt(2.0)).value, 2.0 + std::sqrt(2.0), 1e-9);
}

TEST(Series, PowerGeometricClosedForms) {
  const double r = 1.0 / std::sqrt(2.0);
  // sum m r^{m-1} = 1/(1-r)^2, sum m^2 r^{m-1} = (1+r)/(1-r)^3
  EXPECT_NEAR(power_geometric_series(1.0, r).value * (1 - r) * (1 - r), 1.0, 1e-10);
  EXPECT_NEAR(power_geometric_series(2.0, r).value * std::pow(1 - r, 3) / (1 + r), 1.0, 1e-10);
  const auto res = power_geometric_series(1.0, r);
  EXPECT_LT(res.error_bound, 1e-10 * res.partial);
}

TEST(Series, PowerGeometricRejectsBadRatio) {
  EXPECT_THROW(power_geometric_series(1.0, 1.0), DomainError);
  EXPECT_THROW(power_geometric_series(1.0, 0.0), DomainError);
}
