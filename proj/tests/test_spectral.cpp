#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "wavebound/spectral.hpp"

using namespace wavebound;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST(GaussianModel, ClosedForms) {
  const auto m = gaussian_model(1.0);
  EXPECT_EQ(m.autocov(0.0), 1.0);
  EXPECT_NEAR(autocovariance(m, 1.0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(autocovariance(m, 1.0), 0.367879441171, 1e-12);
  EXPECT_NEAR(gaussian_model(2.0).r_hat(0.0), 2.0 * std::sqrt(pi), 1e-15);
  EXPECT_THROW(gaussian_model(0.0), DomainError);
  EXPECT_THROW(gaussian_model(-1.0), DomainError);
}

TEST(GaussianModel, DensityMassIsVariance) {
  // (1/2pi) int R_hat over |z| <= 40/theta; the Gaussian tail beyond is < 1e-300.
  for (double theta : {0.5, 1.0, 3.0}) {
    const auto m = gaussian_model(theta);
    const auto r = integrate(m.r_hat, -40.0 / theta, 40.0 / theta);
    ASSERT_TRUE(r.converged);
    EXPECT_NEAR(r.value / (2 * pi), 1.0, 1e-8) << theta;
    EXPECT_NEAR(spectral_moment(m, 0, 0.0).value / (2 * pi), 1.0, 1e-10) << theta;
  }
}

TEST(GaussianModel, FourthMomentClosedForm) {
  // int sqrt(pi) e^{-z^2/4} z^4 dz = sqrt(pi) * 3 * 2^2 * sqrt(4 pi) = 24 pi
  const auto m = gaussian_model(1.0);
  const auto r = spectral_moment(m, 0, 4.0);
  EXPECT_TRUE(r.finite);
  EXPECT_NEAR(r.value, 24.0 * pi, 1e-9);
  EXPECT_LE(r.tail_bound, 1e-12 * r.truncated);
  // Brute force over |z| <= 40 with the same integrand.
  const auto b = integrate([&](double z) { return m.r_hat(z) * std::pow(z, 4); }, -40.0, 40.0);
  EXPECT_NEAR(b.value, 24.0 * pi, 1e-8);
}

TEST(GaussianModel, DerivativeMoments) {
  // R_hat' = -(z/2) sqrt(pi) e^{-z^2/4}: int |R_hat'| = 2 sqrt(pi),
  // int |R_hat'| z^4 = sqrt(pi) int |z|^5 e^{-z^2/4} / 2 = sqrt(pi) * 64.
  const auto m = gaussian_model(1.0);
  EXPECT_NEAR(spectral_moment(m, 1, 0.0).value, 2.0 * std::sqrt(pi), 1e-10);
  EXPECT_NEAR(spectral_moment(m, 1, 4.0).value, 64.0 * std::sqrt(pi), 1e-8);
}

TEST(GaussianModel, EvenAndNonnegative) {
  const auto m = gaussian_model(1.3);
  for (int i = 0; i < 1000; ++i) {
    const double z = -20.0 + 40.0 * i / 999.0;
    EXPECT_GE(m.r_hat(z), 0.0);
    EXPECT_EQ(m.r_hat(z), m.r_hat(-z));
    EXPECT_EQ(m.r_hat_d1(z), -m.r_hat_d1(-z));
  }
}

TEST(Bochner, QuadratureMatchesClosedForm) {
  for (const auto& m : {gaussian_model(1.0), gaussian_model(0.4), gaussian_mixture_model({0.3, 0.7}, {0.5, 2.0})}) {
    for (int i = 0; i < 50; ++i) {
      const double tau = 5.0 * i / 49.0;
      EXPECT_NEAR(autocovariance_quadrature(m, tau), m.autocov(tau), 1e-8) << m.kind << " tau=" << tau;
    }
  }
}

TEST(Bochner, TauOneDualPath) {
  const auto m = gaussian_model(1.0);
  EXPECT_NEAR(autocovariance_quadrature(m, 1.0), std::exp(-1.0), 1e-8);
}

TEST(SpectralConditions, GaussianPasses) {
  const auto r = check_spectral_conditions(gaussian_model(1.0));
  EXPECT_TRUE(r.all_satisfied());
  for (const auto& f : r.failures()) ADD_FAILURE() << f;
  EXPECT_NEAR(r.find("cond5.sup_r_hat")->evidence, std::sqrt(pi), 1e-15);
  EXPECT_NEAR(r.find("cond6.r_hat_z4")->evidence, 24.0 * pi, 1e-9);
  for (const char* n : {"cond5.r_hat_d1_L1", "cond6.r_hat_z4", "cond6.r_hat_d1_z4"})
    EXPECT_TRUE(std::isfinite(r.find(n)->evidence)) << n;
  EXPECT_TRUE(r.flags.empty());
}

TEST(SpectralConditions, PowerLawDensityFailsFourthMoment) {
  // R_hat = 1/(1+z^2): exponential_model(1) has R_hat = 2/(1+z^2).
  const auto m = exponential_model(1.0).scaled(0.5);
  EXPECT_NEAR(m.r_hat(0.0), 1.0, 1e-15);
  const auto r = check_spectral_conditions(m);
  ASSERT_NE(r.find("cond6.r_hat_z4"), nullptr);
  EXPECT_FALSE(r.find("cond6.r_hat_z4")->satisfied);
  EXPECT_TRUE(std::isinf(r.find("cond6.r_hat_z4")->evidence));
  EXPECT_TRUE(r.find("cond5.sup_r_hat")->satisfied);
}

TEST(SpectralConditions, IntegralsStableUnderDoubledNodes) {
  const QuadratureOptions base;
  for (const auto& m : {gaussian_model(1.0), gaussian_mixture_model({0.3, 0.7}, {0.5, 2.0})}) {
    const auto a = check_spectral_conditions(m, base);
    const auto b = check_spectral_conditions(m, base.doubled());
    for (const char* n : {"cond5.sup_r_hat", "cond5.r_hat_d1_L1", "cond6.r_hat_z4", "cond6.r_hat_d1_z4"}) {
      const double x = a.find(n)->evidence;
      const double y = b.find(n)->evidence;
      EXPECT_LT(std::abs(x - y) / std::abs(x), 1e-6) << m.kind << ' ' << n;
    }
    EXPECT_LT(b.find("density.bochner_at_zero")->evidence, 1e-8);
  }
}

TEST(Mixture, IsWeightedSum) {
  const auto m = gaussian_mixture_model({0.25, 0.75}, {1.0, 2.0});
  const auto g1 = gaussian_model(1.0);
  const auto g2 = gaussian_model(2.0);
  for (double z : {0.0, 0.3, 1.7, -2.5}) {
    EXPECT_NEAR(m.r_hat(z), 0.25 * g1.r_hat(z) + 0.75 * g2.r_hat(z), 1e-15);
    EXPECT_NEAR(m.autocov(z), 0.25 * g1.autocov(z) + 0.75 * g2.autocov(z), 1e-15);
  }
  EXPECT_TRUE(check_spectral_conditions(m).all_satisfied());
  EXPECT_THROW(gaussian_mixture_model({1.0}, {1.0, 2.0}), DomainError);
  EXPECT_THROW(gaussian_mixture_model({-1.0}, {1.0}), DomainError);
}

TEST(Scaling, MultipliesDensityAndMoments) {
  const auto m = gaussian_model(1.0);
  const auto s = m.scaled(4.0);
  EXPECT_EQ(s.r_hat(0.7), 4.0 * m.r_hat(0.7));
  EXPECT_EQ(s.autocov(0.7), 4.0 * m.autocov(0.7));
  EXPECT_NEAR(spectral_moment(s, 1, 4.0).value / spectral_moment(m, 1, 4.0).value, 4.0, 1e-12);
  EXPECT_EQ(s.amplitude, 4.0);
}

TEST(Tabulated, InterpolatesAndIsFlagged) {
  const auto g = gaussian_model(1.0);
  std::vector<double> values;
  const double h = 0.05;
  for (int i = 0; i <= 400; ++i) values.push_back(g.r_hat(i * h));
  const auto m = tabulated_model(h, values);
  for (double z : {0.0, 0.33, -1.21, 3.0}) EXPECT_NEAR(m.r_hat(z), g.r_hat(z), 1e-5) << z;
  EXPECT_EQ(m.r_hat(25.0), 0.0);
  const auto r = check_spectral_conditions(m);
  ASSERT_EQ(r.flags.size(), 1u);
  EXPECT_EQ(r.flags[0], "conditions unverifiable in tails");
  EXPECT_NEAR(autocovariance(m, 0.0), 1.0, 1e-6);
  EXPECT_THROW(tabulated_model(0.1, {1.0, 2.0}), DomainError);
}

TEST(FlatBand, ParsevalMass) {
  const auto m = flat_band_model(3.0, 2.0);
  EXPECT_NEAR(autocovariance_quadrature(m, 0.0), m.autocov(0.0), 1e-12);
  EXPECT_NEAR(autocovariance_quadrature(m, 0.8), m.autocov(0.8), 1e-10);
  EXPECT_FALSE(check_spectral_conditions(m).all_satisfied());
}
