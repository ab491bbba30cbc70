#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "wavebound/constants.hpp"

using namespace wavebound;

namespace {

constexpr double pi = std::numbers::pi;

const WaveletPair& meyer_pair() {
  static const WaveletPair w = make_meyer();
  return w;
}

const BoundConstants& ledger() {
  static const BoundConstants b = assemble(meyer_pair(), gaussian_model(1.0), 1.0, 1.0, 0.75, 1.0 / 3.0);
  return b;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// Brute-force sum_{k=1}^n k^{-s} plus the plain integral remainder.
double long_zeta(double s, long n = 10'000'000) {
  double sum = 0.0;
  for (long k = n; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);
  return sum + std::pow(static_cast<double>(n) + 0.5, 1.0 - s) / (s - 1.0);
}

}  // namespace

TEST(WaveletIntegrals, BoundednessAndSupportInequalities) {
  const auto c = compute_wavelet_integrals(meyer_pair(), 1.0, 0.75);
  // c2 <= (sup |psi_hat|)^beta c0 since |psi_hat| <= sup.
  EXPECT_LE(c.c2, std::pow(meyer_pair().sup_psi_hat, 0.75) * c.c0);
  // ln(1+|v|) >= ln(1 + 2pi/3) on the support of psi_hat.
  EXPECT_GE(c.c3, std::log1p(2 * pi / 3) * c.c2);
  EXPECT_GE(c.c1, std::log1p(2 * pi / 3) * c.c0);
  for (double v : {c.c0, c.c1, c.c2, c.c3, c.cphi0, c.cphi1, c.cphi2, c.cphi3}) EXPECT_GT(v, 0.0);
  EXPECT_THROW(compute_wavelet_integrals(meyer_pair(), 1.0, 0.5), DomainError);
  EXPECT_THROW(compute_wavelet_integrals(meyer_pair(), 1.0, 1.0), DomainError);
}

TEST(WaveletIntegrals, PhiL1HasClosedFormPlateau) {
  // int |phi_hat| = 4pi/3 (plateau) + 2 int over the taper, which by the
  // antisymmetry nu(x) + nu(1-x) = 1 is worth half the taper width.
  const auto c = compute_wavelet_integrals(meyer_pair(), 1.0, 0.75);
  EXPECT_GT(c.cphi2, 4 * pi / 3);
  EXPECT_LT(c.cphi2, 8 * pi / 3);
}

TEST(SpectralConstants, GaussianClosedForms) {
  const auto& w = meyer_pair();
  const auto s = compute_spectral_constants(w, gaussian_model(1.0), 1.0);
  const double cpp2 = w.c_psi_dprime * w.c_psi_dprime;
  const double rp = std::sqrt(pi);
  // int |R_hat'| z^4 = 64 sqrt(pi), int |R_hat| |z|^3 = 16 sqrt(pi), int |R_hat| z^4 = 24 pi.
  EXPECT_NEAR(s.A_psi, cpp2 / (2 * pi) * (64 * rp + 32 * rp), 1e-9 * s.A_psi);
  EXPECT_NEAR(s.A1_psi, cpp2 / (2 * pi) * 24 * pi, 1e-9 * s.A1_psi);
  EXPECT_NEAR(s.A_phi, (w.c_phi * w.c_phi * 2 * rp + 2 * w.c_phi * w.c_phi_prime * 2 * pi) / (2 * pi), 1e-9);
  EXPECT_NEAR(s.A1_phi, 1.0, 1e-10);
  for (double v : {s.A_psi, s.A1_psi, s.A_phi, s.A1_phi, s.B1_psi, s.B1_phi}) {
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GT(v, 0.0);
  }
}

TEST(SpectralConstants, LinearInDensityAndAffineInT) {
  const auto& w = meyer_pair();
  const auto m = gaussian_model(1.0);
  const auto s1 = compute_spectral_constants(w, m, 1.0);
  const auto s4 = compute_spectral_constants(w, m.scaled(4.0), 1.0);
  EXPECT_NEAR(s4.A_psi / s1.A_psi, 4.0, 1e-12);
  EXPECT_NEAR(s4.A1_psi / s1.A1_psi, 4.0, 1e-12);
  EXPECT_NEAR(s4.A_phi / s1.A_phi, 4.0, 1e-12);
  EXPECT_NEAR(s4.A1_phi / s1.A1_phi, 4.0, 1e-12);
  EXPECT_EQ(s4.B1_psi, s1.B1_psi);
  EXPECT_EQ(s4.B1_phi, s1.B1_phi);

  const auto s2 = compute_spectral_constants(w, m, 2.0);
  const auto c = compute_wavelet_integrals(w, 1.0, 0.75);
  EXPECT_NEAR(s2.B1_psi - s1.B1_psi, 1.0 * c.c2 / (2 * pi), 1e-12);
  EXPECT_NEAR(s2.B1_phi - s1.B1_phi, 1.0 * c.cphi2 / (2 * pi), 1e-12);
}

TEST(CAlpha, UnitIntervalAlphaOne) {
  // Objective h ln(e + 1/h) increases in h, so the sup sits at h = T.
  EXPECT_NEAR(compute_c_alpha(1.0, 1.0), std::log(std::numbers::e + 1.0), 1e-12);
  EXPECT_NEAR(compute_c_alpha(1.0, 1.0), 1.313262, 1e-6);
  for (int i = 1; i <= 1000; ++i) {
    const double h = i / 1000.0;
    EXPECT_GT(std::log(std::numbers::e + 1.0 / h) - 1.0 / (std::numbers::e * h + 1.0), 0.0);
  }
}

TEST(CAlpha, VanishesWithInterval) {
  double prev = compute_c_alpha(1.0, 1.0);
  for (double T : {1e-2, 1e-4, 1e-8}) {
    const double c = compute_c_alpha(T, 1.0);
    EXPECT_LT(c, prev);
    EXPECT_LE(c, T * std::log(std::exp(1.0) + 1.0 / T) * (1 + 1e-12));
    prev = c;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(CAlpha, DominatesGrid) {
  for (double T : {0.5, 1.0, 3.0, 10.0})
    for (double alpha : {0.75, 1.0, 2.0, 4.0}) {
      const double c = compute_c_alpha(T, alpha);
      for (int i = 1; i <= 10000; ++i) {
        const double h = T * i / 10000.0;
        ASSERT_LE(h, c / std::pow(std::log(std::exp(alpha) + 1.0 / h), alpha) * (1 + 1e-12))
            << "T=" << T << " alpha=" << alpha << " h=" << h;
      }
    }
}

TEST(Q1, SymmetricCDelta) {
  EXPECT_NEAR(c_delta(0.5), 0.5, 1e-15);
  EXPECT_THROW(c_delta(0.0), DomainError);
}

TEST(Q1, AgreesWithLongSummation) {
  const double beta = 0.75;
  const double d = 1.0 / 3.0;
  const double half = 0.5 * long_zeta(0.5 + beta);
  const double oracle = half * half + std::pow(c_delta(d), beta) * long_zeta(1.0 + d * beta) * long_zeta((2.0 - d) * beta);
  EXPECT_LT(rel(compute_Q1(beta, d), oracle), 1e-9);
}

TEST(Q1, RejectsDivergentBoundary) {
  const double beta = 0.75;
  const double hi = 2.0 - 1.0 / beta;
  EXPECT_THROW(compute_Q1(beta, hi), DomainError);
  EXPECT_THROW(compute_Q1(beta, hi + 0.01), DomainError);
  EXPECT_THROW(compute_Q1(beta, 0.0), DomainError);
  EXPECT_THROW(compute_Q1(1.0, 0.5), DomainError);
  EXPECT_NO_THROW(compute_Q1(beta, hi - 0.01));
}

TEST(Validation, ParameterRanges) {
  EXPECT_THROW(validate_alpha(0.5), DomainError);
  EXPECT_NO_THROW(validate_alpha(0.51));
  EXPECT_THROW(validate_beta(0.5), DomainError);
  EXPECT_THROW(validate_beta(1.0), DomainError);
  EXPECT_THROW(validate_T(0.0), DomainError);
  EXPECT_NEAR(default_delta_q(0.75), 1.0 / 3.0, 1e-15);
}

TEST(Assemble, LedgerIsFiniteAndConsistent) {
  const auto& b = ledger();
  for (const auto& [name, v] : ledger_entries(b)) {
    EXPECT_TRUE(std::isfinite(v)) << name;
    EXPECT_GE(v, 0.0) << name;
  }
  EXPECT_EQ(b.sigma_c, b.B0 + b.B1 + b.B2);
  EXPECT_EQ(ledger_entries(b).size(), 34u);
  EXPECT_NEAR(b.c_alpha, std::log(std::numbers::e + 1.0), 1e-12);
}

TEST(Assemble, CompositesMatchIndependentRecomputation) {
  // Re-evaluates every composite formula from the component fields with
  // std::riemann_zeta and a closed-form geometric series.
  const auto& b = ledger();
  const auto& w = meyer_pair();
  const double a = b.alpha, be = b.beta;
  const double l5 = std::log(5.0);
  const double Kr = (std::pow(2.0, 3 + a - be) * std::pow(pi, be) * std::pow(w.c_psi_prime, be) * (l5 * b.c0 + b.c1) +
                     pi * b.T * std::pow(2.0, a - 1) * (l5 * b.c2 + b.c3) + b.c_alpha * b.c2) /
                    pi;
  EXPECT_LT(rel(b.K, Kr), 1e-14);
  const double Kp = (std::pow(2.0, 3 + a - be) * std::pow(pi, be) * std::pow(w.c_phi_prime, be) *
                         (l5 * b.cphi0 + b.cphi1) +
                     pi * b.T * std::pow(2.0, a - 1) * (l5 * b.cphi2 + b.cphi3) + b.c_alpha * b.cphi2) /
                    pi;
  EXPECT_LT(rel(b.K_phi, Kp), 1e-14);
  const double z = std::riemann_zeta(1.5);
  const double w23 = l5 * b.c2 + b.c3;
  const double q = 2.0 * b.A_psi * b.K * w23 / pi * std::riemann_zeta(1 + be);
  const double q1 = b.A1_psi * b.K * b.K / 2 * std::riemann_zeta(2 * be);
  const double q2 = 4.0 * b.A1_psi / (pi * pi) * w23 * w23;
  const double qp = b.A1_phi * b.K_phi * b.K_phi / 2 * std::riemann_zeta(2 * be);
  EXPECT_LT(rel(b.q, q), 1e-9);
  EXPECT_LT(rel(b.q1, q1), 1e-9);
  EXPECT_LT(rel(b.q2, q2), 1e-12);
  EXPECT_LT(rel(b.q_phi1, qp), 1e-9);
  // sum (j+1) r^j = 1/(1-r)^2 at alpha = 1
  const double G = 1.0 / std::pow(1.0 - 1.0 / std::sqrt(2.0), 2);
  EXPECT_LT(rel(b.G_alpha, G), 1e-9);
  const double B0 = std::sqrt(q1 + b.A_psi * b.Q1 * b.K * b.K) * G;
  const double B1 = std::sqrt(q + q1 + q2 + b.A_psi * b.Q1 * b.K * b.K) * G;
  const double B2 = std::sqrt(qp + b.A_phi * b.K_phi * b.K_phi * b.Q1);
  EXPECT_LT(rel(b.B0, B0), 1e-9);
  EXPECT_LT(rel(b.B1, B1), 1e-9);
  EXPECT_LT(rel(b.B2, B2), 1e-9);
  EXPECT_LT(rel(b.A, b.B1_psi * std::sqrt(6 * b.A_psi * z + 4 * b.A1_psi)), 1e-10);
  EXPECT_LT(rel(b.B, b.B1_phi * std::sqrt(6 * b.A_phi * z + 4 * b.A1_phi)), 1e-10);
  const double C = (2 + std::sqrt(2.0)) *
                   std::sqrt(3 * b.A_psi * b.B1_psi * b.B1_psi * z * z +
                             (b.A1_psi * b.B1_psi * b.B1_psi + b.c2 * b.A_psi * b.B1_psi / pi) * pi * pi / 6 +
                             b.c2 * b.c2 * b.A1_psi / (32 * pi * pi));
  EXPECT_LT(rel(b.C, C), 1e-10);
}

TEST(Assemble, FrozenReferenceValues) {
  const auto& b = ledger();
  EXPECT_LT(rel(b.A, 143.3275), 1e-5);
  EXPECT_LT(rel(b.B, 10.0878), 1e-5);
  EXPECT_LT(rel(b.C, 561.389), 1e-5);
  EXPECT_LT(rel(b.sigma_c, 506356.66), 1e-6);
}

TEST(Assemble, StableUnderResolutionDoubling) {
  ConstantsOptions opt;
  const auto twice = assemble(meyer_pair(), gaussian_model(1.0), 1.0, 1.0, 0.75, 1.0 / 3.0, opt.doubled());
  const auto a = ledger_entries(ledger());
  const auto d = ledger_entries(twice);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LT(rel(a[i].second, d[i].second), 1e-6) << a[i].first;
}

TEST(Assemble, HomogeneousInDensity) {
  for (double lambda : {0.25, 4.0}) {
    const auto s = assemble(meyer_pair(), gaussian_model(1.0).scaled(lambda), 1.0, 1.0, 0.75, 1.0 / 3.0);
    const double r = std::sqrt(lambda);
    EXPECT_LT(rel(s.A, r * ledger().A), 1e-8);
    EXPECT_LT(rel(s.B, r * ledger().B), 1e-8);
    EXPECT_LT(rel(s.C, r * ledger().C), 1e-8);
  }
}

TEST(Assemble, LiteralBOnlyChangesB) {
  ConstantsOptions opt;
  opt.literal_B = true;
  const auto lit = assemble(meyer_pair(), gaussian_model(1.0), 1.0, 1.0, 0.75, 1.0 / 3.0, opt);
  EXPECT_TRUE(lit.literal_B);
  EXPECT_NE(lit.B, ledger().B);
  EXPECT_EQ(lit.A, ledger().A);
  EXPECT_EQ(lit.C, ledger().C);
  EXPECT_EQ(lit.sigma_c, ledger().sigma_c);
  const auto& b = lit;
  EXPECT_LT(rel(lit.B, std::sqrt(6 * b.A_phi * b.B1_phi * b.B1_phi * std::riemann_zeta(1.5) +
                                 4 * b.A1_psi * b.B1_psi * b.B1_psi)),
            1e-10);
}

TEST(Assemble, RejectsInadmissibleInputs) {
  EXPECT_THROW(assemble(meyer_pair(), exponential_model(1.0), 1.0, 1.0, 0.75, 1.0 / 3.0), ConditionError);
  EXPECT_THROW(assemble(meyer_pair(), gaussian_model(1.0), 1.0, 1.0, 0.75, 0.7), DomainError);
  EXPECT_THROW(assemble(meyer_pair(), gaussian_model(1.0), 1.0, 0.4, 0.75, 1.0 / 3.0), DomainError);
  EXPECT_THROW(assemble(meyer_pair(), gaussian_model(1.0), -1.0, 1.0, 0.75, 1.0 / 3.0), DomainError);
}
