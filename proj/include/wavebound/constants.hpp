#pragma once

// The constant ledger behind the uniform error bound: wavelet integrals,
// spectral constants, the composite increment constants and the final rate
// constants A, B, C together with the modulus constant sigma_c.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "wavebound/error.hpp"
#include "wavebound/quadrature.hpp"
#include "wavebound/series.hpp"
#include "wavebound/spectral.hpp"
#include "wavebound/wavelet.hpp"

namespace wavebound {

struct ConstantsOptions {
  QuadratureOptions quad;
  SeriesOptions series;
  // Evaluate B with A1_psi (B1_psi)^2 in place of A1_phi (B1_phi)^2, as the
  // closed-form display of B literally reads.
  bool literal_B = false;
  // Run the wavelet and spectral condition checks before assembling.
  bool check_conditions = true;

  [[nodiscard]] ConstantsOptions doubled() const {
    ConstantsOptions o = *this;
    o.quad = quad.doubled();
    o.series = series.doubled();
    return o;
  }
};

inline void validate_alpha(double alpha) {
  if (!(alpha > 0.5) || !std::isfinite(alpha)) {
    throw DomainError("alpha must satisfy alpha > 1/2, got " + std::to_string(alpha));
  }
}

inline void validate_beta(double beta) {
  if (!(beta > 0.5 && beta < 1.0)) throw DomainError("beta must lie in (1/2, 1), got " + std::to_string(beta));
}

inline void validate_delta_q(double beta, double delta_q) {
  validate_beta(beta);
  const double hi = 2.0 - 1.0 / beta;
  if (!(delta_q > 0.0 && delta_q < hi)) {
    throw DomainError("delta_q must lie in (0, 2 - 1/beta) = (0, " + std::to_string(hi) + "), got " +
                      std::to_string(delta_q));
  }
}

inline void validate_T(double T) {
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("T must be > 0, got " + std::to_string(T));
}

inline double default_delta_q(double beta) { return 0.5 * (2.0 - 1.0 / beta); }

struct WaveletIntegrals {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;
  double cphi0 = 0.0, cphi1 = 0.0, cphi2 = 0.0, cphi3 = 0.0;
};

/// int |g_hat|^{1-beta}, int ln(1+|v|)^alpha |g_hat|^{1-beta}, int |g_hat| and
/// int ln(1+|v|)^alpha |g_hat| for g = psi (c0..c3) and g = phi (cphi0..cphi3).
inline WaveletIntegrals compute_wavelet_integrals(const WaveletPair& w, double alpha, double beta,
                                                  const QuadratureOptions& quad = {}) {
  validate_beta(beta);
  if (!(alpha >= 0.0)) throw DomainError("compute_wavelet_integrals: alpha must be >= 0");
  auto over = [&](const std::vector<Interval>& sup, const std::vector<double>& brk, auto&& modulus, double power,
                  bool log_weight) {
    double total = 0.0;
    for (const auto& br : detail::scaled_breaks(sup, brk, 1.0)) {
      auto f = [&](double v) {
        const double g = std::pow(modulus(v), power);
        return log_weight ? std::pow(std::log1p(std::abs(v)), alpha) * g : g;
      };
      total += require_converged(integrate(f, std::span<const double>(br), quad), "wavelet integral").value;
    }
    return total;
  };
  auto psi = [&](double v) { return std::abs(w.psi_hat(v)); };
  auto phi = [&](double v) { return std::abs(w.phi_hat(v)); };
  WaveletIntegrals c;
  c.c0 = over(w.support_psi, w.psi_breaks, psi, 1.0 - beta, false);
  c.c1 = over(w.support_psi, w.psi_breaks, psi, 1.0 - beta, true);
  c.c2 = over(w.support_psi, w.psi_breaks, psi, 1.0, false);
  c.c3 = over(w.support_psi, w.psi_breaks, psi, 1.0, true);
  c.cphi0 = over(w.support_phi, w.phi_breaks, phi, 1.0 - beta, false);
  c.cphi1 = over(w.support_phi, w.phi_breaks, phi, 1.0 - beta, true);
  c.cphi2 = over(w.support_phi, w.phi_breaks, phi, 1.0, false);
  c.cphi3 = over(w.support_phi, w.phi_breaks, phi, 1.0, true);
  return c;
}

struct SpectralConstants {
  double A_psi = 0.0, A1_psi = 0.0, A_phi = 0.0, A1_phi = 0.0;
  double B1_psi = 0.0, B1_phi = 0.0;
  // Defining moments: int |R_hat|, int |R_hat'|, int |R_hat||z|^3,
  // int |R_hat| z^4, int |R_hat'| z^4.
  double m0 = 0.0, m0_d1 = 0.0, m3 = 0.0, m4 = 0.0, m4_d1 = 0.0;
  // int |psi_hat'|, int |psi_hat|, int |phi_hat'|, int |phi_hat|.
  double psi_d1_l1 = 0.0, psi_l1 = 0.0, phi_d1_l1 = 0.0, phi_l1 = 0.0;
};

inline SpectralConstants compute_spectral_constants(const WaveletPair& w, const SpectralModel& model, double T,
                                                    const QuadratureOptions& quad = {}) {
  validate_T(T);
  auto moment = [&](int p, double m) {
    const auto r = spectral_moment(model, p, m, quad);
    if (!r.finite) {
      throw ConditionError("spectral moment int |R_hat^(" + std::to_string(p) + ")| |z|^" + std::to_string(m) +
                           " is infinite");
    }
    return r.value;
  };
  auto l1 = [&](const std::vector<Interval>& sup, const std::vector<double>& brk, auto&& f) {
    double total = 0.0;
    for (const auto& br : detail::scaled_breaks(sup, brk, 1.0))
      total += require_converged(integrate(f, std::span<const double>(br), quad), "wavelet L1 norm").value;
    return total;
  };
  SpectralConstants s;
  s.m0 = moment(0, 0.0);
  s.m0_d1 = moment(1, 0.0);
  s.m3 = moment(0, 3.0);
  s.m4 = moment(0, 4.0);
  s.m4_d1 = moment(1, 4.0);
  s.psi_d1_l1 = l1(w.support_psi, w.psi_breaks, [&](double y) { return std::abs(w.psi_hat_d1(y)); });
  s.psi_l1 = l1(w.support_psi, w.psi_breaks, [&](double y) { return std::abs(w.psi_hat(y)); });
  s.phi_d1_l1 = l1(w.support_phi, w.phi_breaks, [&](double y) { return std::abs(w.phi_hat_d1(y)); });
  s.phi_l1 = l1(w.support_phi, w.phi_breaks, [&](double y) { return std::abs(w.phi_hat(y)); });

  const double two_pi = 2.0 * std::numbers::pi;
  const double cpp2 = w.c_psi_dprime * w.c_psi_dprime;
  s.A_psi = cpp2 / two_pi * (s.m4_d1 + 2.0 * s.m3);
  s.A1_psi = cpp2 / two_pi * s.m4;
  s.A_phi = (w.c_phi * w.c_phi * s.m0_d1 + 2.0 * w.c_phi * w.c_phi_prime * s.m0) / two_pi;
  s.A1_phi = w.c_phi * w.c_phi / two_pi * s.m0;
  s.B1_psi = (s.psi_d1_l1 + T * s.psi_l1) / two_pi;
  s.B1_phi = (s.phi_d1_l1 + T * s.phi_l1) / two_pi;
  return s;
}

/// sup over h in (0, T] of h (ln(e^alpha + 1/h))^alpha: golden-section search
/// in log h, compared against the right endpoint.
inline double compute_c_alpha(double T, double alpha) {
  validate_T(T);
  if (!(alpha > 0.0)) throw DomainError("compute_c_alpha: alpha must be > 0");
  const double ea = std::exp(alpha);
  auto obj = [&](double lh) {
    const double h = std::exp(lh);
    return h * std::pow(std::log(ea + 1.0 / h), alpha);
  };
  double a = std::log(T) - 60.0;
  double b = std::log(T);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = obj(x1);
  double f2 = obj(x2);
  while (b - a > 1e-10) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = obj(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = obj(x1);
    }
  }
  return std::max({f1, f2, obj(std::log(T))});
}

inline double c_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("c_delta: delta must lie in (0, 1)");
  return std::pow(delta, delta) * std::pow(1.0 - delta, 1.0 - delta);
}

/// (sum_k 1/(2 k^{1/2+beta}))^2 + c_delta^beta zeta(1 + delta beta) zeta((2 - delta) beta).
inline double compute_Q1(double beta, double delta_q, const SeriesOptions& series = {}) {
  validate_delta_q(beta, delta_q);
  const double half = 0.5 * zeta_series(0.5 + beta, series).value;
  return half * half + std::pow(c_delta(delta_q), beta) * zeta_series(1.0 + delta_q * beta, series).value *
                           zeta_series((2.0 - delta_q) * beta, series).value;
}

struct BoundConstants {
  double alpha = 1.0, beta = 0.75, delta_q = 1.0 / 3.0, T = 1.0;
  double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;
  double cphi0 = 0.0, cphi1 = 0.0, cphi2 = 0.0, cphi3 = 0.0;
  double c_alpha = 0.0;
  double A_psi = 0.0, A1_psi = 0.0, A_phi = 0.0, A1_phi = 0.0;
  double B1_psi = 0.0, B1_phi = 0.0;
  double K = 0.0, K_phi = 0.0, Q1 = 0.0;
  double q = 0.0, q1 = 0.0, q2 = 0.0, q_phi1 = 0.0;
  double G_alpha = 0.0;  // sum_{j>=0} (j+1)^alpha / 2^{j/2}
  double B0 = 0.0, B1 = 0.0, B2 = 0.0, sigma_c = 0.0;
  double A = 0.0, B = 0.0, C = 0.0;
  bool literal_B = false;

  friend bool operator==(const BoundConstants&, const BoundConstants&) = default;
};

/// Every numeric field by name, in a fixed order.
inline std::vector<std::pair<std::string, double*>> ledger_fields(BoundConstants& b) {
  return {{"alpha", &b.alpha},   {"beta", &b.beta},     {"delta_q", &b.delta_q}, {"T", &b.T},
          {"c0", &b.c0},         {"c1", &b.c1},         {"c2", &b.c2},           {"c3", &b.c3},
          {"cphi0", &b.cphi0},   {"cphi1", &b.cphi1},   {"cphi2", &b.cphi2},     {"cphi3", &b.cphi3},
          {"c_alpha", &b.c_alpha}, {"A_psi", &b.A_psi}, {"A1_psi", &b.A1_psi},   {"A_phi", &b.A_phi},
          {"A1_phi", &b.A1_phi}, {"B1_psi", &b.B1_psi}, {"B1_phi", &b.B1_phi},   {"K", &b.K},
          {"K_phi", &b.K_phi},   {"Q1", &b.Q1},         {"q", &b.q},             {"q1", &b.q1},
          {"q2", &b.q2},         {"q_phi1", &b.q_phi1}, {"G_alpha", &b.G_alpha}, {"B0", &b.B0},
          {"B1", &b.B1},         {"B2", &b.B2},         {"sigma_c", &b.sigma_c}, {"A", &b.A},
          {"B", &b.B},           {"C", &b.C}};
}

inline std::vector<std::pair<std::string, double>> ledger_entries(const BoundConstants& b) {
  BoundConstants copy = b;
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [name, ptr] : ledger_fields(copy)) out.emplace_back(name, *ptr);
  return out;
}

/// Composite constants from the component integrals. Kept separate from
/// assemble() so they can be recomputed from a ledger.
inline void finish_ledger(BoundConstants& b, const WaveletPair& w, const SeriesOptions& series) {
  const double pi = std::numbers::pi;
  const double a = b.alpha;
  const double be = b.beta;
  const double l5 = std::pow(std::log(5.0), a);
  b.K = (std::pow(2.0, 3.0 + a - be) * std::pow(pi, be) * std::pow(w.c_psi_prime, be) * (l5 * b.c0 + b.c1) +
         pi * b.T * std::pow(2.0, a - 1.0) * (l5 * b.c2 + b.c3) + b.c_alpha * b.c2) /
        pi;
  b.K_phi = (std::pow(2.0, 3.0 + a - be) * std::pow(pi, be) * std::pow(w.c_phi_prime, be) * (l5 * b.cphi0 + b.cphi1) +
             pi * b.T * std::pow(2.0, a - 1.0) * (l5 * b.cphi2 + b.cphi3) + b.c_alpha * b.cphi2) /
            pi;
  b.Q1 = compute_Q1(be, b.delta_q, series);
  const double z1b = zeta_series(1.0 + be, series).value;
  const double z2b = zeta_series(2.0 * be, series).value;
  const double z32 = zeta_series(1.5, series).value;
  const double z2 = zeta_series(2.0, series).value;
  const double w23 = l5 * b.c2 + b.c3;
  b.q = std::pow(2.0, a) * b.A_psi * b.K * w23 / pi * z1b;
  b.q1 = b.A1_psi * b.K * b.K / 2.0 * z2b;
  b.q2 = std::pow(2.0, 2.0 * a) * b.A1_psi / (pi * pi) * w23 * w23;
  b.q_phi1 = b.A1_phi * b.K_phi * b.K_phi / 2.0 * z2b;
  b.G_alpha = power_geometric_series(a, 1.0 / std::numbers::sqrt2, series).value;
  const double aqk = b.A_psi * b.Q1 * b.K * b.K;
  b.B0 = std::sqrt(b.q1 + aqk) * b.G_alpha;
  b.B1 = std::sqrt(b.q + b.q1 + b.q2 + aqk) * b.G_alpha;
  b.B2 = std::sqrt(b.q_phi1 + b.A_phi * b.K_phi * b.K_phi * b.Q1);
  b.sigma_c = b.B0 + b.B1 + b.B2;
  b.A = b.B1_psi * std::sqrt(6.0 * b.A_psi * z32 + 4.0 * b.A1_psi);
  if (b.literal_B) {
    b.B = std::sqrt(6.0 * b.A_phi * b.B1_phi * b.B1_phi * z32 + 4.0 * b.A1_psi * b.B1_psi * b.B1_psi);
  } else {
    b.B = b.B1_phi * std::sqrt(6.0 * b.A_phi * z32 + 4.0 * b.A1_phi);
  }
  b.C = (2.0 + std::numbers::sqrt2) *
        std::sqrt(3.0 * b.A_psi * b.B1_psi * b.B1_psi * z32 * z32 +
                  (b.A1_psi * b.B1_psi * b.B1_psi + b.c2 * b.A_psi * b.B1_psi / pi) * z2 +
                  b.c2 * b.c2 * b.A1_psi / (32.0 * pi * pi));
}

inline BoundConstants assemble(const WaveletPair& w, const SpectralModel& model, double T, double alpha, double beta,
                               double delta_q, const ConstantsOptions& opt = {}) {
  validate_T(T);
  validate_alpha(alpha);
  validate_delta_q(beta, delta_q);
  if (opt.check_conditions) {
    const auto wr = check_conditions(w, alpha, 1.0 - beta, opt.quad);
    if (!wr.all_satisfied()) {
      throw ConditionError("wavelet conditions failed: " + wr.failures().front());
    }
    const auto sr = check_spectral_conditions(model, opt.quad);
    if (!sr.all_satisfied()) {
      throw ConditionError("spectral conditions failed: " + sr.failures().front());
    }
  }
  BoundConstants b;
  b.alpha = alpha;
  b.beta = beta;
  b.delta_q = delta_q;
  b.T = T;
  b.literal_B = opt.literal_B;
  const auto wi = compute_wavelet_integrals(w, alpha, beta, opt.quad);
  b.c0 = wi.c0;
  b.c1 = wi.c1;
  b.c2 = wi.c2;
  b.c3 = wi.c3;
  b.cphi0 = wi.cphi0;
  b.cphi1 = wi.cphi1;
  b.cphi2 = wi.cphi2;
  b.cphi3 = wi.cphi3;
  b.c_alpha = compute_c_alpha(T, alpha);
  const auto sc = compute_spectral_constants(w, model, T, opt.quad);
  b.A_psi = sc.A_psi;
  b.A1_psi = sc.A1_psi;
  b.A_phi = sc.A_phi;
  b.A1_phi = sc.A1_phi;
  b.B1_psi = sc.B1_psi;
  b.B1_phi = sc.B1_phi;
  finish_ledger(b, w, opt.series);
  for (const auto& [name, v] : ledger_entries(b)) {
    if (!std::isfinite(v) || v < 0.0) throw ConditionError("ledger constant " + name + " is not finite and >= 0");
  }
  return b;
}

}  // namespace wavebound
