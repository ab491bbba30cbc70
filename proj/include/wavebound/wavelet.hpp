#pragma once

// Fourier-domain wavelet pairs, time-domain basis evaluation by quadrature
// and the wavelet-side admissibility checks.
//
// Fourier convention: g_hat(y) = int e^{-iyx} g(x) dx, inverse with 1/(2 pi).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "wavebound/condition_report.hpp"
#include "wavebound/error.hpp"
#include "wavebound/quadrature.hpp"

namespace wavebound {

using cplx = std::complex<double>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  [[nodiscard]] bool contains(double x) const { return x >= lo && x <= hi; }
  [[nodiscard]] double width() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

enum class BasisKind { scaling, mother };

struct WaveletPair {
  std::string family;

  std::function<double(double)> phi_hat;
  std::function<double(double)> phi_hat_d1;
  std::function<cplx(double)> psi_hat;
  std::function<cplx(double)> psi_hat_d1;
  std::function<cplx(double)> psi_hat_d2;

  // Evaluators return exactly zero outside these intervals.
  std::vector<Interval> support_phi;
  std::vector<Interval> support_psi;
  // Points inside the supports where the piecewise formulas join.
  std::vector<double> phi_breaks;
  std::vector<double> psi_breaks;
  // psi is symmetric about this point; only used to size quadrature panels.
  double psi_center = 0.0;

  double c_phi = 0.0;         // sup |phi_hat|
  double c_phi_prime = 0.0;   // sup |phi_hat'|
  double c_psi_prime = 0.0;   // sup |psi_hat'|
  double c_psi_dprime = 0.0;  // sup |psi_hat''|
  double sup_psi_hat = 0.0;   // sup |psi_hat|
};

struct BasisIndex {
  BasisKind kind = BasisKind::scaling;
  int j = 0;
  std::int64_t k = 0;

  friend auto operator<=>(const BasisIndex&, const BasisIndex&) = default;
};

namespace detail {

// Break lists (one per support interval) after scaling the frequency axis.
inline std::vector<std::vector<double>> scaled_breaks(const std::vector<Interval>& support,
                                                      const std::vector<double>& interior, double scale) {
  std::vector<std::vector<double>> out;
  for (const auto& iv : support) {
    std::vector<double> b{iv.lo * scale, iv.hi * scale};
    for (double x : interior)
      if (x > iv.lo && x < iv.hi) b.push_back(x * scale);
    std::sort(b.begin(), b.end());
    out.push_back(std::move(b));
  }
  return out;
}

// Sup of f over the intervals: dense scan, then golden-section refinement of
// every grid-local maximum within 10% of the best grid value.
template <class F>
double grid_sup(const F& f, const std::vector<Interval>& ivs, int points = 4096) {
  double best = 0.0;
  for (const auto& iv : ivs) {
    if (!(iv.hi > iv.lo)) continue;
    const double h = iv.width() / points;
    std::vector<double> v(static_cast<std::size_t>(points) + 1);
    for (int i = 0; i <= points; ++i) v[static_cast<std::size_t>(i)] = f(iv.lo + i * h);
    const double grid_best = *std::max_element(v.begin(), v.end());
    best = std::max(best, grid_best);
    for (int i = 0; i <= points; ++i) {
      const double vi = v[static_cast<std::size_t>(i)];
      const bool left_ok = i == 0 || vi >= v[static_cast<std::size_t>(i - 1)];
      const bool right_ok = i == points || vi >= v[static_cast<std::size_t>(i + 1)];
      if (!(left_ok && right_ok) || vi < 0.9 * grid_best) continue;
      double a = std::max(iv.lo, iv.lo + (i - 1) * h);
      double b = std::min(iv.hi, iv.lo + (i + 1) * h);
      const double g = (std::sqrt(5.0) - 1.0) / 2.0;
      double x1 = b - g * (b - a);
      double x2 = a + g * (b - a);
      double f1 = f(x1);
      double f2 = f(x2);
      for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
        if (f1 < f2) {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + g * (b - a);
          f2 = f(x2);
        } else {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - g * (b - a);
          f1 = f(x1);
        }
      }
      best = std::max({best, f1, f2});
    }
  }
  return best;
}

}  // namespace detail

namespace meyer {

// Degree-7 taper: nu(0)=0, nu(1)=1, nu(x)+nu(1-x)=1, first three
// derivatives vanish at both ends.
inline double taper(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double x2 = x * x;
  return x2 * x2 * (35.0 - 84.0 * x + 70.0 * x2 - 20.0 * x2 * x);
}

inline double taper_d1(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double u = x * (1.0 - x);
  return 140.0 * u * u * u;
}

inline double taper_d2(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double u = x * (1.0 - x);
  return 420.0 * u * u * (1.0 - 2.0 * x);
}

inline constexpr double two_pi_3 = 2.0 * std::numbers::pi / 3.0;
inline constexpr double four_pi_3 = 4.0 * std::numbers::pi / 3.0;
inline constexpr double eight_pi_3 = 8.0 * std::numbers::pi / 3.0;
inline constexpr double half_pi = std::numbers::pi / 2.0;

inline double phi_hat(double y) {
  const double a = std::abs(y);
  if (a <= two_pi_3) return 1.0;
  if (a >= four_pi_3) return 0.0;
  // cos(pi/2 nu(x)) = sin(pi/2 nu(1-x)) keeps relative accuracy near the outer edge.
  return std::sin(half_pi * taper(2.0 - 3.0 * a / (2.0 * std::numbers::pi)));
}

inline double phi_hat_d1(double y) {
  const double a = std::abs(y);
  if (a <= two_pi_3 || a >= four_pi_3) return 0.0;
  const double x = 3.0 * a / (2.0 * std::numbers::pi) - 1.0;
  const double d = -std::sin(half_pi * taper(x)) * half_pi * taper_d1(x) * (3.0 / (2.0 * std::numbers::pi));
  return y < 0.0 ? -d : d;
}

// Modulus of psi_hat and its derivatives for y >= 0.
struct Modulus {
  double a = 0.0, d1 = 0.0, d2 = 0.0;
};

inline Modulus psi_modulus_pos(double y) {
  Modulus m;
  if (y <= two_pi_3 || y >= eight_pi_3) return m;
  if (y <= four_pi_3) {
    const double s = 3.0 / (2.0 * std::numbers::pi);
    const double x = s * y - 1.0;
    const double sn = std::sin(half_pi * taper(x));
    const double cs = std::sin(half_pi * taper(1.0 - x));
    const double th1 = half_pi * taper_d1(x);
    const double th2 = half_pi * taper_d2(x);
    m.a = sn;
    m.d1 = cs * th1 * s;
    m.d2 = (-sn * th1 * th1 + cs * th2) * s * s;
  } else {
    const double s = 3.0 / (4.0 * std::numbers::pi);
    const double x = s * y - 1.0;
    const double sn = std::sin(half_pi * taper(x));
    const double cs = std::sin(half_pi * taper(1.0 - x));
    const double th1 = half_pi * taper_d1(x);
    const double th2 = half_pi * taper_d2(x);
    m.a = cs;
    m.d1 = -sn * th1 * s;
    m.d2 = (-cs * th1 * th1 - sn * th2) * s * s;
  }
  return m;
}

inline Modulus psi_modulus(double y) {
  Modulus m = psi_modulus_pos(std::abs(y));
  if (y < 0.0) m.d1 = -m.d1;
  return m;
}

// psi_hat(y) = e^{-iy/2} a(y) with a the even, nonnegative modulus.
inline cplx psi_hat(double y) {
  const Modulus m = psi_modulus(y);
  if (m.a == 0.0) return {0.0, 0.0};
  return std::polar(1.0, -0.5 * y) * m.a;
}

inline cplx psi_hat_d1(double y) {
  const Modulus m = psi_modulus(y);
  if (m.a == 0.0 && m.d1 == 0.0) return {0.0, 0.0};
  return std::polar(1.0, -0.5 * y) * cplx(m.d1, -0.5 * m.a);
}

inline cplx psi_hat_d2(double y) {
  const Modulus m = psi_modulus(y);
  if (m.a == 0.0 && m.d1 == 0.0 && m.d2 == 0.0) return {0.0, 0.0};
  return std::polar(1.0, -0.5 * y) * cplx(m.d2 - 0.25 * m.a, -m.d1);
}

// 2 pi periodic low-pass filter with phi_hat(2 xi) = m0(xi) phi_hat(xi).
inline double m0(double xi) {
  const double r = std::remainder(xi, 2.0 * std::numbers::pi);
  double s = 0.0;
  for (int k = -1; k <= 1; ++k) s += phi_hat(2.0 * (r + 2.0 * std::numbers::pi * k));
  return s;
}

}  // namespace meyer

inline WaveletPair make_meyer() {
  using namespace meyer;
  WaveletPair w;
  w.family = "meyer";
  w.phi_hat = meyer::phi_hat;
  w.phi_hat_d1 = meyer::phi_hat_d1;
  w.psi_hat = meyer::psi_hat;
  w.psi_hat_d1 = meyer::psi_hat_d1;
  w.psi_hat_d2 = meyer::psi_hat_d2;
  w.support_phi = {{-four_pi_3, four_pi_3}};
  w.support_psi = {{-eight_pi_3, -two_pi_3}, {two_pi_3, eight_pi_3}};
  w.phi_breaks = {-two_pi_3, two_pi_3};
  w.psi_breaks = {-four_pi_3, four_pi_3};
  w.psi_center = 0.5;

  const std::vector<Interval> phi_pieces{{two_pi_3, four_pi_3}};
  const std::vector<Interval> psi_pieces{{two_pi_3, four_pi_3}, {four_pi_3, eight_pi_3}};
  w.c_phi = 1.0;
  w.c_phi_prime = detail::grid_sup([](double y) { return std::abs(meyer::phi_hat_d1(y)); }, phi_pieces);
  w.c_psi_prime = detail::grid_sup([](double y) { return std::abs(meyer::psi_hat_d1(y)); }, psi_pieces);
  w.c_psi_dprime = detail::grid_sup([](double y) { return std::abs(meyer::psi_hat_d2(y)); }, psi_pieces);
  w.sup_psi_hat = 1.0;
  return w;
}

/// Fourier transform of the scaled, shifted basis function
/// g_jk(x) = 2^{j/2} g(2^j x - k):  2^{-j/2} e^{-ikz/2^j} g_hat(z/2^j).
inline cplx basis_hat(const WaveletPair& w, const BasisIndex& idx, double z) {
  const double s = std::ldexp(1.0, idx.j);
  const double u = z / s;
  const cplx g = idx.kind == BasisKind::scaling ? cplx(w.phi_hat(u), 0.0) : w.psi_hat(u);
  if (g == cplx(0.0, 0.0)) return g;
  return std::polar(1.0 / std::sqrt(s), -static_cast<double>(idx.k) * u) * g;
}

inline void validate_index(const BasisIndex& idx) {
  if (idx.j < 0) throw DomainError("basis level j must be >= 0, got " + std::to_string(idx.j));
  if (idx.kind == BasisKind::scaling && idx.j != 0) {
    throw DomainError("scaling functions appear only at level 0, got j=" + std::to_string(idx.j));
  }
}

/// Frequency break lists of g_hat_jk (support scaled by 2^j).
inline std::vector<std::vector<double>> basis_breaks(const WaveletPair& w, const BasisIndex& idx) {
  const double s = std::ldexp(1.0, idx.j);
  return idx.kind == BasisKind::scaling ? detail::scaled_breaks(w.support_phi, w.phi_breaks, s)
                                        : detail::scaled_breaks(w.support_psi, w.psi_breaks, s);
}

// Linear phase rate of g_hat_jk(z), used for panel sizing.
inline double basis_phase_rate(const WaveletPair& w, const BasisIndex& idx) {
  const double s = std::ldexp(1.0, idx.j);
  return (static_cast<double>(idx.k) + (idx.kind == BasisKind::mother ? w.psi_center : 0.0)) / s;
}

/// Time-domain value g_jk(t) = (1/2pi) int e^{itz} g_hat_jk(z) dz.
inline double eval_basis(const WaveletPair& w, BasisKind kind, int j, std::int64_t k, double t,
                         const QuadratureOptions& quad = {}) {
  const BasisIndex idx{kind, j, k};
  validate_index(idx);
  const double rate = std::abs(t - basis_phase_rate(w, idx));
  QuadratureOptions q = quad;
  q.max_panel_width = 2.0 * std::numbers::pi / (rate + 1.0);
  cplx total{0.0, 0.0};
  for (const auto& br : basis_breaks(w, idx)) {
    auto f = [&](double z) { return std::polar(1.0, t * z) * basis_hat(w, idx, z); };
    total += require_converged(integrate(f, std::span<const double>(br), q), "eval_basis").value;
  }
  total /= 2.0 * std::numbers::pi;
  if (std::abs(total.imag()) >= 1e-9) {
    throw QuadratureError("eval_basis: imaginary residue " + std::to_string(total.imag()) + " exceeds 1e-9");
  }
  return total.real();
}

/// (1/2pi) int weight(z) conj(g1_hat(z)) g2_hat(z) dz over the common support.
template <class Weight>
cplx weighted_inner_product(const WaveletPair& w, const BasisIndex& a, const BasisIndex& b, const Weight& weight,
                            const QuadratureOptions& quad = {}) {
  validate_index(a);
  validate_index(b);
  const auto ba = basis_breaks(w, a);
  const auto bb = basis_breaks(w, b);
  const double rate = std::abs(basis_phase_rate(w, a) - basis_phase_rate(w, b));
  QuadratureOptions q = quad;
  q.max_panel_width = 2.0 * std::numbers::pi / (rate + 1.0);
  cplx total{0.0, 0.0};
  for (const auto& x : ba) {
    for (const auto& y : bb) {
      const double lo = std::max(x.front(), y.front());
      const double hi = std::min(x.back(), y.back());
      if (!(hi > lo)) continue;
      std::vector<double> br{lo, hi};
      for (double p : x)
        if (p > lo && p < hi) br.push_back(p);
      for (double p : y)
        if (p > lo && p < hi) br.push_back(p);
      std::sort(br.begin(), br.end());
      br.erase(std::unique(br.begin(), br.end()), br.end());
      auto f = [&](double z) { return weight(z) * std::conj(basis_hat(w, a, z)) * basis_hat(w, b, z); };
      total += require_converged(integrate(f, std::span<const double>(br), q), "inner product").value;
    }
  }
  return total / (2.0 * std::numbers::pi);
}

struct GramMatrix {
  std::vector<BasisIndex> indices;
  Eigen::MatrixXd values;
};

/// L2 inner products of phi_0k (|k| <= K) and psi_jk (0 <= j <= J, |k| <= K),
/// computed in the Fourier domain.
inline GramMatrix gram_matrix(const WaveletPair& w, int J, int K, const QuadratureOptions& quad = {}) {
  if (J < 0 || K < 0) throw DomainError("gram_matrix: J and K must be >= 0");
  GramMatrix g;
  for (int k = -K; k <= K; ++k) g.indices.push_back({BasisKind::scaling, 0, k});
  for (int j = 0; j <= J; ++j)
    for (int k = -K; k <= K; ++k) g.indices.push_back({BasisKind::mother, j, k});
  const auto n = static_cast<Eigen::Index>(g.indices.size());
  g.values.setZero(n, n);
  auto one = [](double) { return 1.0; };
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = r; c < n; ++c) {
      const double v = weighted_inner_product(w, g.indices[static_cast<std::size_t>(r)],
                                              g.indices[static_cast<std::size_t>(c)], one, quad)
                           .real();
      g.values(r, c) = v;
      g.values(c, r) = v;
    }
  }
  return g;
}

/// max over y in [-pi, pi] of |sum_{|k|<=2} |phi_hat(y + 2 pi k)|^2 - 1|.
inline double partition_of_unity_defect(const WaveletPair& w, int points = 1000) {
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double y = -std::numbers::pi + 2.0 * std::numbers::pi * i / (points - 1);
    double s = 0.0;
    for (int k = -2; k <= 2; ++k) {
      const double v = w.phi_hat(y + 2.0 * std::numbers::pi * k);
      s += v * v;
    }
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

struct EnvelopeCheck {
  double M = 0.0;          // envelope Phi(x) = M / (1 + x)^2
  double max_ratio = 0.0;  // max |g(x)| / Phi(|x|) on the validation grid
  double range = 0.0;
  bool validated = false;
};

/// Fits the decreasing majorant Phi(x) = M/(1+x)^2 of |g| (g = phi or psi),
/// with M a grid sup of |g(x)|(1+|x|)^2 inflated by 1%, then validates it on
/// a grid twice as dense and offset by a quarter step.
inline EnvelopeCheck assumption_s_envelope(const WaveletPair& w, BasisKind kind, double range = 32.0,
                                           double step = 0.125, const QuadratureOptions& quad = {}) {
  EnvelopeCheck e;
  e.range = range;
  auto weighted = [&](double x) {
    const double g = eval_basis(w, kind, 0, 0, x, quad);
    return std::abs(g) * (1.0 + std::abs(x)) * (1.0 + std::abs(x));
  };
  const int n = static_cast<int>(std::ceil(range / step));
  double fit = 0.0;
  for (int i = -n; i <= n; ++i) fit = std::max(fit, weighted(i * step));
  e.M = 1.01 * fit;
  double worst = 0.0;
  const double h = step / 2.0;
  for (int i = -2 * n; i < 2 * n; ++i) worst = std::max(worst, weighted(i * h + h / 2.0) / e.M);
  e.max_ratio = worst;
  e.validated = worst <= 1.0;
  return e;
}

/// Wavelet-side conditions: smoothness and vanishing at 0, bounded
/// derivatives, decay of the transforms, the two log-weighted integrals and
/// the (1+|x|)^-2 time-domain majorant for phi and psi.
inline ConditionReport check_conditions(const WaveletPair& w, double alpha, double gamma,
                                        const QuadratureOptions& quad = {}) {
  if (!(alpha > 0.5)) throw DomainError("check_conditions: alpha must be > 1/2");
  if (!(gamma > 0.0 && gamma < 0.5)) throw DomainError("check_conditions: gamma must be in (0, 1/2)");
  ConditionReport r;
  r.subject = "wavelet:" + w.family;
  auto finite = [](double v) { return std::isfinite(v); };

  const double psi0 = std::abs(w.psi_hat(0.0));
  const double dpsi0 = std::abs(w.psi_hat_d1(0.0));
  r.add("cond1.psi_hat_at_zero", psi0 == 0.0, psi0, 0.0);
  r.add("cond1.psi_hat_d1_at_zero", dpsi0 == 0.0, dpsi0, 0.0);
  r.add("cond1.psi_hat_d2_bounded", finite(w.c_psi_dprime), w.c_psi_dprime, 0.0, "sup |psi_hat''|");

  auto integral = [&](auto f, const std::vector<Interval>& sup, const std::vector<double>& brk) {
    double total = 0.0;
    bool ok = true;
    for (const auto& br : detail::scaled_breaks(sup, brk, 1.0)) {
      const auto res = integrate(f, std::span<const double>(br), quad);
      ok = ok && res.converged;
      total += res.value;
    }
    return ok ? total : std::numeric_limits<double>::infinity();
  };

  const double phi_first_moment =
      integral([&](double y) { return std::abs(y) * std::abs(w.phi_hat(y)); }, w.support_phi, w.phi_breaks);
  r.add("cond1.phi_d1_exists", finite(phi_first_moment), phi_first_moment, quad.abs_tol,
        "int |y| |phi_hat(y)| dy");

  r.add("cond2.c_phi", finite(w.c_phi), w.c_phi, 0.0);
  r.add("cond2.c_phi_prime", finite(w.c_phi_prime), w.c_phi_prime, 0.0);
  const double psi_d1_l1 =
      integral([&](double y) { return std::abs(w.psi_hat_d1(y)); }, w.support_psi, w.psi_breaks);
  r.add("cond2.psi_hat_d1_L1", finite(psi_d1_l1), psi_d1_l1, quad.abs_tol, "int |psi_hat'|");
  r.add("cond2.c_psi_dprime", finite(w.c_psi_dprime), w.c_psi_dprime, 0.0);

  double far_phi = 0.0;
  double far_psi = 0.0;
  for (double u : {1e2, 1e3, 1e4, 1e6}) {
    far_phi = std::max({far_phi, std::abs(w.phi_hat(u)), std::abs(w.phi_hat(-u))});
    far_psi = std::max({far_psi, std::abs(w.psi_hat(u)), std::abs(w.psi_hat(-u))});
  }
  r.add("cond3.phi_hat_vanishes_at_infinity", far_phi <= 1e-12, far_phi, 1e-12, "max |phi_hat(u)|, |u| >= 100");
  r.add("cond3.psi_hat_vanishes_at_infinity", far_psi <= 1e-12, far_psi, 1e-12, "max |psi_hat(u)|, |u| >= 100");

  const double log_psi = integral(
      [&](double u) { return std::pow(std::log1p(std::abs(u)), alpha) * std::pow(std::abs(w.psi_hat(u)), gamma); },
      w.support_psi, w.psi_breaks);
  const double log_phi = integral(
      [&](double u) { return std::pow(std::log1p(std::abs(u)), alpha) * std::pow(std::abs(w.phi_hat(u)), gamma); },
      w.support_phi, w.phi_breaks);
  r.add("cond4.psi_log_integral", finite(log_psi), log_psi, quad.abs_tol, "int ln(1+|u|)^alpha |psi_hat|^gamma");
  r.add("cond4.phi_log_integral", finite(log_phi), log_phi, quad.abs_tol, "int ln(1+|u|)^alpha |phi_hat|^gamma");

  const auto env_phi = assumption_s_envelope(w, BasisKind::scaling, 32.0, 0.125, quad);
  const auto env_psi = assumption_s_envelope(w, BasisKind::mother, 32.0, 0.125, quad);
  r.add("assumption_s.phi", env_phi.validated, env_phi.M, env_phi.max_ratio,
        "Phi(x) = M/(1+x)^2; tolerance column holds the validation max ratio");
  r.add("assumption_s.psi", env_psi.validated, env_psi.M, env_psi.max_ratio,
        "Phi(x) = M/(1+x)^2; tolerance column holds the validation max ratio");
  return r;
}

}  // namespace wavebound
