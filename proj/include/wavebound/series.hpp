#pragma once

// Convergent positive series that appear in the bound constants.

#include <cmath>
#include <cstdint>
#include <string>

#include "wavebound/error.hpp"

namespace wavebound {

struct SeriesOptions {
  double rel_tol = 1e-10;
  // Multiplies the number of directly summed terms; 2 doubles them.
  int term_factor = 1;

  [[nodiscard]] SeriesOptions doubled() const {
    SeriesOptions s = *this;
    s.term_factor *= 2;
    return s;
  }
};

struct SeriesResult {
  double value = 0.0;        // partial + tail
  double partial = 0.0;      // sum of the first `terms` terms
  double tail = 0.0;         // estimate of the remainder
  double error_bound = 0.0;  // bound on |value - exact|
  std::int64_t terms = 0;
};

/// Sum_{k>=1} k^{-s}, s > 1.
///
/// The first N terms are summed directly (smallest first). The remainder
/// is replaced by the midpoint-shifted integral int_{N+1/2}^inf x^{-s} dx.
/// For convex decreasing terms this overestimates the remainder by at most
/// |f'(N-1/2)|/24 = s (N-1/2)^{-s-1}/24, the reported error bound. N is the
/// smallest count for which that bound is below rel_tol (the sum is >= 1).
inline SeriesResult zeta_series(double s, const SeriesOptions& opt = {}) {
  if (!(s > 1.0) || !std::isfinite(s)) {
    throw DomainError("zeta_series: exponent must be > 1, got " + std::to_string(s));
  }
  const double need = 0.5 + std::pow(s / (24.0 * opt.rel_tol), 1.0 / (s + 1.0));
  auto n = static_cast<std::int64_t>(std::ceil(std::max(16.0, need)));
  n *= opt.term_factor;
  SeriesResult r;
  double sum = 0.0;
  for (std::int64_t k = n; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);
  r.partial = sum;
  r.terms = n;
  const double nn = static_cast<double>(n);
  r.tail = std::pow(nn + 0.5, 1.0 - s) / (s - 1.0);
  r.error_bound = s * std::pow(nn - 0.5, -s - 1.0) / 24.0;
  r.value = r.partial + r.tail;
  return r;
}

/// Sum_{m>=1} m^a r^{m-1}, 0 < r < 1.
///
/// Terms are added until the geometric majorant of the remainder,
/// t_M rho/(1 - rho) with rho the (non-increasing) term ratio, drops below
/// rel_tol times the partial sum. The majorant is the error bound.
inline SeriesResult power_geometric_series(double a, double r, const SeriesOptions& opt = {}) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("power_geometric_series: ratio must be in (0, 1)");
  if (!std::isfinite(a)) throw DomainError("power_geometric_series: exponent must be finite");
  SeriesResult out;
  double partial = 0.0;
  std::int64_t m = 1;
  double bound = 0.0;
  std::int64_t stop_at = -1;
  for (;; ++m) {
    const double md = static_cast<double>(m);
    const double t = std::pow(md, a) * std::pow(r, md - 1.0);
    partial += t;
    const double rho = (a > 0.0 ? std::pow((md + 1.0) / md, a) : 1.0) * r;
    if (rho < 1.0) {
      bound = t * rho / (1.0 - rho);
      if (stop_at < 0 && bound < opt.rel_tol * partial) {
        stop_at = m * opt.term_factor;
      }
    }
    if (stop_at > 0 && m >= stop_at) break;
    if (m > 100000000) throw DomainError("power_geometric_series: did not converge");
  }
  out.partial = partial;
  out.tail = 0.0;
  out.error_bound = bound;
  out.value = partial;
  out.terms = m;
  return out;
}

}  // namespace wavebound
