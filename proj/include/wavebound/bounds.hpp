#pragma once

// The logarithmic modulus sigma, its inverse, the entropy bound delta, the
// truncation error of a plan, the exponential tail bound and plan selection.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "wavebound/constants.hpp"
#include "wavebound/error.hpp"
#include "wavebound/quadrature.hpp"

namespace wavebound {

struct ExpansionPlan {
  int n = 1;
  std::int64_t k0p = 1;
  std::vector<std::int64_t> kj{1};

  friend bool operator==(const ExpansionPlan&, const ExpansionPlan&) = default;
};

inline void validate_plan(const ExpansionPlan& p) {
  if (p.n < 1) throw DomainError("plan.n must be >= 1");
  if (p.k0p < 1) throw DomainError("plan.k0p must be >= 1");
  if (p.kj.size() != static_cast<std::size_t>(p.n)) {
    throw DomainError("plan.kj must have exactly n = " + std::to_string(p.n) + " entries");
  }
  for (auto k : p.kj)
    if (k < 1) throw DomainError("plan.kj entries must be >= 1");
}

/// Number of basis functions in the truncated expansion.
inline std::int64_t total_terms(const ExpansionPlan& p) {
  std::int64_t s = 2 * p.k0p + 1;
  for (auto k : p.kj) s += 2 * k + 1;
  return s;
}

/// c / (ln(e^alpha + 1/eps))^alpha
inline double sigma(double eps, double c, double alpha) {
  if (!(eps > 0.0)) throw DomainError("sigma: eps must be > 0, got " + std::to_string(eps));
  return c / std::pow(std::log(std::exp(alpha) + 1.0 / eps), alpha);
}

/// 1 / (e^{(c/t)^{1/alpha}} - e^alpha) for 0 < t < c / alpha^alpha.
inline double sigma_inv(double t, double c, double alpha) {
  const double top = c / std::pow(alpha, alpha);
  if (!(t > 0.0) || !(t < top * (1.0 - 1e-12))) {
    throw DomainError("sigma_inv: t must lie in (0, c/alpha^alpha) = (0, " + std::to_string(top) + "), got " +
                      std::to_string(t));
  }
  const double x = std::pow(c / t, 1.0 / alpha);
  // e^x - e^alpha = e^alpha expm1(x - alpha), exact near the pole.
  return 1.0 / (std::exp(alpha) * std::expm1(x - alpha));
}

inline void validate_entropy_args(double eps0, double c, double alpha, double T) {
  if (!(eps0 > 0.0)) throw DomainError("eps0 must be > 0");
  if (!(c > 0.0)) throw DomainError("c must be > 0");
  if (!(alpha > 0.5)) throw DomainError("alpha must be > 1/2");
  if (!(T > 0.0)) throw DomainError("T must be > 0");
}

/// Closed-form upper bound of the entropy integral with
/// gamma = min(eps0, sigma(T/2)).
inline double delta(double eps0, double c, double alpha, double T) {
  validate_entropy_args(eps0, c, alpha, T);
  const double g = std::min(eps0, sigma(T / 2.0, c, alpha));
  return g / std::numbers::sqrt2 *
         (std::sqrt(std::log(T + 1.0)) + std::pow(c / g, 1.0 / (2.0 * alpha)) / (1.0 - 1.0 / (2.0 * alpha)));
}

/// (1/sqrt 2) int_0^gamma (ln(T/(2 sigma_inv(e)) + 1))^{1/2} de by quadrature
/// after e = gamma w^m, m = 2/(1 - 1/(2 alpha)), which removes the endpoint
/// singularity at 0.
inline double entropy_integral(double eps0, double c, double alpha, double T, const QuadratureOptions& quad = {}) {
  validate_entropy_args(eps0, c, alpha, T);
  const double g = std::min(eps0, sigma(T / 2.0, c, alpha));
  const double m = 2.0 / (1.0 - 1.0 / (2.0 * alpha));
  auto integrand = [&](double w) {
    if (w <= 0.0) return 0.0;
    const double e = g * std::pow(w, m);
    if (!(e > 0.0)) return 0.0;
    const double x = std::pow(c / e, 1.0 / alpha);
    // ln(1 + (T/2)(e^x - e^alpha)) = x + ln(e^{-x} - (T/2) expm1(alpha - x))
    const double L = x + std::log(std::exp(-x) - 0.5 * T * std::expm1(alpha - x));
    return std::sqrt(std::max(L, 0.0)) * g * m * std::pow(w, m - 1.0);
  };
  const auto r = require_converged(integrate(integrand, 0.0, 1.0, quad), "entropy integral");
  return r.value / std::numbers::sqrt2;
}

inline double epsilon_plan(const ExpansionPlan& p, double A, double B, double C) {
  validate_plan(p);
  double s = 0.0;
  for (int j = 0; j < p.n; ++j) {
    s += A / (std::pow(2.0, 0.5 * j) * std::sqrt(static_cast<double>(p.kj[static_cast<std::size_t>(j)])));
  }
  s += B / std::sqrt(static_cast<double>(p.k0p));
  s += C / std::pow(2.0, 0.5 * p.n);
  return s;
}

inline double epsilon_plan(const ExpansionPlan& p, const BoundConstants& k) { return epsilon_plan(p, k.A, k.B, k.C); }

struct TailProbability {
  double probability = 1.0;  // clamped to <= 1
  double raw = 2.0;          // 2 exp(...) before clamping
  bool vacuous = true;       // u <= 8 delta: no information
};

inline TailProbability tail_bound(double u, double eps, double delta_eps) {
  if (!(u > 0.0)) throw DomainError("tail_bound: u must be > 0, got " + std::to_string(u));
  if (!(eps > 0.0)) throw DomainError("tail_bound: eps must be > 0");
  if (!(delta_eps >= 0.0)) throw DomainError("tail_bound: delta must be >= 0");
  TailProbability t;
  if (u <= 8.0 * delta_eps) return t;
  const double d = u - std::sqrt(8.0 * u * delta_eps);
  t.raw = 2.0 * std::exp(-d * d / (2.0 * eps * eps));
  t.probability = std::min(1.0, t.raw);
  t.vacuous = false;
  return t;
}

struct TailBound {
  double epsilon = 0.0;
  double delta_eps = 0.0;
  double u_min = 0.0;

  [[nodiscard]] TailProbability operator()(double u) const { return tail_bound(u, epsilon, delta_eps); }
};

inline TailBound make_tail_bound(const ExpansionPlan& p, const BoundConstants& k) {
  TailBound t;
  t.epsilon = epsilon_plan(p, k);
  t.delta_eps = delta(t.epsilon, k.sigma_c, k.alpha, k.T);
  t.u_min = 8.0 * t.delta_eps;
  return t;
}

/// Right side of the phase-increment inequality
/// |e^{itz} - e^{isz}| <= 2 (ln(e^alpha + |z|/2) / ln(e^alpha + 1/|t-s|))^alpha.
inline double phase_increment_bound(double t, double s, double z, double alpha) {
  const double h = std::abs(t - s);
  if (h == 0.0) return 0.0;
  return 2.0 * std::pow(std::log(std::exp(alpha) + std::abs(z) / 2.0) / std::log(std::exp(alpha) + 1.0 / h), alpha);
}

struct PlanResult {
  ExpansionPlan plan;
  double eps_star = 0.0;    // largest epsilon meeting the (u, p) target
  double epsilon = 0.0;     // epsilon_plan of the returned plan
  double delta_eps = 0.0;
  double probability = 1.0; // certified tail bound at u
  std::int64_t terms = 0;
};

namespace detail {

inline bool meets_target(double u, double p, double eps, const BoundConstants& k) {
  const double d = delta(eps, k.sigma_c, k.alpha, k.T);
  if (!(u > 8.0 * d)) return false;
  return tail_bound(u, eps, d).probability <= p;
}

// Largest admissible k entry; beyond this the plan is reported infeasible.
inline constexpr double max_k = 9.0e15;

inline std::int64_t ceil_k(double x) {
  if (!(x <= max_k)) throw InfeasiblePlanError("required truncation exceeds " + std::to_string(max_k) + " terms");
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(x)));
}

// Minimises k0p + sum k_j under B/sqrt(k0p) + sum a_j/sqrt(k_j) <= r:
// continuous Lagrange solution, rounded up, then per-coordinate descent.
inline ExpansionPlan allocate(int n, double r, const BoundConstants& k) {
  std::vector<double> w{k.B};
  for (int j = 0; j < n; ++j) w.push_back(k.A / std::pow(2.0, 0.5 * j));
  double W = 0.0;
  for (double x : w) W += std::pow(x, 2.0 / 3.0);
  std::vector<std::int64_t> ks;
  for (double x : w) ks.push_back(ceil_k((W / r) * (W / r) * std::pow(x, 2.0 / 3.0)));
  auto load = [&](const std::vector<std::int64_t>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += w[i] / std::sqrt(static_cast<double>(v[i]));
    return s;
  };
  // Rounding only shrinks load, but guard against the last ulp.
  for (int guard = 0; load(ks) > r && guard < 64; ++guard)
    for (auto& x : ks) x = ceil_k(static_cast<double>(x) * 1.0001 + 1.0);
  for (int pass = 0; pass < 8; ++pass) {
    bool changed = false;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      std::int64_t lo = 1;
      std::int64_t hi = ks[i];
      while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        auto trial = ks;
        trial[i] = mid;
        if (load(trial) <= r) {
          hi = mid;
        } else {
          lo = mid + 1;
        }
      }
      if (lo != ks[i]) {
        ks[i] = lo;
        changed = true;
      }
    }
    if (!changed) break;
  }
  ExpansionPlan p;
  p.n = n;
  p.k0p = ks[0];
  p.kj.assign(ks.begin() + 1, ks.end());
  return p;
}

}  // namespace detail

/// Largest eps with u > 8 delta(eps) and tail_bound(u, eps, delta(eps)) <= p,
/// after numerically checking that the constraint is monotone in eps.
inline double max_feasible_epsilon(double u, double p_target, const BoundConstants& k) {
  if (!(u > 0.0)) throw DomainError("select_plan: u must be > 0");
  if (!(p_target > 0.0 && p_target < 1.0)) throw DomainError("select_plan: p must lie in (0, 1)");
  // Bracket: hi infeasible, lo feasible.
  double hi = u;
  for (int i = 0; i < 200 && detail::meets_target(u, p_target, hi, k); ++i) hi *= 2.0;
  if (detail::meets_target(u, p_target, hi, k)) throw InfeasiblePlanError("could not bracket the feasible epsilon");
  double lo = hi;
  bool found = false;
  for (int i = 0; i < 2000; ++i) {
    lo *= 0.5;
    if (!(lo > 0.0)) break;
    if (detail::meets_target(u, p_target, lo, k)) {
      found = true;
      break;
    }
  }
  if (!found) {
    throw InfeasiblePlanError("no epsilon > 0 meets u = " + std::to_string(u) + ", p = " + std::to_string(p_target) +
                              " (u too small relative to the constants)");
  }
  // The raw bound 2exp(...) and 8 delta must both be nondecreasing in eps.
  double prev_raw = 0.0;
  double prev_d = 0.0;
  for (int i = 0; i <= 256; ++i) {
    const double e = lo * 1e-3 * std::pow(hi / (lo * 1e-3), i / 256.0);
    const double d = delta(e, k.sigma_c, k.alpha, k.T);
    const double raw = u > 8.0 * d ? tail_bound(u, e, d).raw : 2.0;
    if (raw < prev_raw * (1.0 - 1e-12) || d < prev_d * (1.0 - 1e-12)) {
      throw ConditionError("tail bound is not monotone in epsilon near eps = " + std::to_string(e));
    }
    prev_raw = raw;
    prev_d = d;
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-10 * lo; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (detail::meets_target(u, p_target, mid, k)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

/// Equal three-way budget split with the Lagrange allocation of the detail
/// terms; the starting point that select_plan improves on.
inline ExpansionPlan equal_split_plan(double eps_star, const BoundConstants& k) {
  const double third = eps_star / 3.0;
  int n = 1;
  while (k.C / std::pow(2.0, 0.5 * n) > third) {
    if (++n > 400) throw InfeasiblePlanError("number of levels exceeds 400");
  }
  ExpansionPlan p;
  p.n = n;
  p.k0p = detail::ceil_k(std::pow(k.B / third, 2.0));
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::pow(2.0, -i / 3.0);
  p.kj.clear();
  for (int j = 0; j < n; ++j) p.kj.push_back(detail::ceil_k(std::pow(k.A * s / third, 2.0) * std::pow(2.0, -j / 3.0)));
  return p;
}

inline PlanResult select_plan(double u, double p_target, const BoundConstants& k) {
  PlanResult out;
  out.eps_star = max_feasible_epsilon(u, p_target, k);
  const double es = out.eps_star;

  ExpansionPlan best = equal_split_plan(es, k);
  std::int64_t best_terms = total_terms(best);
  int n = 1;
  while (k.C / std::pow(2.0, 0.5 * n) >= es) {
    if (++n > 400) throw InfeasiblePlanError("number of levels exceeds 400");
  }
  int worse_streak = 0;
  for (; n <= 400 && worse_streak < 6; ++n) {
    const double r = es - k.C / std::pow(2.0, 0.5 * n);
    if (!(r > 0.0)) continue;
    ExpansionPlan cand;
    try {
      cand = detail::allocate(n, r, k);
    } catch (const InfeasiblePlanError&) {
      ++worse_streak;
      continue;
    }
    if (epsilon_plan(cand, k) > es) continue;
    const auto t = total_terms(cand);
    if (t < best_terms) {
      best = cand;
      best_terms = t;
      worse_streak = 0;
    } else {
      ++worse_streak;
    }
  }
  out.plan = best;
  out.terms = best_terms;
  out.epsilon = epsilon_plan(best, k);
  out.delta_eps = delta(out.epsilon, k.sigma_c, k.alpha, k.T);
  out.probability = tail_bound(u, out.epsilon, out.delta_eps).probability;
  if (!(out.epsilon <= es) || !detail::meets_target(u, p_target, out.epsilon, k)) {
    throw InfeasiblePlanError("selected plan failed the post-hoc feasibility check");
  }
  return out;
}

}  // namespace wavebound
