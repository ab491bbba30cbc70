#pragma once

// Exact joint Gaussian simulation of the process on a grid together with its
// wavelet coefficients, the deterministic mean-square error of a truncated
// expansion, and Monte Carlo checks of the certified tail bound.

#include <Eigen/Cholesky>
#include <boost/math/special_functions/erf.hpp>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "wavebound/bounds.hpp"
#include "wavebound/constants.hpp"
#include "wavebound/error.hpp"
#include "wavebound/parallel.hpp"
#include "wavebound/philox.hpp"
#include "wavebound/spectral.hpp"
#include "wavebound/wavelet.hpp"

namespace wavebound {

using CoefficientIndex = BasisIndex;

/// Scaling shifts |k| <= k0p, then detail levels j < n with |k| <= k_j.
inline std::vector<CoefficientIndex> plan_indices(const ExpansionPlan& p) {
  validate_plan(p);
  std::vector<CoefficientIndex> out;
  for (std::int64_t k = -p.k0p; k <= p.k0p; ++k) out.push_back({BasisKind::scaling, 0, k});
  for (int j = 0; j < p.n; ++j) {
    const auto kj = p.kj[static_cast<std::size_t>(j)];
    for (std::int64_t k = -kj; k <= kj; ++k) out.push_back({BasisKind::mother, j, k});
  }
  return out;
}

inline std::vector<double> uniform_grid(double T, int points) {
  if (points < 1) throw DomainError("grid needs at least one point");
  if (points == 1) return {0.0};
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = T * i / (points - 1);
  return g;
}

namespace detail {

inline double real_part_checked(cplx v, double tol, const char* what) {
  if (std::abs(v.imag()) > tol * std::max(1.0, std::abs(v.real()))) {
    throw QuadratureError(std::string(what) + ": imaginary residue " + std::to_string(v.imag()) + " too large");
  }
  return v.real();
}

inline double dyadic_position(const BasisIndex& i) {
  return static_cast<double>(i.k) / std::ldexp(1.0, i.j);
}

}  // namespace detail

namespace detail {

inline cplx unit_hat(const WaveletPair& w, BasisKind kind, double u) {
  return kind == BasisKind::scaling ? cplx(w.phi_hat(u), 0.0) : w.psi_hat(u);
}

inline double unit_center(const WaveletPair& w, BasisKind kind) {
  return kind == BasisKind::mother ? w.psi_center : 0.0;
}

// (1/2pi) int weight(z) 2^{-(j1+j2)/2} e^{izd} conj(g1(z/2^j1)) g2(z/2^j2) dz,
// the inner product of g1_{j1,k1} and g2_{j2,k2} with d = k1/2^j1 - k2/2^j2.
template <class Weight>
double lagged_product(const WaveletPair& w, BasisKind kind1, int j1, BasisKind kind2, int j2, double d,
                      const Weight& weight, const QuadratureOptions& quad, double imag_tol) {
  const double s1 = std::ldexp(1.0, j1);
  const double s2 = std::ldexp(1.0, j2);
  const auto ba = basis_breaks(w, {kind1, j1, 0});
  const auto bb = basis_breaks(w, {kind2, j2, 0});
  QuadratureOptions q = quad;
  q.max_panel_width =
      2.0 * std::numbers::pi / (std::abs(d + unit_center(w, kind1) / s1 - unit_center(w, kind2) / s2) + 1.0);
  const double norm = 1.0 / std::sqrt(s1 * s2);
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
      auto f = [&](double z) {
        return weight(z) * norm * std::polar(1.0, z * d) * std::conj(unit_hat(w, kind1, z / s1)) *
               unit_hat(w, kind2, z / s2);
      };
      total += require_converged(integrate(f, std::span<const double>(br), q), "lagged product").value;
    }
  }
  return real_part_checked(total / (2.0 * std::numbers::pi), imag_tol, "lagged product");
}

// (1/2pi) int weight(z) 2^{-j/2} e^{iz tau} g(z/2^j) dz; with weight R_hat this
// is Cov(X(t), xi_jk) for tau = t - k/2^j, with weight 1 it is g_jk(t).
template <class Weight>
double lagged_transform(const WaveletPair& w, BasisKind kind, int j, double tau, const Weight& weight,
                        const QuadratureOptions& quad) {
  const double s = std::ldexp(1.0, j);
  QuadratureOptions q = quad;
  q.max_panel_width = 2.0 * std::numbers::pi / (std::abs(tau - unit_center(w, kind) / s) + 1.0);
  const double norm = 1.0 / std::sqrt(s);
  cplx total{0.0, 0.0};
  for (const auto& br : basis_breaks(w, {kind, j, 0})) {
    auto f = [&](double z) { return weight(z) * norm * std::polar(1.0, tau * z) * unit_hat(w, kind, z / s); };
    total += require_converged(integrate(f, std::span<const double>(br), q), "lagged transform").value;
  }
  return real_part_checked(total / (2.0 * std::numbers::pi), 1e-9, "lagged transform");
}

}  // namespace detail

/// E xi_1 xi_2 = (1/2pi) int R_hat conj(g1_hat) g2_hat.
inline double coef_cov(const WaveletPair& w, const SpectralModel& m, const CoefficientIndex& a,
                       const CoefficientIndex& b, const QuadratureOptions& quad = {}) {
  validate_index(a);
  validate_index(b);
  return detail::lagged_product(w, a.kind, a.j, b.kind, b.j, detail::dyadic_position(a) - detail::dyadic_position(b),
                                m.r_hat, quad, 1e-10);
}

/// Cov(X(t), xi) = int R(t - s) g(s) ds = (1/2pi) int R_hat(z) e^{itz} g_hat(z) dz.
inline double cross_cov(const WaveletPair& w, const SpectralModel& m, double t, const CoefficientIndex& idx,
                        const QuadratureOptions& quad = {}) {
  validate_index(idx);
  return detail::lagged_transform(w, idx.kind, idx.j, t - detail::dyadic_position(idx), m.r_hat, quad);
}

/// Memoises basis values and covariances of one (pair, model) by the
/// stationarity keys: covariances depend on the shifts only through
/// k1/2^j1 - k2/2^j2 (or t - k/2^j), basis values through 2^j t - k.
/// Values depend only on the key, so results do not depend on call order
/// or thread count.
class CovarianceCache {
 public:
  CovarianceCache(WaveletPair pair, SpectralModel model, QuadratureOptions quad = {}, ExecutionOptions exec = {})
      : pair_(std::move(pair)), model_(std::move(model)), quad_(quad), exec_(exec) {}

  [[nodiscard]] const WaveletPair& pair() const { return pair_; }
  [[nodiscard]] const SpectralModel& model() const { return model_; }
  [[nodiscard]] const QuadratureOptions& quad() const { return quad_; }
  [[nodiscard]] const ExecutionOptions& exec() const { return exec_; }

  double coef(const CoefficientIndex& a, const CoefficientIndex& b) {
    const auto key = coef_key(a, b);
    {
      std::lock_guard lock(mutex_);
      auto it = coef_.find(key);
      if (it != coef_.end()) return it->second;
    }
    const double v = detail::lagged_product(pair_, static_cast<BasisKind>(key.kind1), key.j1,
                                            static_cast<BasisKind>(key.kind2), key.j2, key.offset, model_.r_hat,
                                            quad_, 1e-10);
    std::lock_guard lock(mutex_);
    return coef_.emplace(key, v).first->second;
  }

  double cross(double t, const CoefficientIndex& i) {
    const CrossKey key{static_cast<int>(i.kind), i.j, t - detail::dyadic_position(i)};
    {
      std::lock_guard lock(mutex_);
      auto it = cross_.find(key);
      if (it != cross_.end()) return it->second;
    }
    validate_index(i);
    const double v = detail::lagged_transform(pair_, i.kind, i.j, key.offset, model_.r_hat, quad_);
    std::lock_guard lock(mutex_);
    return cross_.emplace(key, v).first->second;
  }

  double basis(const CoefficientIndex& i, double t) {
    const CrossKey key{static_cast<int>(i.kind), i.j, std::ldexp(t, i.j) - static_cast<double>(i.k)};
    {
      std::lock_guard lock(mutex_);
      auto it = basis_.find(key);
      if (it != basis_.end()) return it->second;
    }
    validate_index(i);
    const double v = std::sqrt(std::ldexp(1.0, i.j)) *
                     detail::lagged_transform(pair_, i.kind, 0, key.offset, [](double) { return 1.0; }, quad_);
    std::lock_guard lock(mutex_);
    return basis_.emplace(key, v).first->second;
  }

  // Fill the caches for every entry a build over (grid, indices) needs,
  // spreading the missing integrals over the configured threads.
  void prefetch(const std::vector<double>& grid, const std::vector<CoefficientIndex>& idx) {
    std::vector<std::function<void()>> jobs;
    std::map<CoefKey, bool> seen_c;
    std::map<CrossKey, bool> seen_x;
    std::map<CrossKey, bool> seen_b;
    {
      std::lock_guard lock(mutex_);
      for (std::size_t r = 0; r < idx.size(); ++r) {
        for (std::size_t c = r; c < idx.size(); ++c) {
          const auto key = coef_key(idx[r], idx[c]);
          if (coef_.count(key) || seen_c.count(key)) continue;
          seen_c[key] = true;
          const auto a = idx[r];
          const auto b = idx[c];
          jobs.emplace_back([this, a, b] { coef(a, b); });
        }
      }
      for (double t : grid) {
        for (const auto& i : idx) {
          const CrossKey xk{static_cast<int>(i.kind), i.j, t - detail::dyadic_position(i)};
          if (!cross_.count(xk) && !seen_x.count(xk)) {
            seen_x[xk] = true;
            jobs.emplace_back([this, t, i] { cross(t, i); });
          }
          const CrossKey bk{static_cast<int>(i.kind), i.j, std::ldexp(t, i.j) - static_cast<double>(i.k)};
          if (!basis_.count(bk) && !seen_b.count(bk)) {
            seen_b[bk] = true;
            jobs.emplace_back([this, t, i] { basis(i, t); });
          }
        }
      }
    }
    parallel_for(jobs.size(), exec_, [&](std::size_t n) { jobs[n](); });
  }

 private:
  struct CoefKey {
    int kind1, j1, kind2, j2;
    double offset;
    friend auto operator<=>(const CoefKey&, const CoefKey&) = default;
  };
  struct CrossKey {
    int kind, j;
    double offset;
    friend auto operator<=>(const CrossKey&, const CrossKey&) = default;
  };

  static CoefKey coef_key(const CoefficientIndex& a, const CoefficientIndex& b) {
    CoefKey k{static_cast<int>(a.kind), a.j, static_cast<int>(b.kind), b.j,
              detail::dyadic_position(a) - detail::dyadic_position(b)};
    if (std::tie(k.kind1, k.j1) > std::tie(k.kind2, k.j2)) {
      std::swap(k.kind1, k.kind2);
      std::swap(k.j1, k.j2);
      k.offset = -k.offset;
    }
    if (k.kind1 == k.kind2 && k.j1 == k.j2) k.offset = std::abs(k.offset);
    return k;
  }

  WaveletPair pair_;
  SpectralModel model_;
  QuadratureOptions quad_;
  ExecutionOptions exec_;
  std::mutex mutex_;
  std::map<CoefKey, double> coef_;
  std::map<CrossKey, double> cross_;
  std::map<CrossKey, double> basis_;
};

struct JointGaussianSpec {
  std::vector<double> grid;
  std::vector<CoefficientIndex> indices;
  Eigen::MatrixXd cov;     // order: grid values, then coefficients
  Eigen::MatrixXd basis;   // grid x coefficients, g_i(t)
  Eigen::MatrixXd factor;  // lower Cholesky factor of cov + jitter I
  double jitter_used = 0.0;

  [[nodiscard]] Eigen::Index grid_size() const { return static_cast<Eigen::Index>(grid.size()); }
  [[nodiscard]] Eigen::Index coef_size() const { return static_cast<Eigen::Index>(indices.size()); }
};

/// Cholesky of cov + jitter * I with jitter = 0 or the smallest power of ten
/// times the largest diagonal entry that succeeds, up to 1e-8 of it.
inline void factorize(JointGaussianSpec& spec) {
  const double dmax = spec.cov.diagonal().maxCoeff();
  std::vector<double> tries{0.0};
  for (int e = -16; e <= -8; ++e) tries.push_back(std::pow(10.0, e) * dmax);
  for (double j : tries) {
    Eigen::MatrixXd m = spec.cov;
    m.diagonal().array() += j;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() == Eigen::Success) {
      spec.factor = llt.matrixL();
      spec.jitter_used = j;
      return;
    }
  }
  throw FactorizationError("joint covariance is not positive definite even with jitter 1e-8 * max diagonal = " +
                           std::to_string(1e-8 * dmax));
}

struct BuildOptions {
  bool factorize = true;
};

inline JointGaussianSpec build_joint(CovarianceCache& cache, const ExpansionPlan& plan, const std::vector<double>& grid,
                                     const BuildOptions& opt = {}) {
  if (grid.size() > 1024) throw DomainError("build_joint: grid holds more than 1024 points");
  const auto idx = plan_indices(plan);
  if (idx.size() > 2000) throw DomainError("build_joint: plan has more than 2000 coefficients");
  JointGaussianSpec s;
  s.grid = grid;
  s.indices = idx;
  cache.prefetch(grid, idx);
  const auto G = s.grid_size();
  const auto N = s.coef_size();
  s.cov.resize(G + N, G + N);
  s.basis.resize(G, N);
  const auto& model = cache.model();
  for (Eigen::Index a = 0; a < G; ++a)
    for (Eigen::Index b = 0; b < G; ++b)
      s.cov(a, b) = autocovariance(model, grid[static_cast<std::size_t>(a)] - grid[static_cast<std::size_t>(b)],
                                   cache.quad());
  for (Eigen::Index a = 0; a < G; ++a) {
    for (Eigen::Index c = 0; c < N; ++c) {
      const double t = grid[static_cast<std::size_t>(a)];
      const auto& i = idx[static_cast<std::size_t>(c)];
      const double v = cache.cross(t, i);
      s.cov(a, G + c) = v;
      s.cov(G + c, a) = v;
      s.basis(a, c) = cache.basis(i, t);
    }
  }
  for (Eigen::Index r = 0; r < N; ++r) {
    for (Eigen::Index c = r; c < N; ++c) {
      const double v = cache.coef(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
      s.cov(G + r, G + c) = v;
      s.cov(G + c, G + r) = v;
    }
  }
  if (opt.factorize) factorize(s);
  return s;
}

inline JointGaussianSpec build_joint(const WaveletPair& w, const SpectralModel& m, const ExpansionPlan& plan,
                                     const std::vector<double>& grid, const QuadratureOptions& quad = {}) {
  CovarianceCache cache(w, m, quad);
  return build_joint(cache, plan, grid);
}

/// Columns are independent draws L z with z from Philox stream r (replicate r).
inline Eigen::MatrixXd sample_joint(const JointGaussianSpec& spec, int n_rep, std::uint64_t seed,
                                    const ExecutionOptions& exec = {}) {
  if (n_rep < 1) throw DomainError("sample_joint: n_rep must be >= 1");
  if (spec.factor.rows() != spec.cov.rows()) throw FactorizationError("sample_joint: spec is not factorised");
  const Philox4x32 gen(seed);
  const auto d = spec.factor.rows();
  Eigen::MatrixXd out(d, n_rep);
  parallel_for(static_cast<std::size_t>(n_rep), exec, [&](std::size_t r) {
    Eigen::VectorXd z(d);
    fill_normals(gen, r, static_cast<std::size_t>(d), z);
    out.col(static_cast<Eigen::Index>(r)) = spec.factor.triangularView<Eigen::Lower>() * z;
  });
  return out;
}

/// X_n(t) = sum_i c_i g_i(t) over the plan's index list.
inline std::vector<double> reconstruct(const ExpansionPlan& plan, const std::vector<double>& coefficients,
                                       CovarianceCache& cache, const std::vector<double>& grid) {
  const auto idx = plan_indices(plan);
  if (coefficients.size() != idx.size()) {
    throw DomainError("reconstruct: expected " + std::to_string(idx.size()) + " coefficients, got " +
                      std::to_string(coefficients.size()));
  }
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t g = 0; g < grid.size(); ++g)
    for (std::size_t c = 0; c < idx.size(); ++c)
      if (coefficients[c] != 0.0) out[g] += coefficients[c] * cache.basis(idx[c], grid[g]);
  return out;
}

inline std::vector<double> reconstruct(const ExpansionPlan& plan, const std::vector<double>& coefficients,
                                       const WaveletPair& w, const std::vector<double>& grid,
                                       const QuadratureOptions& quad = {}) {
  CovarianceCache cache(w, flat_band_model(1.0), quad);
  return reconstruct(plan, coefficients, cache, grid);
}

struct MeanSquareProfile {
  std::vector<double> rms;  // sqrt E|X(t) - X_n(t)|^2 per grid point
  double sup = 0.0;
};

/// E|X(t) - X_n(t)|^2 = R(0) - 2 c^T b(t) + c^T Sigma c from the covariance
/// blocks, c = basis values at t, b = cross-covariances.
inline MeanSquareProfile mean_square_profile(const JointGaussianSpec& s) {
  const auto G = s.grid_size();
  const auto N = s.coef_size();
  const Eigen::MatrixXd sigma = s.cov.bottomRightCorner(N, N);
  MeanSquareProfile p;
  p.rms.resize(static_cast<std::size_t>(G));
  for (Eigen::Index a = 0; a < G; ++a) {
    const Eigen::VectorXd c = s.basis.row(a).transpose();
    const Eigen::VectorXd b = s.cov.block(a, G, 1, N).transpose();
    double ms = s.cov(a, a) - 2.0 * c.dot(b) + c.dot(sigma * c);
    if (ms < 0.0) {
      if (ms < -1e-9) throw DomainError("mean_square_profile: negative mean square " + std::to_string(ms));
      ms = 0.0;
    }
    p.rms[static_cast<std::size_t>(a)] = std::sqrt(ms);
    p.sup = std::max(p.sup, p.rms[static_cast<std::size_t>(a)]);
  }
  return p;
}

inline MeanSquareProfile mean_square_profile(CovarianceCache& cache, const ExpansionPlan& plan,
                                             const std::vector<double>& grid) {
  return mean_square_profile(build_joint(cache, plan, grid, {.factorize = false}));
}

struct WilsonInterval {
  double estimate = 0.0;
  double half_width = 0.0;
  double lower = 0.0;
  double upper = 1.0;

  friend bool operator==(const WilsonInterval&, const WilsonInterval&) = default;
};

/// Wilson score interval at two-sided level (0.99 -> z = 2.5758...).
inline WilsonInterval wilson_interval(std::int64_t successes, std::int64_t n, double level = 0.99) {
  if (n <= 0) throw DomainError("wilson_interval: n must be > 0");
  const double z = std::numbers::sqrt2 * boost::math::erf_inv(level);
  const double nn = static_cast<double>(n);
  const double ph = static_cast<double>(successes) / nn;
  const double den = 1.0 + z * z / nn;
  const double centre = (ph + z * z / (2.0 * nn)) / den;
  const double hw = z / den * std::sqrt(ph * (1.0 - ph) / nn + z * z / (4.0 * nn * nn));
  return {ph, hw, std::max(0.0, centre - hw), std::min(1.0, centre + hw)};
}

struct VerificationReport {
  ExpansionPlan plan;
  double eps_certified = 0.0;
  double delta_eps = 0.0;
  double ms_sup_observed = 0.0;
  std::vector<double> u_values;
  std::vector<WilsonInterval> empirical_tail;
  std::vector<double> certified_tail;
  std::vector<bool> vacuous;
  std::vector<double> sup_errors;  // one per replicate
  int replicates = 0;
  std::uint64_t seed = 0;
  int grid_points = 0;
  double jitter_used = 0.0;
  bool deterministic_dominance = false;
  bool stochastic_dominance = false;
  std::string grid_note =
      "sup over [0,T] replaced by the max over a uniform grid; the grid max does not exceed the true sup";

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

/// Per replicate max_t |X(t) - X_n(t)| on the grid; compares the exceedance
/// frequencies of u_values with the certified tail bound.
inline VerificationReport empirical_tail(CovarianceCache& cache, const BoundConstants& consts,
                                         const ExpansionPlan& plan, const std::vector<double>& grid,
                                         const std::vector<double>& u_values, int n_rep, std::uint64_t seed) {
  if (n_rep < 1000) throw DomainError("empirical_tail: n_rep must be >= 1000");
  VerificationReport rep;
  rep.plan = plan;
  rep.replicates = n_rep;
  rep.seed = seed;
  rep.grid_points = static_cast<int>(grid.size());
  const auto tb = make_tail_bound(plan, consts);
  rep.eps_certified = tb.epsilon;
  rep.delta_eps = tb.delta_eps;
  for (double u : u_values)
    if (!(u > tb.u_min)) {
      throw DomainError("empirical_tail: u = " + std::to_string(u) + " must exceed 8 delta(eps) = " +
                        std::to_string(tb.u_min));
    }
  rep.u_values = u_values;

  const auto spec = build_joint(cache, plan, grid);
  rep.jitter_used = spec.jitter_used;
  rep.ms_sup_observed = mean_square_profile(spec).sup;
  rep.deterministic_dominance = rep.ms_sup_observed <= rep.eps_certified;

  const auto G = spec.grid_size();
  const auto N = spec.coef_size();
  // Error vector X - X_n on the grid is M z with M = L_grid - Phi L_coef.
  const Eigen::MatrixXd M = spec.factor.topRows(G) - spec.basis * spec.factor.bottomRows(N);
  const Philox4x32 gen(seed);
  const auto d = spec.factor.rows();
  rep.sup_errors.assign(static_cast<std::size_t>(n_rep), 0.0);
  parallel_for(static_cast<std::size_t>(n_rep), cache.exec(), [&](std::size_t r) {
    Eigen::VectorXd z(d);
    fill_normals(gen, r, static_cast<std::size_t>(d), z);
    rep.sup_errors[r] = (M * z).cwiseAbs().maxCoeff();
  });

  rep.stochastic_dominance = true;
  for (double u : u_values) {
    const auto hits = std::count_if(rep.sup_errors.begin(), rep.sup_errors.end(), [u](double e) { return e > u; });
    const auto wi = wilson_interval(hits, n_rep);
    const auto cert = tb(u);
    rep.empirical_tail.push_back(wi);
    rep.certified_tail.push_back(cert.probability);
    rep.vacuous.push_back(cert.vacuous);
    // Both readings of "estimate minus the 99% half-width" must stay below the bound.
    if (wi.lower > cert.probability || wi.estimate - wi.half_width > cert.probability) {
      rep.stochastic_dominance = false;
    }
  }
  return rep;
}

/// Five u values above 8 delta(eps): 8 delta times 1.05, 1.25, 1.5, 2, 3.
inline std::vector<double> default_u_values(const ExpansionPlan& plan, const BoundConstants& consts) {
  const auto tb = make_tail_bound(plan, consts);
  return {1.05 * tb.u_min, 1.25 * tb.u_min, 1.5 * tb.u_min, 2.0 * tb.u_min, 3.0 * tb.u_min};
}

struct DecayCheck {
  int j = 0;
  int kmax = 0;
  double max_offdiag_ratio = 0.0;  // |E eta_jk eta_jl| |k - l| 2^{4j} / A_psi
  double max_diag_ratio = 0.0;     // E|eta_jk|^2 2^{5j} / A1_psi
  int violations = 0;
  int checked = 0;
};

/// Off-diagonal decay |E eta_jk eta_jl| <= A_psi / (2^{4j} |k - l|) and the
/// diagonal bound E|eta_jk|^2 <= A1_psi / 2^{5j}, for 1 <= |k|, |l| <= kmax.
inline DecayCheck covariance_decay_check(CovarianceCache& cache, const BoundConstants& consts, int j, int kmax) {
  if (j < 0 || j > 3) throw DomainError("covariance_decay_check: j must lie in [0, 3]");
  if (kmax < 1 || kmax > 16) throw DomainError("covariance_decay_check: kmax must lie in [1, 16]");
  DecayCheck d;
  d.j = j;
  d.kmax = kmax;
  std::vector<std::int64_t> ks;
  for (std::int64_t k = -kmax; k <= kmax; ++k)
    if (k != 0) ks.push_back(k);
  for (auto k : ks) {
    for (auto l : ks) {
      const double c = cache.coef({BasisKind::mother, j, k}, {BasisKind::mother, j, l});
      double ratio;
      if (k == l) {
        ratio = c * std::ldexp(1.0, 5 * j) / consts.A1_psi;
        d.max_diag_ratio = std::max(d.max_diag_ratio, ratio);
      } else {
        ratio = std::abs(c) * std::ldexp(1.0, 4 * j) * static_cast<double>(std::abs(k - l)) / consts.A_psi;
        d.max_offdiag_ratio = std::max(d.max_offdiag_ratio, ratio);
      }
      ++d.checked;
      if (!(ratio < 1.0)) ++d.violations;
    }
  }
  return d;
}

struct BasisBoundCheck {
  double max_shift_ratio = 0.0;  // |psi_jl(t)| |l| / (2^{3j/2} B1_psi)
  double max_zero_ratio = 0.0;   // |psi_j0(t)| / (2^{j/2 - 1} c2 / pi)
  int checked = 0;
};

/// Time-domain bounds |psi_jl(t)| <= 2^{3j/2} B1_psi / |l| (l != 0) and
/// |psi_j0(t)| <= 2^{j/2-1} c2 / pi on the grid.
inline BasisBoundCheck basis_bound_check(CovarianceCache& cache, const BoundConstants& consts, int jmax, int lmax,
                                         const std::vector<double>& grid) {
  BasisBoundCheck r;
  for (int j = 0; j <= jmax; ++j) {
    for (std::int64_t l = -lmax; l <= lmax; ++l) {
      for (double t : grid) {
        const double v = std::abs(cache.basis({BasisKind::mother, j, l}, t));
        if (l == 0) {
          r.max_zero_ratio =
              std::max(r.max_zero_ratio, v / (std::pow(2.0, 0.5 * j - 1.0) * consts.c2 / std::numbers::pi));
        } else {
          r.max_shift_ratio = std::max(r.max_shift_ratio, v * static_cast<double>(std::abs(l)) /
                                                              (std::pow(2.0, 1.5 * j) * consts.B1_psi));
        }
        ++r.checked;
      }
    }
  }
  return r;
}

/// max ratio of |psi_jk(t)-psi_jk(s)| |psi_jl(t)-psi_jl(s)| to
/// (j+1)^{2 alpha} 2^{3j-2} K^2 / (|k|^beta |l|^beta ln(e^alpha + 1/|t-s|)^{2 alpha})
/// over j <= jmax, 1 <= |k|, |l| <= kmax, k != l and random (t, s) in [0, T]^2.
inline double increment_product_ratio(CovarianceCache& cache, const BoundConstants& b, int jmax, int kmax, int pairs,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, b.T);
  double worst = 0.0;
  for (int p = 0; p < pairs; ++p) {
    const double t = U(rng);
    const double s = U(rng);
    if (t == s) continue;
    const double lg = std::pow(std::log(std::exp(b.alpha) + 1.0 / std::abs(t - s)), 2.0 * b.alpha);
    for (int j = 0; j <= jmax; ++j) {
      std::vector<double> inc(static_cast<std::size_t>(2 * kmax + 1));
      for (int k = -kmax; k <= kmax; ++k) {
        if (k == 0) continue;
        inc[static_cast<std::size_t>(k + kmax)] =
            std::abs(cache.basis({BasisKind::mother, j, k}, t) - cache.basis({BasisKind::mother, j, k}, s));
      }
      for (int k = -kmax; k <= kmax; ++k) {
        for (int l = -kmax; l <= kmax; ++l) {
          if (k == 0 || l == 0 || k == l) continue;
          const double bound = std::pow(j + 1.0, 2.0 * b.alpha) * std::ldexp(1.0, 3 * j - 2) * b.K * b.K /
                               (std::pow(std::abs(k), b.beta) * std::pow(std::abs(l), b.beta) * lg);
          worst = std::max(worst, inc[static_cast<std::size_t>(k + kmax)] * inc[static_cast<std::size_t>(l + kmax)] /
                                      bound);
        }
      }
    }
  }
  return worst;
}

}  // namespace wavebound
