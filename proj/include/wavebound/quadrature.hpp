#pragma once

// Adaptive Gauss-Legendre quadrature over finite intervals with optional
// interior breakpoints. Works for real- and complex-valued integrands.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>
#include <utility>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "wavebound/error.hpp"

namespace wavebound {

struct QuadratureOptions {
  int order = 16;               // nodes per panel
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  int max_panels = 40000;
  int min_panels = 2;           // initial split of every break interval
  double max_panel_width = 0.0; // 0 disables width-driven pre-splitting

  // Same tolerances, twice the nodes per panel.
  [[nodiscard]] QuadratureOptions doubled() const {
    QuadratureOptions q = *this;
    q.order *= 2;
    return q;
  }
};

template <class T>
struct QuadratureResult {
  T value{};
  double error = 0.0;
  int panels = 0;
  bool converged = false;
};

class GaussLegendreRule {
 public:
  explicit GaussLegendreRule(int n) : nodes_(static_cast<std::size_t>(n)), weights_(static_cast<std::size_t>(n)) {
    if (n < 1) throw DomainError("Gauss-Legendre order must be >= 1");
    if (n == 1) {
      nodes_[0] = 0.0;
      weights_[0] = 2.0;
      return;
    }
    // Newton iteration on P_n from the Tricomi initial guess.
    auto legendre = [n](double x) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      return std::pair{p1, dp};
    };
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        const auto [p, dp] = legendre(x);
        const double dx = p / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      const double dp = legendre(x).second;
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      const auto lo = static_cast<std::size_t>(i);
      const auto hi = static_cast<std::size_t>(n - 1 - i);
      nodes_[lo] = -x;
      nodes_[hi] = x;
      weights_[lo] = w;
      weights_[hi] = w;
    }
    if (n % 2 == 1) nodes_[static_cast<std::size_t>(n / 2)] = 0.0;
  }

  [[nodiscard]] std::span<const double> nodes() const { return nodes_; }
  [[nodiscard]] std::span<const double> weights() const { return weights_; }
  [[nodiscard]] int order() const { return static_cast<int>(nodes_.size()); }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

inline const GaussLegendreRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussLegendreRule>(n);
  return *slot;
}

namespace detail {

template <class T>
double magnitude(const T& v) {
  return std::abs(v);
}

template <class F, class R>
R panel_rule(const F& f, const GaussLegendreRule& rule, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  R sum{};
  const auto x = rule.nodes();
  const auto w = rule.weights();
  for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * f(mid + half * x[i]);
  return sum * half;
}

template <class R>
struct Panel {
  double a, b;
  R whole;  // rule over [a, b]
  R left;   // rule over [a, m]
  R right;  // rule over [m, b]
  double err;
  std::size_t id;
};

}  // namespace detail

/// Integrates f over [breaks.front(), breaks.back()], never placing a panel
/// across an interior break. Panels with the largest error estimate are
/// bisected until the summed estimate meets max(abs_tol, rel_tol * |value|).
template <class F>
auto integrate(const F& f, std::span<const double> breaks, const QuadratureOptions& opt = {})
    -> QuadratureResult<std::decay_t<std::invoke_result_t<const F&, double>>> {
  using R = std::decay_t<std::invoke_result_t<const F&, double>>;
  using P = detail::Panel<R>;
  QuadratureResult<R> out;
  if (breaks.size() < 2) {
    out.converged = true;
    return out;
  }
  const auto& rule = gauss_legendre(opt.order);

  auto cmp = [](const P& x, const P& y) {
    if (x.err != y.err) return x.err < y.err;
    return x.id > y.id;
  };
  std::vector<P> heap;
  std::size_t next_id = 0;

  auto make_panel = [&](double a, double b, const R& whole) {
    const double m = 0.5 * (a + b);
    P p{a, b, whole, detail::panel_rule<F, R>(f, rule, a, m), detail::panel_rule<F, R>(f, rule, m, b), 0.0,
        next_id++};
    p.err = detail::magnitude(R(p.left + p.right - p.whole));
    return p;
  };

  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    const double a = breaks[s];
    const double b = breaks[s + 1];
    if (!(b > a)) continue;
    int pieces = std::max(1, opt.min_panels);
    if (opt.max_panel_width > 0.0) {
      pieces = std::max(pieces, static_cast<int>(std::ceil((b - a) / opt.max_panel_width)));
    }
    const double h = (b - a) / pieces;
    for (int i = 0; i < pieces; ++i) {
      const double lo = a + i * h;
      const double hi = (i + 1 == pieces) ? b : a + (i + 1) * h;
      heap.push_back(make_panel(lo, hi, detail::panel_rule<F, R>(f, rule, lo, hi)));
    }
  }
  std::make_heap(heap.begin(), heap.end(), cmp);

  // Sums are formed in left-to-right panel order so the result does not
  // depend on heap layout.
  auto totals = [&]() {
    std::vector<const P*> order;
    order.reserve(heap.size());
    for (const auto& p : heap) order.push_back(&p);
    std::sort(order.begin(), order.end(), [](const P* x, const P* y) { return x->a < y->a; });
    R v{};
    double e = 0.0;
    for (const P* p : order) {
      v += p->left + p->right;
      e += p->err;
    }
    return std::pair{v, e};
  };

  auto [value, total_err] = totals();
  bool ok = false;
  int splits = 0;
  while (true) {
    const double tol = std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(value));
    if (total_err <= tol) {
      ok = true;
      break;
    }
    if (static_cast<int>(heap.size()) >= opt.max_panels || heap.empty()) break;
    std::pop_heap(heap.begin(), heap.end(), cmp);
    P worst = heap.back();
    const double m = 0.5 * (worst.a + worst.b);
    if (!(m > worst.a && m < worst.b)) {
      std::push_heap(heap.begin(), heap.end(), cmp);
      break;
    }
    heap.pop_back();
    P l = make_panel(worst.a, m, worst.left);
    P r = make_panel(m, worst.b, worst.right);
    value += (l.left + l.right + r.left + r.right) - (worst.left + worst.right);
    total_err += l.err + r.err - worst.err;
    heap.push_back(std::move(l));
    std::push_heap(heap.begin(), heap.end(), cmp);
    heap.push_back(std::move(r));
    std::push_heap(heap.begin(), heap.end(), cmp);
    if (++splits % 64 == 0) std::tie(value, total_err) = totals();
  }
  std::tie(out.value, out.error) = totals();
  out.panels = static_cast<int>(heap.size());
  out.converged = ok;
  return out;
}

template <class F>
auto integrate(const F& f, double a, double b, const QuadratureOptions& opt = {}) {
  const double br[2] = {a, b};
  return integrate(f, std::span<const double>(br, 2), opt);
}

template <class T>
const QuadratureResult<T>& require_converged(const QuadratureResult<T>& r, const std::string& what) {
  if (!r.converged) {
    throw QuadratureError("quadrature did not converge: " + what + " (error estimate " + std::to_string(r.error) +
                          ", panels " + std::to_string(r.panels) + ")");
  }
  return r;
}

}  // namespace wavebound
