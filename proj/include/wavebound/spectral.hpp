#pragma once

// Stationary Gaussian process models described by their spectral density
// R_hat(z) = int e^{-iz tau} R(tau) d tau, and the process-side conditions.

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "wavebound/condition_report.hpp"
#include "wavebound/error.hpp"
#include "wavebound/quadrature.hpp"

namespace wavebound {

// amplitude * |z|^power * exp(-rate z^2)
struct GaussianTailTerm {
  double amplitude = 0.0;
  double power = 0.0;
  double rate = 0.0;
};

/// Majorant of |f(z)| for |z| >= start: a sum of Gaussian terms plus an
/// optional power law amplitude |z|^{-exponent}. Used to certify the
/// truncation remainder of improper moment integrals.
struct TailEnvelope {
  std::vector<GaussianTailTerm> gaussian;
  double power_amplitude = 0.0;
  double power_exponent = 0.0;
  double start = 0.0;

  /// Upper bound on int_Z^inf envelope(z) z^m dz (infinite if divergent).
  [[nodiscard]] double moment_tail(double m, double Z) const {
    double total = 0.0;
    for (const auto& g : gaussian) {
      const double q = g.power + m;
      const double a = 0.5 * (q + 1.0);
      total += g.amplitude * 0.5 * std::pow(g.rate, -a) * boost::math::tgamma(a, g.rate * Z * Z);
    }
    if (power_amplitude > 0.0) {
      const double e = power_exponent - m - 1.0;
      if (!(e > 0.0)) return std::numeric_limits<double>::infinity();
      total += power_amplitude * std::pow(Z, -e) / e;
    }
    return total;
  }

  [[nodiscard]] TailEnvelope scaled(double lambda) const {
    TailEnvelope t = *this;
    for (auto& g : t.gaussian) g.amplitude *= lambda;
    t.power_amplitude *= lambda;
    return t;
  }
};

struct DecayTag {
  std::string description;
  bool verifiable = true;  // false: the model carries no tail majorant
  TailEnvelope r_hat;
  TailEnvelope r_hat_d1;
  // r_hat vanishes beyond this frequency (infinity for unbounded support).
  double support_limit = std::numeric_limits<double>::infinity();
  // Frequency below which most of the mass sits; seeds truncation searches.
  double scale = 1.0;
};

struct SpectralModel {
  std::string kind;
  std::vector<double> parameters;
  std::function<double(double)> r_hat;
  std::function<double(double)> r_hat_d1;
  std::function<double(double)> autocov;  // empty when no closed form exists
  DecayTag decay_tag;
  bool smooth = true;  // r_hat is continuously differentiable
  double amplitude = 1.0;  // accumulated factor applied by scaled()

  /// The model with density lambda * R_hat (and covariance lambda * R).
  [[nodiscard]] SpectralModel scaled(double lambda) const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("scaled: lambda must be positive");
    SpectralModel m = *this;
    auto rh = r_hat;
    auto rd = r_hat_d1;
    m.r_hat = [rh, lambda](double z) { return lambda * rh(z); };
    m.r_hat_d1 = [rd, lambda](double z) { return lambda * rd(z); };
    if (autocov) {
      auto ac = autocov;
      m.autocov = [ac, lambda](double t) { return lambda * ac(t); };
    }
    m.decay_tag.r_hat = decay_tag.r_hat.scaled(lambda);
    m.decay_tag.r_hat_d1 = decay_tag.r_hat_d1.scaled(lambda);
    m.amplitude = amplitude * lambda;
    return m;
  }
};

/// R(tau) = exp(-tau^2/theta^2), R_hat(z) = theta sqrt(pi) exp(-theta^2 z^2/4).
inline SpectralModel gaussian_model(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw DomainError("gaussian_model: theta must be > 0, got " + std::to_string(theta));
  }
  const double amp = theta * std::sqrt(std::numbers::pi);
  const double rate = theta * theta / 4.0;
  SpectralModel m;
  m.kind = "gaussian";
  m.parameters = {theta};
  m.r_hat = [amp, rate](double z) { return amp * std::exp(-rate * z * z); };
  m.r_hat_d1 = [amp, rate](double z) { return -2.0 * rate * z * amp * std::exp(-rate * z * z); };
  m.autocov = [theta](double t) { return std::exp(-(t * t) / (theta * theta)); };
  m.decay_tag.description = "gaussian";
  m.decay_tag.r_hat.gaussian = {{amp, 0.0, rate}};
  m.decay_tag.r_hat_d1.gaussian = {{2.0 * rate * amp, 1.0, rate}};
  m.decay_tag.scale = 2.0 / theta;
  return m;
}

/// sum_i w_i gaussian_model(theta_i), w_i > 0.
inline SpectralModel gaussian_mixture_model(const std::vector<double>& weights, const std::vector<double>& thetas) {
  if (weights.empty() || weights.size() != thetas.size()) {
    throw DomainError("gaussian_mixture_model: weights and thetas must be non-empty and of equal length");
  }
  std::vector<SpectralModel> parts;
  double scale = 0.0;
  SpectralModel m;
  m.kind = "gaussian_mixture";
  m.decay_tag.description = "gaussian";
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw DomainError("gaussian_mixture_model: weights must be > 0");
    }
    auto g = gaussian_model(thetas[i]).scaled(weights[i]);
    g.amplitude = 1.0;
    scale = std::max(scale, g.decay_tag.scale);
    for (const auto& t : g.decay_tag.r_hat.gaussian) m.decay_tag.r_hat.gaussian.push_back(t);
    for (const auto& t : g.decay_tag.r_hat_d1.gaussian) m.decay_tag.r_hat_d1.gaussian.push_back(t);
    m.parameters.push_back(weights[i]);
    m.parameters.push_back(thetas[i]);
    parts.push_back(std::move(g));
  }
  auto sum = [parts](auto member) {
    return [parts, member](double x) {
      double s = 0.0;
      for (const auto& p : parts) s += (p.*member)(x);
      return s;
    };
  };
  m.r_hat = sum(&SpectralModel::r_hat);
  m.r_hat_d1 = sum(&SpectralModel::r_hat_d1);
  m.autocov = sum(&SpectralModel::autocov);
  m.decay_tag.scale = scale;
  return m;
}

/// Ornstein-Uhlenbeck covariance R(tau) = exp(-lambda |tau|),
/// R_hat(z) = 2 lambda / (lambda^2 + z^2). Its R_hat has only a power-law tail.
inline SpectralModel exponential_model(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("exponential_model: lambda must be > 0, got " + std::to_string(lambda));
  }
  SpectralModel m;
  m.kind = "exponential";
  m.parameters = {lambda};
  m.r_hat = [lambda](double z) { return 2.0 * lambda / (lambda * lambda + z * z); };
  m.r_hat_d1 = [lambda](double z) {
    const double d = lambda * lambda + z * z;
    return -4.0 * lambda * z / (d * d);
  };
  m.autocov = [lambda](double t) { return std::exp(-lambda * std::abs(t)); };
  m.decay_tag.description = "power law |z|^-2";
  m.decay_tag.r_hat.power_amplitude = 2.0 * lambda;
  m.decay_tag.r_hat.power_exponent = 2.0;
  m.decay_tag.r_hat_d1.power_amplitude = 4.0 * lambda;
  m.decay_tag.r_hat_d1.power_exponent = 3.0;
  m.decay_tag.scale = lambda;
  return m;
}

/// Band-limited white noise: R_hat = level on |z| <= limit, so
/// R(tau) = level sin(limit tau)/(pi tau). R_hat is discontinuous at the band
/// edge, so the derivative conditions fail; useful for Parseval checks.
inline SpectralModel flat_band_model(double limit, double level = 1.0) {
  if (!(limit > 0.0) || !(level > 0.0)) throw DomainError("flat_band_model: limit and level must be > 0");
  SpectralModel m;
  m.kind = "flat_band";
  m.parameters = {limit, level};
  m.r_hat = [limit, level](double z) { return std::abs(z) <= limit ? level : 0.0; };
  m.r_hat_d1 = [](double) { return 0.0; };
  m.autocov = [limit, level](double t) {
    if (std::abs(t) < 1e-8) return level * limit / std::numbers::pi * (1.0 - limit * limit * t * t / 6.0);
    return level * std::sin(limit * t) / (std::numbers::pi * t);
  };
  m.decay_tag.description = "compact support";
  m.decay_tag.support_limit = limit;
  m.decay_tag.scale = limit;
  m.smooth = false;
  return m;
}

/// User-supplied density values at z = 0, h, 2h, ..., extended evenly and
/// interpolated by a cubic B-spline with zero slope at the origin. The
/// density is taken as zero beyond the last node; since nothing is known
/// about the true tail the model is flagged as unverifiable there.
inline SpectralModel tabulated_model(double step, const std::vector<double>& values) {
  if (!(step > 0.0)) throw DomainError("tabulated_model: step must be > 0");
  if (values.size() < 4) throw DomainError("tabulated_model: need at least 4 values");
  for (double v : values)
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("tabulated_model: values must be finite and >= 0");
  using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
  auto spline = std::make_shared<Spline>(values.begin(), values.end(), 0.0, step, 0.0);
  const double zmax = step * static_cast<double>(values.size() - 1);
  SpectralModel m;
  m.kind = "tabulated";
  m.parameters = {step};
  m.parameters.insert(m.parameters.end(), values.begin(), values.end());
  m.r_hat = [spline, zmax](double z) {
    const double a = std::abs(z);
    if (a > zmax) return 0.0;
    return std::max(0.0, (*spline)(a));
  };
  m.r_hat_d1 = [spline, zmax](double z) {
    const double a = std::abs(z);
    if (a > zmax) return 0.0;
    if ((*spline)(a) <= 0.0) return 0.0;
    const double d = spline->prime(a);
    return z < 0.0 ? -d : d;
  };
  m.decay_tag.description = "tabulated";
  m.decay_tag.verifiable = false;
  m.decay_tag.support_limit = zmax;
  m.decay_tag.scale = zmax / 4.0;
  return m;
}

struct MomentResult {
  double value = 0.0;       // truncated integral plus tail bound
  double truncated = 0.0;   // int_{|z|<=Z}
  double tail_bound = 0.0;  // certified bound on the remainder
  double cutoff = 0.0;      // Z
  bool finite = true;
};

namespace detail {

inline std::vector<double> geometric_breaks(double scale, double Z) {
  std::vector<double> b{0.0};
  double x = std::min(scale, Z);
  while (x < Z) {
    b.push_back(x);
    x *= 2.0;
  }
  b.push_back(Z);
  return b;
}

}  // namespace detail

/// int |R_hat^{(p)}(z)| |z|^m dz over the real line (p = 0 or 1). The
/// integral is truncated at the smallest Z (doubling from the model scale)
/// whose certified remainder is below 1e-12 of the truncated value.
inline MomentResult spectral_moment(const SpectralModel& model, int p, double m, const QuadratureOptions& quad = {}) {
  if (p != 0 && p != 1) throw DomainError("spectral_moment: derivative order must be 0 or 1");
  const auto& f = p == 0 ? model.r_hat : model.r_hat_d1;
  const auto& env = p == 0 ? model.decay_tag.r_hat : model.decay_tag.r_hat_d1;
  auto integrand = [&](double z) { return std::abs(f(z)) * std::pow(z, m); };
  const double scale = model.decay_tag.scale;
  MomentResult r;
  auto truncated = [&](double Z) {
    const auto br = detail::geometric_breaks(scale, Z);
    return 2.0 * require_converged(integrate(integrand, std::span<const double>(br), quad), "spectral moment").value;
  };
  if (std::isfinite(model.decay_tag.support_limit)) {
    r.cutoff = model.decay_tag.support_limit;
    r.truncated = truncated(r.cutoff);
    r.value = r.truncated;
    return r;
  }
  if (env.moment_tail(m, 1.0) == std::numeric_limits<double>::infinity()) {
    r.finite = false;
    r.value = r.tail_bound = std::numeric_limits<double>::infinity();
    return r;
  }
  double Z = std::max(4.0 * scale, env.start);
  for (int it = 0; it < 60; ++it, Z *= 2.0) {
    const double tail = 2.0 * env.moment_tail(m, Z);
    const double inner = truncated(Z);
    if (tail <= 1e-12 * inner || (inner == 0.0 && tail == 0.0)) {
      r.cutoff = Z;
      r.truncated = inner;
      r.tail_bound = tail;
      r.value = inner + tail;
      return r;
    }
  }
  throw QuadratureError("spectral_moment: tail remainder not certified below 1e-12 relative");
}

/// (1/2pi) int R_hat(z) cos(tau z) dz by quadrature.
inline double autocovariance_quadrature(const SpectralModel& model, double tau, const QuadratureOptions& quad = {}) {
  const double Z = std::isfinite(model.decay_tag.support_limit) ? model.decay_tag.support_limit
                                                                : spectral_moment(model, 0, 0.0, quad).cutoff;
  if (Z * std::abs(tau) > 1e6) {
    throw QuadratureError("autocovariance_quadrature: frequency cutoff " + std::to_string(Z) +
                          " too large for an oscillatory quadrature at this lag");
  }
  auto br = detail::geometric_breaks(model.decay_tag.scale, Z);
  QuadratureOptions q = quad;
  q.max_panel_width = 2.0 * std::numbers::pi / (std::abs(tau) + 1.0);
  auto g = [&](double z) { return model.r_hat(z) * std::cos(tau * z); };
  const double v = require_converged(integrate(g, std::span<const double>(br), q), "autocovariance").value;
  return v / std::numbers::pi;
}

inline double autocovariance(const SpectralModel& model, double tau, const QuadratureOptions& quad = {}) {
  if (model.autocov) return model.autocov(tau);
  return autocovariance_quadrature(model, tau, quad);
}

/// Process-side conditions: bounded density, integrable derivative and
/// finite fourth moments of R_hat and R_hat', plus evenness, positivity and
/// agreement of R(0) with the density mass.
inline ConditionReport check_spectral_conditions(const SpectralModel& model, const QuadratureOptions& quad = {}) {
  ConditionReport r;
  r.subject = "spectral:" + model.kind;
  if (!model.decay_tag.verifiable) r.flags.push_back("conditions unverifiable in tails");

  const double zgrid = std::isfinite(model.decay_tag.support_limit) ? model.decay_tag.support_limit
                                                                      : 8.0 * model.decay_tag.scale;
  double sup = 0.0;
  double parity = 0.0;
  double minimum = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 1000; ++i) {
    const double z = zgrid * i / 999.0;
    const double v = model.r_hat(z);
    sup = std::max(sup, v);
    minimum = std::min({minimum, v, model.r_hat(-z)});
    parity = std::max(parity, std::abs(v - model.r_hat(-z)));
  }
  r.add("density.even", parity == 0.0, parity, 0.0);
  r.add("density.nonnegative", minimum >= 0.0, minimum, 0.0);
  r.add("cond5.sup_r_hat", std::isfinite(sup), sup, 0.0, "grid sup of R_hat");

  auto record = [&](const std::string& name, int p, double m, const std::string& what) {
    try {
      const auto mr = spectral_moment(model, p, m, quad);
      r.add(name, mr.finite, mr.value, mr.tail_bound, what + "; tolerance column holds the certified tail bound");
    } catch (const QuadratureError& e) {
      r.add(name, false, std::numeric_limits<double>::infinity(), 0.0, e.what());
    }
  };
  if (model.smooth) {
    record("cond5.r_hat_d1_L1", 1, 0.0, "int |R_hat'|");
  } else {
    r.add("cond5.r_hat_d1_L1", false, std::numeric_limits<double>::infinity(), 0.0, "R_hat is not differentiable");
  }
  record("cond6.r_hat_z4", 0, 4.0, "int |R_hat| z^4");
  if (model.smooth) {
    record("cond6.r_hat_d1_z4", 1, 4.0, "int |R_hat'| z^4");
  } else {
    r.add("cond6.r_hat_d1_z4", false, std::numeric_limits<double>::infinity(), 0.0, "R_hat is not differentiable");
  }

  const auto mass = spectral_moment(model, 0, 0.0, quad);
  if (model.autocov && mass.finite) {
    const double diff = std::abs(model.autocov(0.0) - mass.value / (2.0 * std::numbers::pi));
    r.add("density.bochner_at_zero", diff <= 1e-8, diff, 1e-8, "|R(0) - (1/2pi) int R_hat|");
  }
  return r;
}

}  // namespace wavebound
