#pragma once

// JSON encoding of the ledger, plans, bounds and reports, and the run
// configuration read by the command-line tool.

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wavebound/bounds.hpp"
#include "wavebound/condition_report.hpp"
#include "wavebound/constants.hpp"
#include "wavebound/error.hpp"
#include "wavebound/simulate.hpp"
#include "wavebound/spectral.hpp"

#ifndef WAVEBOUND_VERSION
#define WAVEBOUND_VERSION "0.0.0"
#endif

namespace wavebound {

using nlohmann::json;

namespace detail {

// Non-finite values are written as null (JSON has no inf) and read back
// as +infinity.
inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline double read_number(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

}  // namespace detail

// ExpansionPlan

inline void to_json(json& j, const ExpansionPlan& p) { j = json{{"n", p.n}, {"k0p", p.k0p}, {"kj", p.kj}}; }

inline void from_json(const json& j, ExpansionPlan& p) {
  j.at("n").get_to(p.n);
  j.at("k0p").get_to(p.k0p);
  j.at("kj").get_to(p.kj);
}

// BoundConstants: flat object keyed by constant name.

inline void to_json(json& j, const BoundConstants& b) {
  j = json::object();
  for (const auto& [name, v] : ledger_entries(b)) j[name] = detail::number(v);
  j["literal_B"] = b.literal_B;
}

inline void from_json(const json& j, BoundConstants& b) {
  for (auto& [name, ptr] : ledger_fields(b)) *ptr = detail::read_number(j.at(name));
  b.literal_B = j.value("literal_B", false);
}

// ConditionReport

inline void to_json(json& j, const ConditionEntry& e) {
  j = json{{"name", e.name},
           {"satisfied", e.satisfied},
           {"evidence", detail::number(e.evidence)},
           {"tolerance", detail::number(e.tolerance)},
           {"note", e.note}};
}

inline void from_json(const json& j, ConditionEntry& e) {
  j.at("name").get_to(e.name);
  j.at("satisfied").get_to(e.satisfied);
  e.evidence = detail::read_number(j.at("evidence"));
  e.tolerance = detail::read_number(j.at("tolerance"));
  e.note = j.value("note", "");
}

inline void to_json(json& j, const ConditionReport& r) {
  j = json{{"subject", r.subject}, {"all_satisfied", r.all_satisfied()}, {"entries", r.entries}, {"flags", r.flags}};
}

inline void from_json(const json& j, ConditionReport& r) {
  j.at("subject").get_to(r.subject);
  j.at("entries").get_to(r.entries);
  r.flags = j.value("flags", std::vector<std::string>{});
}

// TailBound

inline void to_json(json& j, const TailBound& t) {
  j = json{{"epsilon", detail::number(t.epsilon)},
           {"delta_eps", detail::number(t.delta_eps)},
           {"u_min", detail::number(t.u_min)}};
}

inline void from_json(const json& j, TailBound& t) {
  t.epsilon = detail::read_number(j.at("epsilon"));
  t.delta_eps = detail::read_number(j.at("delta_eps"));
  t.u_min = detail::read_number(j.at("u_min"));
}

// PlanResult

inline void to_json(json& j, const PlanResult& r) {
  j = json{{"plan", r.plan},
           {"eps_star", detail::number(r.eps_star)},
           {"epsilon", detail::number(r.epsilon)},
           {"delta_eps", detail::number(r.delta_eps)},
           {"probability", detail::number(r.probability)},
           {"terms", r.terms}};
}

inline void from_json(const json& j, PlanResult& r) {
  j.at("plan").get_to(r.plan);
  r.eps_star = detail::read_number(j.at("eps_star"));
  r.epsilon = detail::read_number(j.at("epsilon"));
  r.delta_eps = detail::read_number(j.at("delta_eps"));
  r.probability = detail::read_number(j.at("probability"));
  j.at("terms").get_to(r.terms);
}

// VerificationReport

inline void to_json(json& j, const WilsonInterval& w) {
  j = json{{"estimate", w.estimate}, {"half_width", w.half_width}, {"lower", w.lower}, {"upper", w.upper}};
}

inline void from_json(const json& j, WilsonInterval& w) {
  j.at("estimate").get_to(w.estimate);
  j.at("half_width").get_to(w.half_width);
  j.at("lower").get_to(w.lower);
  j.at("upper").get_to(w.upper);
}

inline void to_json(json& j, const VerificationReport& r) {
  json certified = json::array();
  for (double v : r.certified_tail) certified.push_back(detail::number(v));
  json us = json::array();
  for (double v : r.u_values) us.push_back(detail::number(v));
  j = json{{"plan", r.plan},
           {"eps_certified", detail::number(r.eps_certified)},
           {"delta_eps", detail::number(r.delta_eps)},
           {"ms_sup_observed", detail::number(r.ms_sup_observed)},
           {"u_values", us},
           {"empirical_tail", r.empirical_tail},
           {"certified_tail", certified},
           {"vacuous", r.vacuous},
           {"replicates", r.replicates},
           {"seed", r.seed},
           {"grid_points", r.grid_points},
           {"jitter_used", r.jitter_used},
           {"deterministic_dominance", r.deterministic_dominance},
           {"stochastic_dominance", r.stochastic_dominance},
           {"grid_note", r.grid_note}};
}

// The per-replicate sup errors travel in the CSV, not in the JSON report.
inline void from_json(const json& j, VerificationReport& r) {
  j.at("plan").get_to(r.plan);
  r.eps_certified = detail::read_number(j.at("eps_certified"));
  r.delta_eps = detail::read_number(j.at("delta_eps"));
  r.ms_sup_observed = detail::read_number(j.at("ms_sup_observed"));
  r.u_values.clear();
  for (const auto& v : j.at("u_values")) r.u_values.push_back(detail::read_number(v));
  j.at("empirical_tail").get_to(r.empirical_tail);
  r.certified_tail.clear();
  for (const auto& v : j.at("certified_tail")) r.certified_tail.push_back(detail::read_number(v));
  r.vacuous = j.at("vacuous").get<std::vector<bool>>();
  j.at("replicates").get_to(r.replicates);
  j.at("seed").get_to(r.seed);
  j.at("grid_points").get_to(r.grid_points);
  j.at("jitter_used").get_to(r.jitter_used);
  j.at("deterministic_dominance").get_to(r.deterministic_dominance);
  j.at("stochastic_dominance").get_to(r.stochastic_dominance);
  j.at("grid_note").get_to(r.grid_note);
}

inline json report_meta() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ts;
  ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return json{{"tool", "wavebound"}, {"version", WAVEBOUND_VERSION}, {"timestamp", ts.str()}};
}

/// Copy of a report without its meta block, for determinism comparisons.
inline json strip_meta(json j) {
  if (j.is_object()) j.erase("meta");
  return j;
}

// Run configuration

struct ModelSpec {
  std::string kind = "gaussian";
  json parameters = json{{"theta", 1.0}};
};

struct InjectedConstants {
  double A = 1.0, B = 1.0, C = 1.0, sigma_c = 1.0;
};

struct TargetSpec {
  double u = 0.0;
  double p = 0.0;
};

struct RunConfig {
  std::string wavelet_family = "meyer";
  ModelSpec model;
  double T = 1.0;
  double alpha = 1.0;
  double beta = 0.75;
  double delta_q = default_delta_q(0.75);
  std::optional<ExpansionPlan> plan;
  std::optional<TargetSpec> target;
  int grid_points = 257;
  int replicates = 2000;
  std::uint64_t seed = 1;
  std::string output_dir = ".";
  std::vector<double> u_values;  // empty: defaults above 8 delta
  unsigned threads = 1;
  bool literal_B = false;
  std::optional<InjectedConstants> inject_constants;
};

namespace detail {

template <class T>
T field(const json& j, const std::string& key, const std::string& path, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(path + key, std::string("wrong type: ") + e.what());
  }
}

template <class F>
void rethrow_as_config(const std::string& name, F&& f) {
  try {
    f();
  } catch (const DomainError& e) {
    throw ConfigError(name, e.what());
  }
}

}  // namespace detail

inline SpectralModel make_model(const ModelSpec& spec) {
  const auto& p = spec.parameters;
  const std::string path = "model.parameters.";
  SpectralModel m;
  detail::rethrow_as_config("model", [&] {
    if (spec.kind == "gaussian") {
      m = gaussian_model(detail::field<double>(p, "theta", path, 1.0));
    } else if (spec.kind == "gaussian_mixture") {
      m = gaussian_mixture_model(detail::field<std::vector<double>>(p, "weights", path, {}),
                                 detail::field<std::vector<double>>(p, "thetas", path, {}));
    } else if (spec.kind == "exponential") {
      m = exponential_model(detail::field<double>(p, "lambda", path, 1.0));
    } else if (spec.kind == "tabulated") {
      m = tabulated_model(detail::field<double>(p, "step", path, 0.0),
                          detail::field<std::vector<double>>(p, "values", path, {}));
    } else {
      throw ConfigError("model.kind",
                        "unknown model '" + spec.kind + "' (expected gaussian, gaussian_mixture, exponential, tabulated)");
    }
    const double scale = detail::field<double>(p, "scale", path, 1.0);
    if (scale != 1.0) m = m.scaled(scale);
  });
  return m;
}

inline WaveletPair make_wavelet(const std::string& family) {
  if (family != "meyer") throw ConfigError("wavelet.family", "unsupported family '" + family + "' (expected meyer)");
  return make_meyer();
}

/// Parses and validates a configuration document; every failure names the
/// offending field and the constraint.
inline RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config", "top level must be a JSON object");
  RunConfig c;
  if (j.contains("wavelet")) c.wavelet_family = detail::field<std::string>(j.at("wavelet"), "family", "wavelet.", "meyer");
  if (c.wavelet_family != "meyer") {
    throw ConfigError("wavelet.family", "unsupported family '" + c.wavelet_family + "' (expected meyer)");
  }
  if (j.contains("model")) {
    const auto& m = j.at("model");
    c.model.kind = detail::field<std::string>(m, "kind", "model.", "gaussian");
    c.model.parameters = m.value("parameters", json::object());
  }
  c.T = detail::field<double>(j, "T", "", c.T);
  c.alpha = detail::field<double>(j, "alpha", "", c.alpha);
  c.beta = detail::field<double>(j, "beta", "", c.beta);
  detail::rethrow_as_config("T", [&] { validate_T(c.T); });
  detail::rethrow_as_config("alpha", [&] { validate_alpha(c.alpha); });
  detail::rethrow_as_config("beta", [&] { validate_beta(c.beta); });
  c.delta_q = detail::field<double>(j, "delta_q", "", default_delta_q(c.beta));
  detail::rethrow_as_config("delta_q", [&] { validate_delta_q(c.beta, c.delta_q); });

  if (j.contains("plan") && !j.at("plan").is_null()) {
    ExpansionPlan p;
    try {
      p = j.at("plan").get<ExpansionPlan>();
    } catch (const json::exception& e) {
      throw ConfigError("plan", std::string("expected {n, k0p, kj}: ") + e.what());
    }
    detail::rethrow_as_config("plan", [&] { validate_plan(p); });
    c.plan = p;
  }
  if (j.contains("target") && !j.at("target").is_null()) {
    TargetSpec t;
    t.u = detail::field<double>(j.at("target"), "u", "target.", 0.0);
    t.p = detail::field<double>(j.at("target"), "p", "target.", 0.0);
    if (!(t.u > 0.0)) throw ConfigError("target.u", "must be > 0");
    if (!(t.p > 0.0 && t.p < 1.0)) throw ConfigError("target.p", "must lie in (0, 1)");
    c.target = t;
  }
  c.grid_points = detail::field<int>(j, "grid_points", "", c.grid_points);
  if (c.grid_points < 1 || c.grid_points > 1024) throw ConfigError("grid_points", "must lie in [1, 1024]");
  c.replicates = detail::field<int>(j, "replicates", "", c.replicates);
  if (c.replicates < 1) throw ConfigError("replicates", "must be >= 1");
  c.seed = detail::field<std::uint64_t>(j, "seed", "", c.seed);
  c.output_dir = detail::field<std::string>(j, "output_dir", "", c.output_dir);
  c.u_values = detail::field<std::vector<double>>(j, "u_values", "", {});
  for (double u : c.u_values)
    if (!(u > 0.0)) throw ConfigError("u_values", "entries must be > 0");
  c.threads = detail::field<unsigned>(j, "threads", "", c.threads);
  c.literal_B = detail::field<bool>(j, "literal_B", "", false);
  if (j.contains("inject_constants") && !j.at("inject_constants").is_null()) {
    const auto& ic = j.at("inject_constants");
    InjectedConstants k;
    k.A = detail::field<double>(ic, "A", "inject_constants.", k.A);
    k.B = detail::field<double>(ic, "B", "inject_constants.", k.B);
    k.C = detail::field<double>(ic, "C", "inject_constants.", k.C);
    k.sigma_c = detail::field<double>(ic, "sigma_c", "inject_constants.", k.sigma_c);
    for (double v : {k.A, k.B, k.C, k.sigma_c})
      if (!(v > 0.0)) throw ConfigError("inject_constants", "A, B, C and sigma_c must be > 0");
    c.inject_constants = k;
  }
  // Construct the model now so parameter errors surface as config errors.
  (void)make_model(c.model);
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

inline void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

/// "seed_offset,sup_error" rows, values with 17 significant digits.
inline std::string replicate_csv(const std::vector<double>& sup_errors) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "seed_offset,sup_error\n" << std::setprecision(17);
  for (std::size_t r = 0; r < sup_errors.size(); ++r) os << r << ',' << sup_errors[r] << '\n';
  return os.str();
}

}  // namespace wavebound
