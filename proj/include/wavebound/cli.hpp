#pragma once

// Subcommand implementations behind the wavebound tool. Each writes its
// artifacts into cfg.output_dir and returns the process exit status.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <ostream>
#include <sstream>
#include <string>

#include "wavebound/bounds.hpp"
#include "wavebound/constants.hpp"
#include "wavebound/error.hpp"
#include "wavebound/io.hpp"
#include "wavebound/simulate.hpp"

namespace wavebound::cli {

enum ExitCode : int {
  ok = 0,
  other_error = 1,
  config_error = 2,
  condition_failure = 3,
  infeasible_plan = 4,
  factorization_failure = 5,
};

inline BoundConstants constants_for(const RunConfig& cfg, const WaveletPair& w, const SpectralModel& m) {
  if (cfg.inject_constants) {
    BoundConstants b;
    b.alpha = cfg.alpha;
    b.beta = cfg.beta;
    b.delta_q = cfg.delta_q;
    b.T = cfg.T;
    b.A = cfg.inject_constants->A;
    b.B = cfg.inject_constants->B;
    b.C = cfg.inject_constants->C;
    b.sigma_c = cfg.inject_constants->sigma_c;
    return b;
  }
  ConstantsOptions opt;
  opt.literal_B = cfg.literal_B;
  return assemble(w, m, cfg.T, cfg.alpha, cfg.beta, cfg.delta_q, opt);
}

inline std::filesystem::path output_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.output_dir);
  return std::filesystem::path(cfg.output_dir) / name;
}

inline ExpansionPlan plan_for(const RunConfig& cfg, const BoundConstants& k) {
  if (cfg.plan) return *cfg.plan;
  if (cfg.target) return select_plan(cfg.target->u, cfg.target->p, k).plan;
  throw ConfigError("plan", "this subcommand needs either plan or target");
}

inline int run_check(const RunConfig& cfg, std::ostream& log) {
  const auto w = make_wavelet(cfg.wavelet_family);
  const auto m = make_model(cfg.model);
  const auto wr = check_conditions(w, cfg.alpha, 1.0 - cfg.beta);
  const auto sr = check_spectral_conditions(m);
  const bool all = wr.all_satisfied() && sr.all_satisfied();
  json out{{"meta", report_meta()}, {"wavelet", wr}, {"spectral", sr}, {"all_satisfied", all}};
  const auto path = output_path(cfg, "check.json");
  write_json(path.string(), out);
  log << "check: " << (all ? "all conditions satisfied" : "condition failure") << " -> " << path.string() << '\n';
  if (!all) {
    for (const auto& f : wr.failures()) log << "  failed: " << f << '\n';
    for (const auto& f : sr.failures()) log << "  failed: " << f << '\n';
  }
  return all ? ok : condition_failure;
}

inline int run_constants(const RunConfig& cfg, std::ostream& log) {
  const auto w = make_wavelet(cfg.wavelet_family);
  const auto m = make_model(cfg.model);
  const auto k = constants_for(cfg, w, m);
  json out = k;
  out["meta"] = report_meta();
  const auto path = output_path(cfg, "constants.json");
  write_json(path.string(), out);
  log << "constants: A=" << k.A << " B=" << k.B << " C=" << k.C << " sigma_c=" << k.sigma_c << " -> "
      << path.string() << '\n';
  return ok;
}

inline int run_bound(const RunConfig& cfg, std::ostream& log) {
  if (!cfg.plan) throw ConfigError("plan", "the bound subcommand needs a plan {n, k0p, kj}");
  const auto w = make_wavelet(cfg.wavelet_family);
  const auto m = make_model(cfg.model);
  const auto k = constants_for(cfg, w, m);
  const auto tb = make_tail_bound(*cfg.plan, k);
  std::vector<double> us = cfg.u_values;
  if (cfg.target) us.push_back(cfg.target->u);
  json evals = json::array();
  for (double u : us) {
    const auto p = tb(u);
    evals.push_back(json{{"u", u}, {"probability", p.probability}, {"raw", p.raw}, {"vacuous", p.vacuous}});
  }
  json out{{"meta", report_meta()}, {"plan", *cfg.plan}, {"tail_bound", tb}, {"evaluations", evals}};
  const auto path = output_path(cfg, "bound.json");
  write_json(path.string(), out);
  log << std::setprecision(10) << "bound: epsilon=" << tb.epsilon << " delta=" << tb.delta_eps << " u_min=" << tb.u_min
      << " -> " << path.string() << '\n';
  return ok;
}

inline int run_plan(const RunConfig& cfg, std::ostream& log) {
  if (!cfg.target) throw ConfigError("target", "the plan subcommand needs a target {u, p}");
  const auto w = make_wavelet(cfg.wavelet_family);
  const auto m = make_model(cfg.model);
  const auto k = constants_for(cfg, w, m);
  const auto r = select_plan(cfg.target->u, cfg.target->p, k);
  json out = r;
  out["meta"] = report_meta();
  const auto path = output_path(cfg, "plan.json");
  write_json(path.string(), out);
  log << "plan: n=" << r.plan.n << " k0p=" << r.plan.k0p << " terms=" << r.terms << " epsilon=" << r.epsilon
      << " -> " << path.string() << '\n';
  return ok;
}

inline int run_simulate(const RunConfig& cfg, std::ostream& log) {
  const auto w = make_wavelet(cfg.wavelet_family);
  const auto m = make_model(cfg.model);
  const auto k = constants_for(cfg, w, m);
  const auto plan = plan_for(cfg, k);
  CovarianceCache cache(w, m, {}, ExecutionOptions{cfg.threads});
  const auto grid = uniform_grid(cfg.T, cfg.grid_points);
  const auto spec = build_joint(cache, plan, grid);
  const auto draws = sample_joint(spec, cfg.replicates, cfg.seed, cache.exec());
  const auto G = spec.grid_size();
  const auto N = spec.coef_size();
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "replicate,t,x,x_n\n" << std::setprecision(17);
  for (Eigen::Index r = 0; r < draws.cols(); ++r) {
    const Eigen::VectorXd xn = spec.basis * draws.col(r).tail(N);
    for (Eigen::Index g = 0; g < G; ++g) {
      os << r << ',' << grid[static_cast<std::size_t>(g)] << ',' << draws(g, r) << ',' << xn(g) << '\n';
    }
  }
  const auto path = output_path(cfg, "paths.csv");
  std::ofstream(path) << os.str();
  log << "simulate: " << cfg.replicates << " paths on " << G << " points, jitter " << spec.jitter_used << " -> "
      << path.string() << '\n';
  return ok;
}

inline int run_verify(const RunConfig& cfg, std::ostream& log) {
  const auto w = make_wavelet(cfg.wavelet_family);
  const auto m = make_model(cfg.model);
  const auto k = constants_for(cfg, w, m);
  const auto plan = plan_for(cfg, k);
  CovarianceCache cache(w, m, {}, ExecutionOptions{cfg.threads});
  const auto grid = uniform_grid(cfg.T, cfg.grid_points);
  const auto us = cfg.u_values.empty() ? default_u_values(plan, k) : cfg.u_values;
  const auto rep = empirical_tail(cache, k, plan, grid, us, cfg.replicates, cfg.seed);
  json out = rep;
  out["meta"] = report_meta();
  const auto jpath = output_path(cfg, "verify.json");
  write_json(jpath.string(), out);
  const auto cpath = output_path(cfg, "replicates.csv");
  std::ofstream(cpath) << replicate_csv(rep.sup_errors);
  log << "verify: deterministic " << (rep.deterministic_dominance ? "ok" : "VIOLATED") << ", stochastic "
      << (rep.stochastic_dominance ? "ok" : "VIOLATED") << " -> " << jpath.string() << '\n';
  return rep.deterministic_dominance && rep.stochastic_dominance ? ok : condition_failure;
}

/// Runs a subcommand and maps failures onto exit codes.
inline int run(const std::string& sub, const RunConfig& cfg, std::ostream& log = std::cout,
               std::ostream& err = std::cerr) {
  try {
    if (sub == "check") return run_check(cfg, log);
    if (sub == "constants") return run_constants(cfg, log);
    if (sub == "bound") return run_bound(cfg, log);
    if (sub == "plan") return run_plan(cfg, log);
    if (sub == "simulate") return run_simulate(cfg, log);
    if (sub == "verify") return run_verify(cfg, log);
    err << "error: unknown subcommand '" << sub << "'\n";
    return config_error;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const ConditionError& e) {
    err << "condition failure: " << e.what() << '\n';
    return condition_failure;
  } catch (const InfeasiblePlanError& e) {
    err << "infeasible plan: " << e.what() << '\n';
    return infeasible_plan;
  } catch (const FactorizationError& e) {
    err << "factorization failure: " << e.what() << '\n';
    return factorization_failure;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return other_error;
  }
}

}  // namespace wavebound::cli
