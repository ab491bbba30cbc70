// Constants, a selected plan and a short Monte Carlo check for a Gaussian
// spectral density on [0, 1].

#include <iostream>

#include "wavebound/wavebound.hpp"

int main() {
  using namespace wavebound;
  const auto w = make_meyer();
  const auto m = gaussian_model(1.0);
  const auto k = assemble(w, m, 1.0, 1.0, 0.75, default_delta_q(0.75));
  std::cout << "A=" << k.A << " B=" << k.B << " C=" << k.C << " sigma_c=" << k.sigma_c << '\n';

  const double p = 0.05;
  const auto tb0 = make_tail_bound(ExpansionPlan{1, 2, {2}}, k);
  const double u = 1.5 * tb0.u_min;
  const auto r = select_plan(u, p, k);
  std::cout << "plan for u=" << u << " p=" << p << ": n=" << r.plan.n << " k0p=" << r.plan.k0p << " terms=" << r.terms
            << '\n';

  CovarianceCache cache(w, m);
  const auto grid = uniform_grid(1.0, 65);
  const auto small = ExpansionPlan{1, 2, {2}};
  const auto rep = empirical_tail(cache, k, small, grid, default_u_values(small, k), 1000, 7);
  std::cout << "mean-square sup " << rep.ms_sup_observed << " vs certified epsilon " << rep.eps_certified << '\n';
  std::cout << "dominance: " << (rep.deterministic_dominance && rep.stochastic_dominance ? "holds" : "violated")
            << '\n';
}
