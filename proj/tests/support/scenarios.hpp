#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "fimsim/cases.hpp"
#include "fimsim/simulator.hpp"
#include "fimsim/step_problem.hpp"

namespace scenarios {

// Closed box started from a randomly perturbed state and stepped directly
// with the step problem. Returns the largest relative drift of either
// phase's mass over all steps.
inline double closed_box_drift(int nx, int ny, int nz, int steps, double dt, int workers, unsigned seed = 5) {
  using namespace fimsim;
  Deck d = make_closed_box_deck(nx, ny, nz);
  const auto model = build_model(d);
  const auto part = partition_grid(model.grid, workers);
  FimAssembler as(model, part, {});
  auto state = initialize_equilibrium(*d.equil, model);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dp(-50.0, 50.0), ds(0.1, 0.6);
  for (std::size_t c = 0; c < state.p.size(); ++c) {
    state.p[c] += dp(rng);
    state.s[c] = 0.2 + ds(rng);
  }
  const auto m0 = mass_in_place(model, state);
  double drift = 0.0;
  for (int k = 0; k < steps; ++k) {
    ReservoirStepProblem problem(as, state, dt, {}, d.solver.linear);
    auto x = as.pack(state);
    NewtonConfig cfg = d.solver.newton;
    cfg.mode = NewtonMode::Standard;
    cfg.linear_tol_fixed = 1e-10;
    const auto r = newton_solve(problem, x, cfg);
    if (!r.converged) return INFINITY;
    as.unpack(x, state);
    const auto m = mass_in_place(model, state);
    for (int ph = 0; ph < 2; ++ph) drift = std::max(drift, std::abs(m[ph] - m0[ph]) / m0[ph]);
  }
  return drift;
}

}  // namespace scenarios
