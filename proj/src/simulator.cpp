#include "fimsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "fimsim/error.hpp"
#include "fimsim/step_problem.hpp"

namespace fimsim {

SolverConfig resolve_config(const Deck& deck, const RunOverrides& ov) {
  SolverConfig cfg = deck.solver;
  if (ov.krylov) cfg.linear.krylov = *ov.krylov;
  if (ov.restart) cfg.linear.restart = *ov.restart;
  if (ov.max_linear) cfg.linear.max_iter = *ov.max_linear;
  if (ov.precond) cfg.linear.precond = *ov.precond;
  if (ov.overlap) cfg.linear.overlap = *ov.overlap;
  if (ov.decoupling) cfg.linear.decoupling = *ov.decoupling;
  if (ov.reorder) cfg.linear.reorder = *ov.reorder;
  if (ov.newton) cfg.newton.mode = *ov.newton;
  if (ov.nltol) cfg.newton.epsilon = *ov.nltol;
  if (ov.lintol) cfg.newton.linear_tol_fixed = *ov.lintol;
  if (ov.max_dt) {
    cfg.timestep.dt_max = *ov.max_dt;
    cfg.timestep.dt_init = std::min(cfg.timestep.dt_init, *ov.max_dt);
  }
  cfg.newton.validate();
  cfg.timestep.validate();
  return cfg;
}

std::array<double, 2> mass_in_place(const ReservoirModel& model, const SimulationState& state) {
  std::array<double, 2> m{};
  for (std::size_t c = 0; c < model.grid.num_cells(); ++c) {
    const auto props = evaluate_cell(state.p[c], state.s[c], model.grid.phi_ref(c), model.fluid);
    const double v = model.grid.volume(c);
    m[0] += v * props.mass_o;
    m[1] += v * props.mass_w;
  }
  return m;
}

std::array<double, 2> material_balance(const MassLedger& mass) {
  std::array<double, 2> e{};
  for (int ph = 0; ph < 2; ++ph) {
    const double denom = std::max(mass.initial[ph], mass.throughput[ph]);
    const double diff = std::abs(mass.current[ph] - mass.initial[ph] - mass.net_inflow[ph]);
    e[ph] = denom > 0.0 ? diff / denom : diff;
  }
  return e;
}

namespace {

struct Sim {
  const Deck& deck;
  SimulationResult& out;
  ReservoirModel model;
  Partition partition;
  SimulationState state;
  std::vector<std::size_t> active;
  std::unique_ptr<FimAssembler> assembler;
  std::size_t step = 0;

  // Converged state of the latest accepted attempt, with its controls.
  SimulationState candidate;
  std::vector<WellControl> candidate_controls;
  std::size_t accepted_newton = 0;
  std::size_t step_newton = 0;
  std::size_t step_linear = 0;
  std::size_t step_attempt = 0;

  Sim(const Deck& d, SimulationResult& o, int workers) : deck(d), out(o), model(build_model(d)) {
    partition = partition_grid(model.grid, workers);
    state = initialize_equilibrium(*deck.equil, model);
  }

  WellControl scheduled(std::size_t w, double t) const {
    auto ctl = apply_schedule(model.wells[w], t);
    return ctl ? *ctl : WellControl{};
  }

  void select_wells(double t) {
    std::vector<std::size_t> now;
    for (std::size_t w = 0; w < model.wells.size(); ++w)
      if (scheduled(w, t).mode != ControlMode::Stop) now.push_back(w);
    if (assembler && now == active) return;
    for (std::size_t w : now) {
      if (std::find(active.begin(), active.end(), w) != active.end() || !assembler) continue;
      // A well coming back from STOP restarts from its hydrostatic pressure.
      const auto& perf = model.wells[w].perforations.front();
      const auto props = evaluate_cell(state.p[perf.cell], state.s[perf.cell], model.grid.phi_ref(perf.cell), model.fluid);
      state.pb[w] = hydrostatic_bhp(model.wells[w], perf, props);
    }
    active = std::move(now);
    assembler = std::make_unique<FimAssembler>(model, partition, active);
  }

  std::vector<WellControl> step_controls(double t) const {
    std::vector<WellControl> ctl;
    for (std::size_t w : active) ctl.push_back(scheduled(w, t));
    const auto x = assembler->pack(state);
    const auto rates = assembler->perforation_rates(x, ctl);
    for (std::size_t k = 0; k < active.size(); ++k)
      ctl[k] = resolve_active_constraint(model.wells[active[k]], ctl[k], rates[k], state.pb[active[k]], model.fluid);
    return ctl;
  }

  static bool violates_limit(const WellSpec& well, const WellControl& ctl, double pb) {
    if (!is_rate_mode(ctl.mode)) return false;
    const double tol = 1e-9 * std::max(1.0, std::abs(ctl.bhp_limit));
    return well.type == WellType::Injector ? pb > ctl.bhp_limit + tol : pb < ctl.bhp_limit - tol;
  }

  bool try_step(double t, double dt, std::vector<WellControl> controls) {
    const auto& cfg = out.config;
    for (std::size_t round = 0; round <= active.size(); ++round) {
      ReservoirStepProblem problem(*assembler, state, dt, controls, cfg.linear);
      auto x = assembler->pack(state);
      const auto nr = newton_solve(problem, x, cfg.newton);
      ++step_attempt;
      for (const auto& it : nr.iterations) {
        IterationRecord rec;
        rec.step = step;
        rec.attempt = step_attempt;
        rec.time = t;
        rec.dt = dt;
        rec.iteration = it.iter;
        rec.norm_b = it.norm_b;
        rec.max_norm = it.max_norm;
        rec.mb_error = it.mb_error;
        rec.eta = it.eta;
        rec.linear_iterations = it.linear_iterations;
        rec.linear_residual = it.linear_residual;
        rec.linear_converged = it.linear_converged;
        out.iterations.push_back(rec);
        step_linear += it.linear_iterations;
      }
      step_newton += nr.newton_iterations();
      if (!nr.converged) return false;

      bool switched = false;
      const auto& bm = assembler->blocks();
      for (std::size_t k = 0; k < active.size(); ++k) {
        if (violates_limit(model.wells[active[k]], controls[k], x[bm.well(k)])) {
          controls[k] = WellControl{ControlMode::Bhp, controls[k].bhp_limit, controls[k].bhp_limit};
          switched = true;
        }
      }
      if (switched) continue;

      candidate = state;
      assembler->unpack(x, candidate);
      candidate.t = t + dt;
      candidate_controls = std::move(controls);
      accepted_newton = nr.newton_iterations();
      const std::size_t first = out.iterations.size() - nr.iterations.size();
      for (std::size_t i = first; i < out.iterations.size(); ++i) out.iterations[i].accepted = true;
      return true;
    }
    return false;
  }

  StepRecord record(double dt, std::size_t cuts) {
    StepRecord r;
    r.step = step;
    r.time = state.t;
    r.dt = dt;
    r.cuts = cuts;
    r.wells.assign(model.wells.size(), WellSample{});
    for (std::size_t w = 0; w < model.wells.size(); ++w) {
      r.wells[w].bhp = state.pb[w];
      r.wells[w].mode = ControlMode::Stop;
    }
    double pv_sum = 0.0, pv_p = 0.0, p_sum = 0.0;
    for (std::size_t c = 0; c < model.grid.num_cells(); ++c) {
      const double pv = model.grid.volume(c) * model.grid.phi_ref(c);
      pv_sum += pv;
      pv_p += pv * state.p[c];
      p_sum += state.p[c];
    }
    r.avg_pressure_pv = pv_p / pv_sum;
    r.avg_pressure = p_sum / static_cast<double>(model.grid.num_cells());
    if (!out.steps.empty()) {
      const auto& prev = out.steps.back();
      r.cum_oil_produced = prev.cum_oil_produced;
      r.cum_water_produced = prev.cum_water_produced;
      r.cum_water_injected = prev.cum_water_injected;
    }
    return r;
  }

  // Rates, cumulative volumes and mass ledger for the accepted step.
  void account(StepRecord& r, const std::vector<WellControl>& controls, double dt) {
    const auto x = assembler->pack(state);
    const auto rates = assembler->perforation_rates(x, controls);
    for (std::size_t k = 0; k < active.size(); ++k) {
      const std::size_t w = active[k];
      const auto& well = model.wells[w];
      const auto s = surface_rates(rates[k], model.fluid);
      auto& sample = r.wells[w];
      sample.mode = controls[k].mode;
      if (well.type == WellType::Injector) {
        sample.oil_rate = 0.0;
        sample.water_rate = 0.0 - s.water;
        r.cum_water_injected += dt * (0.0 - s.water);
      } else {
        sample.oil_rate = s.oil;
        sample.water_rate = s.water;
        r.cum_oil_produced += dt * s.oil;
        r.cum_water_produced += dt * s.water;
      }
      for (const auto& q : rates[k]) {
        out.mass.net_inflow[0] += dt * q.q_o;
        out.mass.net_inflow[1] += dt * q.q_w;
        out.mass.throughput[0] += dt * std::abs(q.q_o);
        out.mass.throughput[1] += dt * std::abs(q.q_w);
      }
    }
    out.mass.current = mass_in_place(model, state);
    r.mb_error = material_balance(out.mass);
  }

  void run() {
    const auto& cfg = out.config;
    const double end = out.end_time;

    std::vector<double> bounds{end};
    for (const auto& w : model.wells)
      for (const auto& e : w.schedule)
        if (e.start > 0.0 && e.start < end) bounds.push_back(e.start);
    for (double t : deck.report_times)
      if (t > 0.0 && t < end) bounds.push_back(t);
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());

    select_wells(0.0);
    out.mass.initial = mass_in_place(model, state);
    out.mass.current = out.mass.initial;
    {
      StepRecord r = record(0.0, 0);
      for (std::size_t k = 0; k < active.size(); ++k) r.wells[active[k]].mode = scheduled(active[k], 0.0).mode;
      out.steps.push_back(r);
    }
    if (!(end > 0.0)) return;

    double dt = std::min(cfg.timestep.dt_init, cfg.timestep.dt_max);
    for (double boundary : bounds) {
      while (state.t < boundary) {
        const double t = state.t;
        ++step;
        step_newton = step_linear = step_attempt = accepted_newton = 0;
        try {
          select_wells(t);
          const auto controls = step_controls(t);
          const auto adv = advance_timestep(t, dt, boundary, cfg.timestep,
                                            [&](double trial) { return try_step(t, trial, controls); });
          if (!adv.success) {
            out.success = false;
            out.message = "time step fell below the minimum at t = " + std::to_string(t) + " days";
            --step;
            return;
          }
          const bool lands = adv.dt_taken >= boundary - t;
          state = candidate;
          state.t = lands ? boundary : t + adv.dt_taken;
          StepRecord r = record(adv.dt_taken, adv.attempts.size() - 1);
          r.newton_iterations = accepted_newton;
          r.total_newton = step_newton;
          r.linear_iterations = step_linear;
          account(r, candidate_controls, adv.dt_taken);
          out.steps.push_back(std::move(r));
          dt = adv.next_dt;
        } catch (const Error& e) {
          out.success = false;
          out.message = std::string("step ") + std::to_string(step) + ": " + e.what();
          --step;
          return;
        }
      }
    }
  }
};

}  // namespace

SimulationResult run_simulation(const Deck& deck, int workers, const RunOverrides& overrides) {
  if (!deck.equil) throw DeckError("missing EQUIL", 0);
  SimulationResult out;
  out.workers = workers;
  out.config = resolve_config(deck, overrides);
  out.end_time = overrides.end_time ? *overrides.end_time : deck.end_time;
  if (out.end_time < 0.0) throw Error("end time must be non-negative");
  out.warnings = deck.warnings;
  for (const auto& w : deck.wells) out.well_names.push_back(w.name);

  Sim sim(deck, out, workers);
  sim.run();
  out.final_state = sim.state;
  return out;
}

}  // namespace fimsim
