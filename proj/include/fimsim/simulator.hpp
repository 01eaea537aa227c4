#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fimsim/config.hpp"
#include "fimsim/deck.hpp"
#include "fimsim/discretization.hpp"

namespace fimsim {

// Command-line style adjustments applied on top of the deck's solver section.
struct RunOverrides {
  std::optional<KrylovKind> krylov;
  std::optional<std::size_t> restart;
  std::optional<std::size_t> max_linear;
  std::optional<PrecondKind> precond;
  std::optional<int> overlap;
  std::optional<DecouplingKind> decoupling;
  std::optional<bool> reorder;
  std::optional<NewtonMode> newton;
  std::optional<double> nltol;
  std::optional<double> lintol;
  std::optional<double> max_dt;
  std::optional<double> end_time;
};

SolverConfig resolve_config(const Deck& deck, const RunOverrides& overrides);

// Rates are magnitudes: oil in stb/day, water in bbl/day, production positive
// for producers and injection positive for injectors.
struct WellSample {
  double oil_rate = 0.0;
  double water_rate = 0.0;
  double bhp = 0.0;
  ControlMode mode = ControlMode::ShutIn;
};

struct StepRecord {
  std::size_t step = 0;
  double time = 0.0;
  double dt = 0.0;
  std::size_t newton_iterations = 0;   // accepted solve only
  std::size_t total_newton = 0;        // every solve of the step, failed ones included
  std::size_t linear_iterations = 0;   // every solve of the step
  std::size_t cuts = 0;
  std::vector<WellSample> wells;
  double avg_pressure_pv = 0.0;
  double avg_pressure = 0.0;
  double cum_oil_produced = 0.0;     // stb
  double cum_water_produced = 0.0;   // bbl
  double cum_water_injected = 0.0;   // bbl
  std::array<double, 2> mb_error{};  // oil, water
};

struct IterationRecord {
  std::size_t step = 0;
  std::size_t attempt = 0;
  double time = 0.0;  // start of the attempted step
  double dt = 0.0;
  std::size_t iteration = 0;
  double norm_b = 0.0;
  double max_norm = 0.0;
  double mb_error = 0.0;
  double eta = 0.0;
  std::size_t linear_iterations = 0;
  double linear_residual = 0.0;
  bool linear_converged = false;
  bool accepted = false;
};

// Mass bookkeeping per phase (lbm): index 0 oil, 1 water.
struct MassLedger {
  std::array<double, 2> initial{};
  std::array<double, 2> current{};
  std::array<double, 2> net_inflow{};  // injected minus produced
  std::array<double, 2> throughput{};  // injected plus produced
};

struct SimulationResult {
  bool success = true;
  std::string message;
  int workers = 1;
  double end_time = 0.0;
  SolverConfig config;
  std::vector<std::string> well_names;
  std::vector<StepRecord> steps;  // steps[0] is the initial state
  std::vector<IterationRecord> iterations;
  MassLedger mass;
  SimulationState final_state;
  std::vector<std::string> warnings;
};

SimulationResult run_simulation(const Deck& deck, int workers, const RunOverrides& overrides = {});

// |in-place change - net inflow| / max(initial mass, throughput), per phase.
std::array<double, 2> material_balance(const MassLedger& mass);
inline std::array<double, 2> material_balance(const SimulationResult& result) { return material_balance(result.mass); }

// Phase masses in place (lbm).
std::array<double, 2> mass_in_place(const ReservoirModel& model, const SimulationState& state);

}  // namespace fimsim
