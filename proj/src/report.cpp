#include "fimsim/report.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include "fimsim/error.hpp"

namespace fimsim {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

IterationTotals iteration_totals(const SimulationResult& result) {
  IterationTotals t;
  for (const auto& it : result.iterations) {
    ++t.newton;
    t.linear += it.linear_iterations;
  }
  return t;
}

void write_report_csv(std::ostream& os, const SimulationResult& result) {
  os << "step,time,dt,newton_iterations,accepted_newton_iterations,linear_iterations,cuts";
  for (const auto& name : result.well_names)
    os << ',' << name << "_oil_rate," << name << "_water_rate," << name << "_bhp," << name << "_control";
  os << ",avg_pressure_pv,avg_pressure,cum_oil_produced,cum_water_produced,cum_water_injected,mb_error_oil,"
        "mb_error_water\n";
  for (const auto& r : result.steps) {
    os << r.step << ',' << num(r.time) << ',' << num(r.dt) << ',' << r.total_newton << ',' << r.newton_iterations
       << ',' << r.linear_iterations << ',' << r.cuts;
    for (const auto& w : r.wells)
      os << ',' << num(w.oil_rate) << ',' << num(w.water_rate) << ',' << num(w.bhp) << ',' << to_string(w.mode);
    os << ',' << num(r.avg_pressure_pv) << ',' << num(r.avg_pressure) << ',' << num(r.cum_oil_produced) << ','
       << num(r.cum_water_produced) << ',' << num(r.cum_water_injected) << ',' << num(r.mb_error[0]) << ','
       << num(r.mb_error[1]) << '\n';
  }
}

void write_iterations_csv(std::ostream& os, const SimulationResult& result) {
  os << "step,attempt,time,dt,iteration,norm_b,max_norm,mb_error,eta,linear_iterations,linear_residual,"
        "linear_converged,accepted\n";
  for (const auto& it : result.iterations) {
    os << it.step << ',' << it.attempt << ',' << num(it.time) << ',' << num(it.dt) << ',' << it.iteration << ','
       << num(it.norm_b) << ',' << num(it.max_norm) << ',' << num(it.mb_error) << ',' << num(it.eta) << ','
       << it.linear_iterations << ',' << num(it.linear_residual) << ',' << (it.linear_converged ? 1 : 0) << ','
       << (it.accepted ? 1 : 0) << '\n';
  }
}

void write_summary(std::ostream& os, const SimulationResult& result) {
  const auto totals = iteration_totals(result);
  const auto mb = material_balance(result);
  const std::size_t steps = result.steps.empty() ? 0 : result.steps.size() - 1;
  std::size_t cuts = 0;
  for (const auto& s : result.steps) cuts += s.cuts;
  const auto& cfg = result.config;

  os << "status: " << (result.success ? "completed" : "ABORTED") << '\n';
  if (!result.success) os << "reason: " << result.message << '\n';
  os << "end_time: " << num(result.end_time) << '\n';
  os << "final_time: " << num(result.final_state.t) << '\n';
  os << "workers: " << result.workers << '\n';
  os << "newton: " << (cfg.newton.mode == NewtonMode::Standard ? "standard" : "inexact") << '\n';
  os << "krylov: " << to_string(cfg.linear.krylov) << '\n';
  os << "preconditioner: " << to_string(cfg.linear.precond) << '\n';
  os << "decoupling: " << to_string(cfg.linear.decoupling) << '\n';
  os << "reorder: " << (cfg.linear.reorder ? "on" : "off") << '\n';
  os << "time_steps: " << steps << '\n';
  os << "time_step_cuts: " << cuts << '\n';
  os << "newton_iterations: " << totals.newton << '\n';
  os << "linear_iterations: " << totals.linear << '\n';
  os << "average_linear_per_newton: " << num(totals.average_linear()) << '\n';
  os << "mb_error_oil: " << num(mb[0]) << '\n';
  os << "mb_error_water: " << num(mb[1]) << '\n';
  for (const auto& w : result.warnings) os << "warning: " << w << '\n';
}

void write_outputs(const std::filesystem::path& dir, const SimulationResult& result) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name);
    if (!f) throw Error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("report.csv");
    write_report_csv(f, result);
  }
  {
    auto f = open("iterations.csv");
    write_iterations_csv(f, result);
  }
  {
    auto f = open("summary.txt");
    write_summary(f, result);
  }
}

}  // namespace fimsim
