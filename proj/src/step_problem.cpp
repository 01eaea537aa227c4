#include "fimsim/step_problem.hpp"

#include <algorithm>
#include <cmath>

#include "fimsim/error.hpp"
#include "fimsim/kernels.hpp"

namespace fimsim {

ReservoirStepProblem::ReservoirStepProblem(const FimAssembler& assembler, const SimulationState& prev, double dt,
                                           std::vector<WellControl> controls, const LinearSolverConfig& linear)
    : as_(assembler), prev_(prev), dt_(dt), controls_(std::move(controls)), linear_(linear) {
  const auto& model = as_.model();
  const auto& bm = as_.blocks();
  if (controls_.size() != bm.n_wells) throw AssemblyError("one control per active well required");
  scale_.assign(bm.size(), 1.0);
  for (std::size_t c = 0; c < bm.n_cells; ++c) {
    const double pv = model.grid.volume(c) * model.grid.phi_ref(c);
    scale_[bm.pressure(c)] = dt / (pv * model.fluid.oil.rho_ref);
    scale_[bm.saturation(c)] = dt / (pv * model.fluid.water.rho_ref);
    pore_mass_o_ += pv * model.fluid.oil.rho_ref;
    pore_mass_w_ += pv * model.fluid.water.rho_ref;
  }
  for (std::size_t k = 0; k < bm.n_wells; ++k)
    if (is_rate_mode(controls_[k].mode)) scale_[bm.well(k)] = 1.0 / std::max(std::abs(controls_[k].target), 1.0);
}

Evaluation ReservoirStepProblem::evaluate(std::span<const double> x) {
  const auto& bm = as_.blocks();
  const auto& model = as_.model();
  sys_.matrix = as_.pattern();
  std::vector<double> f;
  as_.assemble(x, prev_, dt_, controls_, f, &sys_.matrix);

  auto vals = sys_.matrix.values();
  const auto ptr = sys_.matrix.row_ptr();
  Evaluation ev;
  ev.b.resize(f.size());
  double sum_o = 0.0, sum_w = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    ev.b[i] = -scale_[i] * f[i];
    for (std::size_t k = ptr[i]; k < ptr[i + 1]; ++k) vals[k] *= scale_[i];
  }
  for (std::size_t c = 0; c < bm.n_cells; ++c) {
    sum_o += f[bm.pressure(c)];
    sum_w += f[bm.saturation(c)];
  }
  sys_.rhs = ev.b;
  sys_.blocks = bm;
  sys_.row_owner = as_.row_owner();
  sys_.num_workers = as_.partition().num_workers;

  ev.norm2 = norm2(ev.b);
  ev.max_norm = norm_inf(ev.b);
  ev.mb_error = std::max(pore_mass_o_ > 0.0 ? std::abs(sum_o) * dt_ / pore_mass_o_ : 0.0,
                         pore_mass_w_ > 0.0 ? std::abs(sum_w) * dt_ / pore_mass_w_ : 0.0);

  potential_.resize(bm.n_cells);
  for (std::size_t c = 0; c < bm.n_cells; ++c)
    potential_[c] = phase_potential(x[c], density(x[c], model.fluid.oil).value, -model.grid.depth(c));
  return ev;
}

LinearOutcome ReservoirStepProblem::solve_linear(double tol) {
  LinearOutcome out;
  LinearStackResult lr;
  try {
    lr = solve_linear_system(sys_, potential_, as_.partition(), linear_, tol);
  } catch (const LinearAlgebraError& e) {
    out.failed = true;
    out.message = e.what();
    return out;
  } catch (const AssemblyError& e) {
    out.failed = true;
    out.message = e.what();
    return out;
  }
  out.y = std::move(lr.y);
  out.iterations = lr.iterations;
  out.relative_residual = lr.relative_residual;
  out.converged = lr.converged;
  const bool finite = std::all_of(out.y.begin(), out.y.end(), [](double v) { return std::isfinite(v); });
  out.r.resize(out.y.size());
  if (finite) residual(sys_.matrix, out.y, sys_.rhs, out.r);
  if (!finite) {
    out.failed = true;
    out.message = "non-finite solution";
  } else if (lr.breakdown && !lr.converged) {
    out.failed = true;
    out.message = "Krylov breakdown";
  } else if (!(lr.relative_residual < 1.0)) {
    out.failed = true;
    out.message = "no residual reduction";
  }
  return out;
}

void ReservoirStepProblem::apply_update(std::vector<double>& x, std::span<const double> y) {
  const auto& bm = as_.blocks();
  double max_ds = 0.0;
  for (std::size_t c = 0; c < bm.n_cells; ++c) max_ds = std::max(max_ds, std::abs(y[bm.saturation(c)]));
  const double theta = max_ds > max_saturation_change ? max_saturation_change / max_ds : 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += theta * y[i];
  for (std::size_t c = 0; c < bm.n_cells; ++c) {
    double& s = x[bm.saturation(c)];
    s = std::clamp(s, 0.0, 1.0);
  }
  for (std::size_t k = 0; k < bm.n_wells; ++k)
    if (controls_[k].mode == ControlMode::Bhp) x[bm.well(k)] = controls_[k].target;
}

}  // namespace fimsim
