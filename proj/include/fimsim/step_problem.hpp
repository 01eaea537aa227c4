#pragma once

#include <vector>

#include "fimsim/discretization.hpp"
#include "fimsim/linear_stack.hpp"
#include "fimsim/nonlinear.hpp"

namespace fimsim {

// One implicit time step from `prev` over dt as a nonlinear system in the
// packed unknowns of `assembler`. Residual rows are scaled: cell balances by
// dt/(pore volume * reference density), rate constraints by 1/max(|target|,1).
class ReservoirStepProblem final : public NonlinearSystem {
 public:
  ReservoirStepProblem(const FimAssembler& assembler, const SimulationState& prev, double dt,
                       std::vector<WellControl> controls, const LinearSolverConfig& linear);

  Evaluation evaluate(std::span<const double> x) override;
  LinearOutcome solve_linear(double tol) override;
  void apply_update(std::vector<double>& x, std::span<const double> y) override;

  const std::vector<double>& row_scale() const { return scale_; }
  const JacobianSystem& scaled_system() const { return sys_; }
  const std::vector<WellControl>& controls() const { return controls_; }
  double max_saturation_change = 0.2;

 private:
  const FimAssembler& as_;
  const SimulationState& prev_;
  double dt_;
  std::vector<WellControl> controls_;
  LinearSolverConfig linear_;
  std::vector<double> scale_;
  double pore_mass_o_ = 0.0, pore_mass_w_ = 0.0;
  JacobianSystem sys_;
  std::vector<double> potential_;
};

}  // namespace fimsim
