#pragma once

#include "fimsim/linear_stack.hpp"
#include "fimsim/nonlinear.hpp"

namespace fimsim {

struct SolverConfig {
  NewtonConfig newton;
  LinearSolverConfig linear;
  TimeStepController timestep{1.0, 100.0, 1e-6, 2.0, 0.5};
};

}  // namespace fimsim
