#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fimsim {

enum class NewtonMode { Standard, Inexact };

struct NewtonConfig {
  double epsilon = 1e-2;        // scaled max-norm tolerance
  double mb_tolerance = 1e-9;   // per-phase mass imbalance of a step relative to pore-volume mass
  std::size_t max_newton = 20;
  NewtonMode mode = NewtonMode::Inexact;
  double linear_tol_fixed = 1e-4;
  int forcing_variant = 2;
  double eta_min = 0.01;
  double eta_max = 0.1;
  double beta = 1.6180339887498949;  // (sqrt(5)+1)/2
  double gamma = 0.9;
  std::size_t divergence_window = 3;

  void validate() const;
};

// Norms feeding the forcing term at Newton iteration l >= 1:
//   norm_b = ||b(x^l)||, norm_b_prev = ||b(x^{l-1})||, norm_r_prev = ||r^{l-1}||,
//   norm_b_minus_r_prev = ||b(x^l) - r^{l-1}||.
struct ForcingInputs {
  double norm_b = 0.0;
  double norm_b_prev = 0.0;
  double norm_r_prev = 0.0;
  double norm_b_minus_r_prev = 0.0;
};

// Raw value of the selected variant, clamped to [eta_min, eta_max]. l == 0
// returns eta_max.
double forcing_term(std::size_t l, const ForcingInputs& in, const NewtonConfig& config);
double forcing_term_raw(const ForcingInputs& in, const NewtonConfig& config);

struct Evaluation {
  std::vector<double> b;   // scaled right-hand side -S F(x)
  double norm2 = 0.0;      // ||b||_2
  double max_norm = 0.0;   // ||b||_inf
  double mb_error = 0.0;   // largest per-phase relative imbalance
};

struct LinearOutcome {
  std::vector<double> y;
  std::vector<double> r;   // b - A y on the scaled, untransformed system
  std::size_t iterations = 0;
  double relative_residual = 0.0;  // on the system handed to the Krylov solver
  bool converged = false;
  bool failed = false;
  std::string message;
};

// Problem interface of the Newton driver. evaluate() fixes the linearisation
// point used by the next solve_linear() call.
class NonlinearSystem {
 public:
  virtual ~NonlinearSystem() = default;
  virtual Evaluation evaluate(std::span<const double> x) = 0;
  virtual LinearOutcome solve_linear(double tol) = 0;
  // x += y with problem-specific safeguards.
  virtual void apply_update(std::vector<double>& x, std::span<const double> y) = 0;
};

struct NewtonIteration {
  std::size_t iter = 0;
  double norm_b = 0.0;
  double max_norm = 0.0;
  double mb_error = 0.0;
  double eta = 0.0;
  std::size_t linear_iterations = 0;
  double linear_residual = 0.0;
  bool linear_converged = false;
};

struct NewtonResult {
  bool converged = false;
  std::string failure;
  std::vector<NewtonIteration> iterations;  // one per linear solve
  double final_norm = 0.0;
  double final_max_norm = 0.0;

  std::size_t newton_iterations() const { return iterations.size(); }
  std::size_t linear_iterations() const;
};

// Algorithm: evaluate, test convergence, choose eta, solve, update, repeat.
// Property errors raised while evaluating end the solve as a failure.
NewtonResult newton_solve(NonlinearSystem& system, std::vector<double>& x, const NewtonConfig& config);

struct TimeStepController {
  double dt_init = 1.0;
  double dt_max = 100.0;
  double dt_min = 1e-6;
  double growth = 2.0;
  double cut = 0.5;

  void validate() const;
};

struct StepAttempt {
  double dt = 0.0;
  bool success = false;
};

struct AdvanceResult {
  bool success = false;
  double dt_taken = 0.0;
  double next_dt = 0.0;
  std::vector<StepAttempt> attempts;
};

// Takes one accepted step from t towards `boundary` (never past it). The
// callback attempts a step of the given length and returns whether it was
// accepted; it must leave the committed state unchanged on failure.
AdvanceResult advance_timestep(double t, double dt, double boundary, const TimeStepController& controller,
                               const std::function<bool(double)>& try_step);

}  // namespace fimsim
