#include "fimsim/nonlinear.hpp"

#include <algorithm>
#include <cmath>

#include "fimsim/error.hpp"

namespace fimsim {

void NewtonConfig::validate() const {
  if (!(epsilon > 0.0)) throw Error("Newton tolerance must be positive");
  if (max_newton < 1) throw Error("max_newton must be at least 1");
  if (!(eta_min > 0.0 && eta_min <= eta_max && eta_max < 1.0)) throw Error("forcing bounds must satisfy 0 < min <= max < 1");
  if (forcing_variant < 1 || forcing_variant > 3) throw Error("forcing variant must be 1, 2 or 3");
  if (!(linear_tol_fixed > 0.0 && linear_tol_fixed < 1.0)) throw Error("linear tolerance must lie in (0,1)");
}

double forcing_term_raw(const ForcingInputs& in, const NewtonConfig& config) {
  if (!(in.norm_b_prev > 0.0)) return config.eta_min;
  switch (config.forcing_variant) {
    case 1: return in.norm_b_minus_r_prev / in.norm_b_prev;
    case 2: return (in.norm_b - in.norm_r_prev) / in.norm_b_prev;
    default: return config.gamma * std::pow(in.norm_b / in.norm_b_prev, config.beta);
  }
}

double forcing_term(std::size_t l, const ForcingInputs& in, const NewtonConfig& config) {
  if (l == 0) return config.eta_max;
  const double raw = forcing_term_raw(in, config);
  if (!std::isfinite(raw)) return config.eta_max;
  return std::clamp(raw, config.eta_min, config.eta_max);
}

std::size_t NewtonResult::linear_iterations() const {
  std::size_t s = 0;
  for (const auto& it : iterations) s += it.linear_iterations;
  return s;
}

NewtonResult newton_solve(NonlinearSystem& system, std::vector<double>& x, const NewtonConfig& config) {
  config.validate();
  NewtonResult res;
  Evaluation ev;
  try {
    ev = system.evaluate(x);
  } catch (const PropertyError& e) {
    res.failure = std::string("property evaluation: ") + e.what();
    return res;
  }

  ForcingInputs forcing;
  std::vector<double> r_prev;
  std::size_t increases = 0;
  for (std::size_t l = 0;; ++l) {
    res.final_norm = ev.norm2;
    res.final_max_norm = ev.max_norm;
    if (!std::isfinite(ev.norm2)) {
      res.failure = "non-finite residual";
      return res;
    }
    if (ev.max_norm <= config.epsilon && ev.mb_error <= config.mb_tolerance) {
      res.converged = true;
      return res;
    }
    if (l >= config.max_newton) {
      res.failure = "maximum Newton iterations reached";
      return res;
    }

    double eta = config.linear_tol_fixed;
    if (config.mode == NewtonMode::Inexact) {
      if (l > 0) {
        forcing.norm_b = ev.norm2;
        double s = 0.0;
        for (std::size_t i = 0; i < ev.b.size(); ++i) s += (ev.b[i] - r_prev[i]) * (ev.b[i] - r_prev[i]);
        forcing.norm_b_minus_r_prev = std::sqrt(s);
      }
      eta = forcing_term(l, forcing, config);
    }

    const auto lin = system.solve_linear(eta);
    NewtonIteration rec;
    rec.iter = l;
    rec.norm_b = ev.norm2;
    rec.max_norm = ev.max_norm;
    rec.mb_error = ev.mb_error;
    rec.eta = eta;
    rec.linear_iterations = lin.iterations;
    rec.linear_residual = lin.relative_residual;
    rec.linear_converged = lin.converged;
    res.iterations.push_back(rec);
    if (lin.failed) {
      res.failure = "linear solver: " + lin.message;
      return res;
    }

    double rn = 0.0;
    for (double v : lin.r) rn += v * v;
    forcing.norm_b_prev = ev.norm2;
    forcing.norm_r_prev = std::sqrt(rn);
    r_prev = lin.r;

    system.apply_update(x, lin.y);
    const double prev_norm = ev.norm2;
    try {
      ev = system.evaluate(x);
    } catch (const PropertyError& e) {
      res.failure = std::string("property evaluation: ") + e.what();
      return res;
    }
    increases = ev.norm2 > prev_norm ? increases + 1 : 0;
    if (increases >= config.divergence_window) {
      res.final_norm = ev.norm2;
      res.final_max_norm = ev.max_norm;
      res.failure = "residual increased in consecutive iterations";
      return res;
    }
  }
}

void TimeStepController::validate() const {
  if (!(dt_min > 0.0 && dt_min <= dt_init && dt_init <= dt_max)) throw Error("time steps must satisfy 0 < dt_min <= dt_init <= dt_max");
  if (!(growth > 1.0)) throw Error("time-step growth factor must exceed 1");
  if (!(cut > 0.0 && cut < 1.0)) throw Error("time-step cut factor must lie in (0,1)");
}

AdvanceResult advance_timestep(double t, double dt, double boundary, const TimeStepController& controller,
                               const std::function<bool(double)>& try_step) {
  AdvanceResult out;
  const double remaining = boundary - t;
  if (!(remaining > 0.0)) throw Error("advance_timestep: no time left before the boundary");
  double trial = std::min(dt, remaining);
  bool clipped = dt >= remaining;
  while (true) {
    const bool ok = try_step(trial);
    out.attempts.push_back({trial, ok});
    if (ok) break;
    trial *= controller.cut;
    clipped = false;
    if (trial < controller.dt_min) {
      out.next_dt = trial;
      return out;
    }
  }
  out.success = true;
  out.dt_taken = trial;
  // A step shortened only to land on the boundary keeps the requested size.
  const bool first_try = out.attempts.size() == 1;
  out.next_dt = clipped && first_try ? std::min(dt, controller.dt_max) : std::min(trial * controller.growth, controller.dt_max);
  return out;
}

}  // namespace fimsim
