// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fimsim/amg.hpp"
#include "fimsim/cases.hpp"
#include "fimsim/decoupling.hpp"
#include "fimsim/ilu0.hpp"
#include "fimsim/kernels.hpp"
#include "fimsim/krylov.hpp"
#include "fimsim/reorder.hpp"
#include "fimsim/report.hpp"
#include "fimsim/simulator.hpp"
#include "fimsim/step_problem.hpp"
#include "support/models.hpp"
#include "support/oracles.hpp"
#include "support/scenarios.hpp"

using namespace fimsim;

namespace {

const std::filesystem::path kExampleOne = std::filesystem::path(FIMSIM_DATA_DIR) / "mxsmo031.deck";

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const SimulationResult& example_one(int workers) {
  static std::map<int, SimulationResult> cache;
  auto it = cache.find(workers);
  if (it == cache.end()) it = cache.emplace(workers, run_simulation(load_deck(kExampleOne), workers)).first;
  return it->second;
}

Outcome forcing_clamp() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& r = example_one(1);
  const double secs = seconds_since(t0);
  std::size_t bad = 0;
  for (const auto& it : r.iterations)
    if (!(it.eta >= 0.01 && it.eta <= 0.1)) ++bad;
  const bool inexact = r.config.newton.mode == NewtonMode::Inexact;
  return {r.success && inexact && bad == 0 && !r.iterations.empty() && secs < 60.0,
          std::to_string(r.iterations.size()) + " iterations, " + std::to_string(bad) + " outside [0.01, 0.1], " +
              fmt("%.1f s", secs)};
}

Outcome jacobian_fd() {
  const auto m = models::box(3, 3, 3, true);
  const auto part = partition_grid(m.grid, 1);
  FimAssembler as(m, part, models::all_wells(m));
  const auto prev = models::random_state(m, 101);
  const auto cur = models::random_state(m, 102);
  const std::vector<WellControl> ctl{{ControlMode::OilRate, 500.0, 100.0}};
  const auto sys = assemble_jacobian(as, cur, prev, 3.0, ctl);
  const auto x = as.pack(cur);
  double worst = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const bool sat = j >= m.grid.num_cells() && j < 2 * m.grid.num_cells();
    const double h = sat ? 1e-7 : 1e-7 * std::abs(x[j]);
    const auto fd = oracle::fd_column(as, x, prev, 3.0, ctl, j, h);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < fd.size(); ++i) {
      const double a = sys.matrix.at(i, j);
      num += (a - fd[i]) * (a - fd[i]);
      den += a * a;
    }
    worst = std::max(worst, den > 0.0 ? std::sqrt(num / den) : std::sqrt(num));
  }
  return {worst <= 1e-5, std::to_string(x.size()) + " columns, worst relative error " + fmt("%.2e", worst)};
}

Outcome conservation() {
  const double drift = scenarios::closed_box_drift(5, 5, 3, 10, 5.0, 1);
  const auto& r = example_one(1);
  const auto mb = material_balance(r);
  const double mb_max = std::max(mb[0], mb[1]);
  return {drift <= 1e-8 && r.success && mb_max <= 1e-6,
          "closed-box drift " + fmt("%.2e", drift) + ", example deck material balance " + fmt("%.2e", mb_max)};
}

Outcome transform_equivalence() {
  const auto m = models::box(3, 2, 2, true);
  const auto part = partition_grid(m.grid, 2);
  FimAssembler as(m, part, models::all_wells(m));
  const auto prev = models::random_state(m, 201);
  const auto cur = models::random_state(m, 202);
  SolverConfig cfg;
  ReservoirStepProblem problem(as, prev, 2.0, {{ControlMode::OilRate, 500.0, 100.0}}, cfg.linear);
  problem.evaluate(as.pack(cur));
  const auto& sys = problem.scaled_system();
  const std::size_t n = sys.matrix.rows();
  const auto x = oracle::dense_solve(sys.matrix, sys.rhs);

  double worst = 0.0;
  for (auto kind : {DecouplingKind::QuasiImpes, DecouplingKind::Abf}) {
    const auto t = apply_decoupling(build_decoupler(sys, kind), sys);
    worst = std::max(worst, oracle::rel_diff(oracle::dense_solve(t.matrix, t.rhs), x));
  }
  std::vector<double> phi(m.grid.num_cells());
  for (std::size_t c = 0; c < phi.size(); ++c) phi[c] = cur.p[c] - 0.3 * m.grid.depth(c);
  const auto perm = build_potential_permutation(phi, part, sys.blocks.n_wells);
  const auto p = apply_permutation(perm, sys);
  worst = std::max(worst, oracle::rel_diff(unpermute_solution(perm, oracle::dense_solve(p.matrix, p.rhs)), x));
  return {n <= 50 && worst <= 1e-10, std::to_string(n) + " unknowns, worst relative difference " + fmt("%.2e", worst)};
}

Outcome permutation_example() {
  GeometrySection g;
  g.nx = 4;
  g.ny = g.nz = 1;
  g.dx = g.dy = g.dz = {1.0};
  g.top_depth = 0.0;
  g.permx = {1.0};
  g.poro = {0.2};
  const auto part = partition_grid(build_grid(g), 1);
  const auto perm = build_potential_permutation(std::vector<double>{2.1, 1.3, 4.2, 1.0}, part, 0);
  std::string pm;
  for (std::size_t i = 0; i < 4; ++i) pm += (i ? "," : "") + std::to_string(perm.cell[i] + 1);
  return {pm == "2,3,1,4", "Pm = (" + pm + ")"};
}

struct FloodStats {
  double avg_linear = 0.0;
  std::size_t newton = 0;
  std::size_t linear = 0;
  std::size_t steps = 0;
  bool success = false;
};

FloodStats waterflood(std::uint64_t seed, const RunOverrides& ov) {
  const auto r = run_simulation(make_waterflood_deck(seed), 1, ov);
  const auto tot = iteration_totals(r);
  return {tot.average_linear(), tot.newton, tot.linear, r.steps.size() - 1, r.success};
}

RunOverrides flood_overrides(PrecondKind pc, DecouplingKind dec, bool reorder) {
  RunOverrides ov;
  ov.krylov = KrylovKind::Gmres;
  ov.restart = 50;
  ov.max_linear = 100;
  ov.precond = pc;
  ov.decoupling = dec;
  ov.reorder = reorder;
  return ov;
}

const std::vector<std::uint64_t> kSeeds{1, 2, 3};

Outcome preconditioner_effectiveness() {
  bool ok = true;
  std::string detail;
  for (auto seed : kSeeds) {
    const auto none = waterflood(seed, flood_overrides(PrecondKind::CprFpf, DecouplingKind::None, false));
    const auto pt = waterflood(seed, flood_overrides(PrecondKind::CprFpf, DecouplingKind::None, true));
    const auto qi = waterflood(seed, flood_overrides(PrecondKind::CprFpf, DecouplingKind::QuasiImpes, false));
    const auto ptqi = waterflood(seed, flood_overrides(PrecondKind::CprFpf, DecouplingKind::QuasiImpes, true));
    const bool s_ok = none.avg_linear > pt.avg_linear && none.avg_linear > qi.avg_linear &&
                      ptqi.avg_linear <= qi.avg_linear && pt.success && qi.success && ptqi.success;
    ok = ok && s_ok;
    char buf[200];
    std::snprintf(buf, sizeof buf, "%sseed %llu: none %.2f, reorder %.2f, qi %.2f, qi+reorder %.2f",
                  detail.empty() ? "" : "; ", static_cast<unsigned long long>(seed), none.avg_linear, pt.avg_linear,
                  qi.avg_linear, ptqi.avg_linear);
    detail += buf;
  }
  return {ok, detail};
}

Outcome cpr_vs_ras() {
  bool ok = true;
  std::string detail;
  for (auto seed : kSeeds) {
    const auto cpr = waterflood(seed, flood_overrides(PrecondKind::CprFpf, DecouplingKind::QuasiImpes, true));
    const auto ras = waterflood(seed, flood_overrides(PrecondKind::Ras, DecouplingKind::QuasiImpes, true));
    ok = ok && cpr.success && cpr.avg_linear <= 0.7 * ras.avg_linear;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%sseed %llu: cpr-fpf %.2f, ras %.2f (ratio %.2f)", detail.empty() ? "" : "; ",
                  static_cast<unsigned long long>(seed), cpr.avg_linear, ras.avg_linear,
                  cpr.avg_linear / ras.avg_linear);
    detail += buf;
  }
  return {ok, detail};
}

Outcome newton_modes() {
  bool ok = true;
  std::string detail;
  for (auto seed : kSeeds) {
    auto ov = flood_overrides(PrecondKind::CprFpf, DecouplingKind::QuasiImpes, true);
    ov.newton = NewtonMode::Standard;
    const auto std_run = waterflood(seed, ov);
    ov.newton = NewtonMode::Inexact;
    const auto inx = waterflood(seed, ov);
    const double std_per_step = static_cast<double>(std_run.newton) / static_cast<double>(std_run.steps);
    const double inx_per_step = static_cast<double>(inx.newton) / static_cast<double>(inx.steps);
    ok = ok && std_run.success && inx.success && inx.linear < std_run.linear && std_per_step <= inx_per_step;
    char buf[200];
    std::snprintf(buf, sizeof buf, "%sseed %llu: linear std %zu / inexact %zu, newton per step std %.2f / inexact %.2f",
                  detail.empty() ? "" : "; ", static_cast<unsigned long long>(seed), std_run.linear, inx.linear,
                  std_per_step, inx_per_step);
    detail += buf;
  }
  return {ok, detail};
}

Outcome solver_oracles() {
  std::vector<std::string> failed;
  // Krylov on 100-unknown convection-diffusion systems. The forward error is
  // bounded by cond_inf(A) times the requested relative residual.
  const double tol = 1e-10;
  for (double pe : {0.0, 5.0, 50.0}) {
    const auto a = oracle::convection_diffusion(10, pe);
    const auto b = oracle::random_vector(a.rows(), 17);
    const auto x = oracle::dense_solve(a, b);
    const auto dense = oracle::to_dense(a);
    double norm_a = 0.0, norm_inv = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      double s = 0.0;
      for (double v : dense[i]) s += std::abs(v);
      norm_a = std::max(norm_a, s);
    }
    std::vector<double> inv_rows(a.rows(), 0.0);
    for (std::size_t j = 0; j < a.rows(); ++j) {
      std::vector<double> e(a.rows(), 0.0);
      e[j] = 1.0;
      const auto col = oracle::dense_solve(dense, e);
      for (std::size_t i = 0; i < a.rows(); ++i) inv_rows[i] += std::abs(col[i]);
    }
    for (double v : inv_rows) norm_inv = std::max(norm_inv, v);
    const double bound = norm_a * norm_inv * tol;
    const auto rb = bicgstab(a, b, IdentityPreconditioner{}, {tol, 1000, 50});
    const auto rg = gmres(a, b, IdentityPreconditioner{}, {tol, 1000, 50});
    auto max_err = [&](const std::vector<double>& y) {
      double e = 0.0, s = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        e = std::max(e, std::abs(y[i] - x[i]));
        s = std::max(s, std::abs(x[i]));
      }
      return e / s;
    };
    if (!rb.converged || rb.relative_residual() > tol || max_err(rb.x) > bound) failed.push_back("bicgstab");
    if (!rg.converged || rg.relative_residual() > tol || max_err(rg.x) > bound) failed.push_back("gmres");
  }
  // ILU(0) of a tridiagonal matrix is an exact factorization.
  {
    const auto a = oracle::laplacian_1d(200);
    const auto b = oracle::random_vector(200, 18);
    if (oracle::rel_diff(ilu0_solve(ilu0_factor(a), b), oracle::dense_solve(a, b)) > 1e-12) failed.push_back("ilu0");
  }
  // Galerkin identity on every level.
  double galerkin = 0.0;
  for (const auto& a : {oracle::laplacian_1d(1000), oracle::laplacian_3d(12), oracle::convection_diffusion(30, 5.0)}) {
    const auto h = amg_setup(a);
    for (std::size_t l = 0; l + 1 < h.num_levels(); ++l) {
      const auto& lev = h.levels[l];
      const auto rap = multiply(lev.r, multiply(lev.a, lev.p));
      const auto& coarse = h.levels[l + 1].a;
      double scale = 0.0, diff = 0.0;
      for (double v : coarse.values()) scale = std::max(scale, std::abs(v));
      for (std::size_t r = 0; r < rap.rows(); ++r) {
        for (auto c : rap.row_cols(r)) diff = std::max(diff, std::abs(rap.at(r, c) - coarse.at(r, c)));
        for (auto c : coarse.row_cols(r)) diff = std::max(diff, std::abs(rap.at(r, c) - coarse.at(r, c)));
      }
      galerkin = std::max(galerkin, diff / scale);
    }
  }
  if (galerkin > 1e-12) failed.push_back("galerkin");
  const auto lap = oracle::laplacian_1d(1000);
  const auto res = bicgstab(lap, oracle::random_vector(1000, 19), AmgPreconditioner(lap), {1e-8, 300, 50});
  if (!res.converged || res.iterations > 15) failed.push_back("amg-laplacian");

  std::string detail = "amg laplacian iterations " + std::to_string(res.iterations) + ", galerkin " +
                       fmt("%.1e", galerkin);
  for (const auto& f : failed) detail += ", failed " + f;
  return {failed.empty(), detail};
}

Outcome partition_invariance() {
  const auto& r1 = example_one(1);
  double worst = 0.0;
  double worst_match = 1.0;
  bool ok = r1.success;
  std::string detail;
  for (int w : {2, 4}) {
    const auto& rw = example_one(w);
    if (!rw.success || rw.steps.size() != r1.steps.size()) {
      ok = false;
      detail += std::to_string(w) + " workers: " + std::to_string(rw.steps.size() - 1) + " steps vs " +
                std::to_string(r1.steps.size() - 1) + "; ";
      continue;
    }
    std::size_t same = 0;
    for (std::size_t i = 0; i < r1.steps.size(); ++i) {
      if (r1.steps[i].newton_iterations == rw.steps[i].newton_iterations) ++same;
      for (std::size_t k = 0; k < r1.steps[i].wells.size(); ++k) {
        const auto& a = r1.steps[i].wells[k];
        const auto& b = rw.steps[i].wells[k];
        for (auto [u, v] : {std::pair{a.oil_rate, b.oil_rate}, {a.water_rate, b.water_rate}, {a.bhp, b.bhp}})
          worst = std::max(worst, std::abs(u - v) / std::max(1.0, std::abs(u)));
      }
    }
    const double match = static_cast<double>(same) / static_cast<double>(r1.steps.size());
    worst_match = std::min(worst_match, match);
    ok = ok && match >= 0.95;
  }
  ok = ok && worst <= 1e-6;
  detail += "worst relative difference " + fmt("%.2e", worst) + ", Newton counts match in " +
            fmt("%.1f%%", 100.0 * worst_match) + " of steps";
  return {ok, detail};
}

Outcome well_constraints() {
  const auto deck = load_deck(kExampleOne);
  const auto& r = example_one(1);
  if (!r.success) return {false, "run aborted: " + r.message};
  const double eps = r.config.newton.epsilon;
  double bhp_err = 0.0, rate_err = 0.0;
  std::size_t shut_rows = 0, shut_flow = 0;
  for (const auto& s : r.steps) {
    if (s.step == 0) continue;
    for (std::size_t k = 0; k < s.wells.size(); ++k) {
      const auto& w = s.wells[k];
      // Control in force during the step that ended at s.time.
      const auto sched = apply_schedule(deck.wells[k], s.time - 0.5 * s.dt);
      if (!sched) continue;
      if (w.mode == ControlMode::Bhp) {
        const double c = sched->mode == ControlMode::Bhp ? sched->target : sched->bhp_limit;
        bhp_err = std::max(bhp_err, std::abs(w.bhp - c) / std::max(1.0, std::abs(c)));
      } else if (w.mode == ControlMode::OilRate) {
        rate_err = std::max(rate_err, std::abs(w.oil_rate - sched->target) / std::max(1.0, sched->target));
      } else if (w.mode == ControlMode::WaterRate) {
        rate_err = std::max(rate_err, std::abs(w.water_rate - sched->target) / std::max(1.0, sched->target));
      }
    }
    // Injector shut in over (1200, 8000].
    if (s.time > 1200.0 && s.time <= 8000.0) {
      ++shut_rows;
      const auto& inj = s.wells[0];
      if (inj.mode != ControlMode::ShutIn || inj.oil_rate != 0.0 || inj.water_rate != 0.0) ++shut_flow;
    }
  }
  return {bhp_err <= 1e-6 && rate_err <= eps && shut_rows > 0 && shut_flow == 0,
          "bhp error " + fmt("%.1e", bhp_err) + ", rate error " + fmt("%.1e", rate_err) + ", " +
              std::to_string(shut_rows) + " shut-in steps with " + std::to_string(shut_flow) + " nonzero"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"forcing term clamp", forcing_clamp},
      {"jacobian vs finite differences", jacobian_fd},
      {"mass conservation", conservation},
      {"transform equivalence", transform_equivalence},
      {"potential permutation example", permutation_example},
      {"preconditioner effectiveness", preconditioner_effectiveness},
      {"cpr-fpf vs ras", cpr_vs_ras},
      {"standard vs inexact newton", newton_modes},
      {"krylov, ilu and amg oracles", solver_oracles},
      {"partition invariance", partition_invariance},
      {"well constraints", well_constraints},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
