#include "fimsim/cli.hpp"

#include <CLI11.hpp>

#include <map>
#include <ostream>

#include "fimsim/error.hpp"
#include "fimsim/report.hpp"
#include "fimsim/simulator.hpp"

namespace fimsim {

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fully implicit two-phase oil-water reservoir simulator"};

  std::string deck_path;
  int workers = 1;
  std::string out_dir = "out";
  RunOverrides ov;

  const std::map<std::string, KrylovKind> krylov_map{{"bicgstab", KrylovKind::Bicgstab}, {"gmres", KrylovKind::Gmres}};
  const std::map<std::string, PrecondKind> precond_map{
      {"none", PrecondKind::None}, {"ras", PrecondKind::Ras}, {"cpr-fpf", PrecondKind::CprFpf}};
  const std::map<std::string, DecouplingKind> decoupling_map{
      {"none", DecouplingKind::None}, {"qi", DecouplingKind::QuasiImpes}, {"abf", DecouplingKind::Abf}};
  const std::map<std::string, bool> onoff_map{{"on", true}, {"off", false}};
  const std::map<std::string, NewtonMode> newton_map{{"standard", NewtonMode::Standard},
                                                      {"inexact", NewtonMode::Inexact}};

  KrylovKind krylov{};
  PrecondKind precond{};
  DecouplingKind decoupling{};
  bool reorder = true;
  NewtonMode newton{};
  std::size_t restart = 0;
  int overlap = 0;
  double nltol = 0, lintol = 0, max_dt = 0, end_time = 0;

  app.add_option("--deck", deck_path, "Input deck")->required()->check(CLI::ExistingFile);
  app.add_option("--workers", workers, "Number of subdomains")->check(CLI::PositiveNumber);
  auto* o_solver = app.add_option("--solver", krylov, "Krylov method")->transform(CLI::CheckedTransformer(krylov_map));
  auto* o_restart = app.add_option("--restart", restart, "GMRES restart length")->check(CLI::PositiveNumber);
  auto* o_precond = app.add_option("--precond", precond, "Preconditioner")->transform(CLI::CheckedTransformer(precond_map));
  auto* o_overlap = app.add_option("--overlap", overlap, "RAS overlap layers")->check(CLI::NonNegativeNumber);
  auto* o_decoupling =
      app.add_option("--decoupling", decoupling, "Decoupling")->transform(CLI::CheckedTransformer(decoupling_map));
  auto* o_reorder = app.add_option("--reorder", reorder, "Potential reordering")->transform(CLI::CheckedTransformer(onoff_map));
  auto* o_newton = app.add_option("--newton", newton, "Newton variant")->transform(CLI::CheckedTransformer(newton_map));
  auto* o_nltol = app.add_option("--nltol", nltol, "Nonlinear tolerance")->check(CLI::PositiveNumber);
  auto* o_lintol = app.add_option("--lintol", lintol, "Linear tolerance for standard Newton")->check(CLI::PositiveNumber);
  auto* o_maxdt = app.add_option("--max-dt", max_dt, "Maximum time step (days)")->check(CLI::PositiveNumber);
  auto* o_end = app.add_option("--end-time", end_time, "Simulation end (days)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return 2;
  }

  if (o_solver->count()) ov.krylov = krylov;
  if (o_restart->count()) ov.restart = restart;
  if (o_precond->count()) ov.precond = precond;
  if (o_overlap->count()) ov.overlap = overlap;
  if (o_decoupling->count()) ov.decoupling = decoupling;
  if (o_reorder->count()) ov.reorder = reorder;
  if (o_newton->count()) ov.newton = newton;
  if (o_nltol->count()) ov.nltol = nltol;
  if (o_lintol->count()) ov.lintol = lintol;
  if (o_maxdt->count()) ov.max_dt = max_dt;
  if (o_end->count()) ov.end_time = end_time;

  if (o_restart->count() && o_solver->count() && krylov != KrylovKind::Gmres) {
    err << "error: --restart applies to --solver gmres only\n";
    return 2;
  }
  if (o_overlap->count() && o_precond->count() && precond == PrecondKind::None) {
    err << "error: --overlap needs --precond ras or cpr-fpf\n";
    return 2;
  }

  try {
    const Deck deck = load_deck(deck_path);
    for (const auto& w : deck.warnings) err << "warning: " << w << '\n';
    const auto result = run_simulation(deck, workers, ov);
    write_outputs(out_dir, result);
    const auto totals = iteration_totals(result);
    out << (result.success ? "completed" : "aborted") << ": t = " << result.final_state.t << " days, "
        << (result.steps.size() - 1) << " steps, " << totals.newton << " Newton, " << totals.linear << " linear\n";
    if (!result.success) {
      err << "error: " << result.message << '\n';
      return 1;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace fimsim
