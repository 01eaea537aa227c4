#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <set>
#include <fstream>

#include "fimsim/deck.hpp"
#include "fimsim/error.hpp"

using namespace fimsim;

namespace {

const std::filesystem::path kData = FIMSIM_DATA_DIR;

const char* kMinimal = R"(DIMENS
2 2 1 /
DX
100 /
DY
100 /
DZ
10 /
TOPS
1000 /
PERMX
50 /
PORO
0.25 /
DENSITY
45 62 /
PVTO
14.7 1e-5 1.0 0 /
PVTW
14.7 3e-6 0.5 0 /
SWOF
0.2 0 1 0
0.8 1 0 0 /
EQUIL
1000 2000 5000 /
)";

std::size_t error_line(const std::string& text) {
  try {
    parse_deck(text);
  } catch (const DeckError& e) {
    return e.line();
  }
  return static_cast<std::size_t>(-1);
}

std::string error_text(const std::string& text) {
  try {
    parse_deck(text);
  } catch (const DeckError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Deck, ExampleOne) {
  const auto d = load_deck(kData / "mxsmo031.deck");
  const auto m = build_model(d);
  EXPECT_EQ(m.grid.num_cells(), 300u);
  ASSERT_EQ(m.wells.size(), 2u);
  EXPECT_EQ(m.wells[0].name, "INJ");
  EXPECT_EQ(m.wells[0].type, WellType::Injector);
  EXPECT_EQ(m.wells[0].perforations[0].well_index, 1e5);
  EXPECT_EQ(m.wells[1].perforations[0].cell, 299u);
  EXPECT_DOUBLE_EQ(m.wells[1].perforations[0].depth, 991.0);
  std::set<double> times;
  for (const auto& w : d.wells)
    for (const auto& e : w.schedule) times.insert(e.start);
  EXPECT_EQ(times.size(), 8u);
  EXPECT_EQ(d.wells[0].schedule.size(), 8u);
  // "1000 INJ 10000" inherits the previous rate mode.
  EXPECT_EQ(d.wells[0].schedule[1].control.mode, ControlMode::WaterRate);
  EXPECT_EQ(d.wells[0].schedule[1].control.target, 10000.0);
  EXPECT_EQ(d.wells[1].schedule[2].control, d.wells[1].schedule[1].control);
  EXPECT_EQ(d.wells[1].schedule[0].control.mode, ControlMode::ShutIn);
  EXPECT_EQ(d.wells[1].schedule[2].control.bhp_limit, 100.0);
  EXPECT_EQ(d.end_time, 20000.0);
  EXPECT_EQ(d.solver.timestep.dt_max, 100.0);
  EXPECT_EQ(d.equil->woc_depth, 2000.0);
  ASSERT_EQ(d.warnings.size(), 1u);
  EXPECT_NE(d.warnings[0].find("gas density"), std::string::npos);
}

TEST(Deck, Spe1Contact) {
  const auto d = load_deck(kData / "spe1.deck");
  EXPECT_EQ(d.equil->woc_depth, 9500.0);
  EXPECT_EQ(d.equil->ref_pressure, 4800.0);
  EXPECT_EQ(build_model(d).grid.num_cells(), 300u);
}

TEST(Deck, MinimalParses) {
  const auto d = parse_deck(kMinimal);
  EXPECT_TRUE(d.wells.empty());
  EXPECT_EQ(d.geometry.nx, 2);
  EXPECT_TRUE(d.warnings.empty());
  EXPECT_EQ(d.fluid.oil.rho_ref, 45.0);
  EXPECT_EQ(d.fluid.water.rho_ref, 62.0);
}

TEST(Deck, MissingSections) {
  EXPECT_EQ(error_text(""), "missing DIMENS");
  EXPECT_EQ(error_text("-- only a comment\n"), "missing DIMENS");
  std::string no_swof = kMinimal;
  no_swof.replace(no_swof.find("SWOF"), std::string("SWOF\n0.2 0 1 0\n0.8 1 0 0 /\n").size(), "");
  EXPECT_EQ(error_text(no_swof), "missing SWOF");
}

TEST(Deck, ErrorsCarryLineNumbers) {
  std::string bad_number = kMinimal;
  bad_number.replace(bad_number.find("0.25"), 4, "0.2x");
  EXPECT_EQ(error_line(bad_number), 14u);
  EXPECT_NE(error_text(bad_number).find("malformed number '0.2x'"), std::string::npos);

  const std::string bad_cell = std::string(kMinimal) +
                               "WELSPECS\nP PROD 1000 100 /\n/\n"
                               "COMPDAT\nP 3 1 1 WI 1 /\n/\n";
  EXPECT_EQ(error_line(bad_cell), 30u);
  EXPECT_NE(error_text(bad_cell).find("outside the grid"), std::string::npos);

  std::string unsorted = kMinimal;
  unsorted.replace(unsorted.find("0.8 1 0 0"), 3, "0.1");
  EXPECT_EQ(error_line(unsorted), 21u);

  EXPECT_EQ(error_line(std::string(kMinimal) + "ENDTIME\n-5 /\n"), 26u);
  EXPECT_EQ(error_line(std::string(kMinimal) + "SOLVER\nPRECOND ILU /\n/\n"), 27u);
}

TEST(Deck, UnknownKeywordWarnsAndSkips) {
  const auto d = parse_deck(std::string(kMinimal) + "FOOBAR\n1 2 3 /\nENDTIME\n7 /\n");
  ASSERT_EQ(d.warnings.size(), 1u);
  EXPECT_NE(d.warnings[0].find("FOOBAR"), std::string::npos);
  EXPECT_EQ(d.end_time, 7.0);
  EXPECT_NE(error_text(std::string(kMinimal) + "42 /\n").find("expected a keyword"), std::string::npos);
}

TEST(Deck, RepeatsAndIncludes) {
  std::string text = kMinimal;
  text.replace(text.find("PERMX\n50 /"), 10, "PERMX\n2*50 60 70 /");
  auto d = parse_deck(text);
  EXPECT_EQ(d.geometry.permx, (std::vector<double>{50, 50, 60, 70}));

  const auto dir = std::filesystem::temp_directory_path() / "fimsim_deck_include";
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "poro.inc");
    f << "0.1 0.2\n2*0.3\n";
  }
  text = kMinimal;
  text.replace(text.find("PORO\n0.25 /"), 11, "PORO\nFILE poro.inc /");
  d = parse_deck(text, dir);
  EXPECT_EQ(d.geometry.poro, (std::vector<double>{0.1, 0.2, 0.3, 0.3}));
  std::filesystem::remove_all(dir);
}

TEST(Deck, ScheduleRules) {
  const std::string wells = std::string(kMinimal) +
                            "WELSPECS\nI INJ 1000 5000 /\nP PROD 1000 100 /\n/\n"
                            "COMPDAT\nI 1 1 1 WI 1 /\nP 2 2 1 RADIUS 0.3 /\n/\n";
  const auto d = parse_deck(wells + "SCHEDULE\n0 I 300 /\n0 P BHP 900 /\n5 P LRAT 50 /\n9 I STOP /\n/\n");
  EXPECT_EQ(d.wells[0].schedule[0].control.mode, ControlMode::WaterRate);
  EXPECT_EQ(d.wells[0].schedule[1].control.mode, ControlMode::Stop);
  EXPECT_EQ(d.wells[1].schedule[0].control.target, 900.0);
  EXPECT_EQ(d.wells[1].schedule[1].control.mode, ControlMode::LiquidRate);
  EXPECT_GT(build_model(d).wells[1].perforations[0].well_index, 0.0);

  EXPECT_NE(error_text(wells + "SCHEDULE\n0 I ORAT 5 /\n/\n").find("ORAT"), std::string::npos);
  EXPECT_NE(error_text(wells + "SCHEDULE\n5 P BHP 9 /\n1 P BHP 8 /\n/\n").find("increase"), std::string::npos);
  EXPECT_NE(error_text(wells + "SCHEDULE\n0 P SHUTIN 4 /\n/\n").find("no target"), std::string::npos);
  EXPECT_NE(error_text(wells + "SCHEDULE\n0 P WRAT -4 /\n/\n").find("non-negative"), std::string::npos);
  EXPECT_NE(error_text(std::string(kMinimal) + "WELSPECS\nI INJ 1000 5000 /\n/\n").find("no COMPDAT"),
            std::string::npos);
}

TEST(Deck, SolverAndTimestepKeys) {
  const auto d = parse_deck(std::string(kMinimal) +
                            "SOLVER\nNEWTON STANDARD /\nKRYLOV GMRES /\nRESTART 30 /\nPRECOND RAS /\n"
                            "DECOUPLING ABF /\nREORDER OFF /\nOVERLAP 2 /\n/\n"
                            "TIMESTEP\ninit 0.5 /\nmax 20 /\ncut 0.25 /\n/\n");
  EXPECT_EQ(d.solver.newton.mode, NewtonMode::Standard);
  EXPECT_EQ(d.solver.linear.krylov, KrylovKind::Gmres);
  EXPECT_EQ(d.solver.linear.restart, 30u);
  EXPECT_EQ(d.solver.linear.precond, PrecondKind::Ras);
  EXPECT_EQ(d.solver.linear.decoupling, DecouplingKind::Abf);
  EXPECT_FALSE(d.solver.linear.reorder);
  EXPECT_EQ(d.solver.linear.overlap, 2);
  EXPECT_EQ(d.solver.timestep.dt_init, 0.5);
  EXPECT_EQ(d.solver.timestep.cut, 0.25);
  EXPECT_THROW(parse_deck(std::string(kMinimal) + "TIMESTEP\ninit 500 /\n/\n"), DeckError);
}
