#include <gtest/gtest.h>

#include <cmath>

#include "fimsim/error.hpp"
#include "fimsim/units.hpp"
#include "support/models.hpp"
#include "support/oracles.hpp"

using namespace fimsim;

namespace {

std::vector<WellControl> controls_for(const ReservoirModel& m, ControlMode mode = ControlMode::OilRate) {
  std::vector<WellControl> c;
  for (std::size_t w = 0; w < m.wells.size(); ++w) c.push_back({mode, mode == ControlMode::Bhp ? 2000.0 : 500.0, 100.0});
  return c;
}

double column_error(const CsrMatrix& j, const std::vector<double>& fd, std::size_t col) {
  double num = 0.0, den = 0.0;
  for (std::size_t r = 0; r < j.rows(); ++r) {
    const double a = j.at(r, col);
    num += (a - fd[r]) * (a - fd[r]);
    den += a * a;
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace

TEST(Assembly, UniformStateWithoutGravityIsStatic) {
  auto m = models::box(3, 3, 1, false);
  const auto part = partition_grid(m.grid, 1);
  FimAssembler as(m, part, {});
  SimulationState s;
  s.p.assign(9, 3000.0);
  s.s.assign(9, 0.4);
  const auto f = assemble_residual(as, s, s, 1.0, {});
  for (double v : f) EXPECT_NEAR(v, 0.0, 1e-9);
}

TEST(Assembly, GravityDrivesSegregation) {
  auto m = models::box(1, 1, 2, false);
  const auto part = partition_grid(m.grid, 1);
  FimAssembler as(m, part, {});
  SimulationState s;
  s.p.assign(2, 3000.0);
  s.s.assign(2, 0.5);
  const auto f = assemble_residual(as, s, s, 1.0, {});
  // Equal pressures: fluid drains from the upper cell into the lower one.
  EXPECT_GT(f[0], 0.0);
  EXPECT_LT(f[1], 0.0);
  EXPECT_NEAR(f[0] + f[1], 0.0, 1e-9 * std::abs(f[0]));
}

TEST(Assembly, FluxAntisymmetry) {
  auto m = models::box(2, 1, 1, false);
  const auto part = partition_grid(m.grid, 1);
  FimAssembler as(m, part, {});
  SimulationState s;
  s.p = {3100.0, 2900.0};
  s.s = {0.6, 0.3};
  const auto f = assemble_residual(as, s, s, 1.0, {});
  EXPECT_EQ(f[0], -f[1]);
  EXPECT_EQ(f[2], -f[3]);
}

TEST(Assembly, SingleCellInjector) {
  Deck d = make_closed_box_deck(1, 1, 1);
  WellSpec w;
  w.name = "I";
  w.type = WellType::Injector;
  w.ref_depth = 4000.0;
  d.wells = {w};
  d.completions.push_back({"I", 0, 0, 0, 5.0, std::nullopt, 0});
  const auto m = build_model(d);
  const auto part = partition_grid(m.grid, 1);
  FimAssembler as(m, part, {0});
  SimulationState prev;
  prev.p = {3000.0};
  prev.s = {0.3};
  prev.pb = {3200.0};
  SimulationState cur = prev;
  cur.p = {3050.0};
  const std::vector<WellControl> ctl{{ControlMode::Bhp, 3200.0, 9000.0}};
  const auto f = assemble_residual(as, cur, prev, 2.0, ctl);
  const auto c1 = evaluate_cell(3050.0, 0.3, m.grid.phi_ref(0), m.fluid);
  const auto c0 = evaluate_cell(3000.0, 0.3, m.grid.phi_ref(0), m.fluid);
  const double v = m.grid.volume(0);
  const double q = 5.0 * units::kFt3PerBbl * c1.rho_w * c1.lambda_t * (3200.0 - c1.p_w);
  EXPECT_NEAR(f[1], v / 2.0 * (c1.mass_w - c0.mass_w) - q, 1e-9 * std::abs(q));
  EXPECT_NEAR(f[0], v / 2.0 * (c1.mass_o - c0.mass_o), 1e-9 * std::abs(q));
  EXPECT_EQ(f[2], 0.0);
}

TEST(Assembly, RejectsNonPositiveDt) {
  auto m = models::box(2, 2, 1, false);
  const auto part = partition_grid(m.grid, 1);
  FimAssembler as(m, part, {});
  const auto s = models::random_state(m, 1);
  EXPECT_THROW(assemble_residual(as, s, s, 0.0, {}), AssemblyError);
}

TEST(Assembly, UpstreamTransmissibility) {
  auto m = models::box(2, 1, 1, false);
  SimulationState s;
  s.p = {3000.0, 3000.0};
  s.s = {0.5, 0.5};
  const auto tie = upstream_transmissibility(m, 0, 1, 0, s);
  EXPECT_EQ(tie.upstream, 0u);
  // Upstream water is immobile.
  s.p = {3000.0, 3100.0};
  s.s = {0.9, 0.1};
  const auto tw = upstream_transmissibility(m, 0, 1, 1, s);
  EXPECT_EQ(tw.upstream, 1u);
  EXPECT_EQ(tw.value, 0.0);
  EXPECT_EQ(upstream_transmissibility(m, 0, 0, 0, s).value, 0.0);
}

TEST(Assembly, NoWellsMeansNoWellRows) {
  auto m = models::box(2, 2, 2, false);
  const auto part = partition_grid(m.grid, 1);
  FimAssembler as(m, part, {});
  EXPECT_EQ(as.pattern().rows(), 16u);
}

TEST(Assembly, IncompressibleAccumulationHasNoPressureColumn) {
  Deck d = make_closed_box_deck(1, 1, 1);
  d.fluid.rock.compressibility = 0.0;
  d.fluid.oil.compressibility = 0.0;
  d.fluid.water.compressibility = 0.0;
  const auto m = build_model(d);
  const auto part = partition_grid(m.grid, 1);
  FimAssembler as(m, part, {});
  SimulationState s;
  s.p = {3000.0};
  s.s = {0.4};
  const auto sys = assemble_jacobian(as, s, s, 1.0, {});
  EXPECT_EQ(sys.matrix.at(0, 0), 0.0);
  EXPECT_EQ(sys.matrix.at(1, 0), 0.0);
  EXPECT_NE(sys.matrix.at(1, 1), 0.0);
}

TEST(Assembly, JacobianMatchesFiniteDifferences) {
  auto m = models::box(3, 3, 3, true);
  for (auto mode : {ControlMode::OilRate, ControlMode::Bhp, ControlMode::ShutIn}) {
    const auto part = partition_grid(m.grid, 1);
    FimAssembler as(m, part, models::all_wells(m));
    const auto prev = models::random_state(m, 7);
    const auto cur = models::random_state(m, 8);
    const auto ctl = controls_for(m, mode);
    const auto sys = assemble_jacobian(as, cur, prev, 5.0, ctl);
    const auto x = as.pack(cur);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const bool sat = j >= m.grid.num_cells() && j < 2 * m.grid.num_cells();
      const double h = sat ? 1e-7 : 1e-7 * std::abs(x[j]);
      const auto fd = oracle::fd_column(as, x, prev, 5.0, ctl, j, h);
      EXPECT_LT(column_error(sys.matrix, fd, j), 1e-5) << "column " << j << " mode " << to_string(mode);
    }
  }
}

TEST(Assembly, PatternIsStateIndependent) {
  auto m = models::box(3, 2, 2, true);
  const auto part = partition_grid(m.grid, 2);
  FimAssembler as(m, part, models::all_wells(m));
  const auto ctl = controls_for(m);
  const auto a = assemble_jacobian(as, models::random_state(m, 1), models::random_state(m, 2), 1.0, ctl);
  const auto b = assemble_jacobian(as, models::random_state(m, 3), models::random_state(m, 4), 3.0, ctl);
  EXPECT_TRUE(a.matrix.same_pattern(b.matrix));
  EXPECT_TRUE(a.matrix.same_pattern(as.pattern()));
}

TEST(Assembly, ParallelMatchesReferenceAcrossPartitions) {
  auto m = models::box(6, 4, 3, true);
  const auto prev = models::random_state(m, 11);
  const auto cur = models::random_state(m, 12);
  const auto ctl = controls_for(m);
  const auto p1 = partition_grid(m.grid, 1);
  FimAssembler ref(m, p1, models::all_wells(m));
  std::vector<double> f_ref;
  CsrMatrix j_ref = ref.pattern();
  ref.assemble_reference(ref.pack(cur), prev, 2.0, ctl, f_ref, &j_ref);
  for (int workers : {1, 2, 3}) {
    const auto part = partition_grid(m.grid, workers);
    FimAssembler as(m, part, models::all_wells(m));
    std::vector<double> f;
    CsrMatrix j = as.pattern();
    as.assemble(as.pack(cur), prev, 2.0, ctl, f, &j);
    ASSERT_TRUE(j.same_pattern(j_ref));
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(f[i], f_ref[i]) << "row " << i << " workers " << workers;
    for (std::size_t k = 0; k < j.nnz(); ++k) EXPECT_EQ(j.values()[k], j_ref.values()[k]);
  }
}

TEST(Equilibrium, ReferenceDepthAndContact) {
  Deck d = make_closed_box_deck(2, 2, 1);
  d.equil = EquilibriumSpec{4000.0, 3000.0, 1e5};
  auto m = build_model(d);
  auto s = initialize_equilibrium(*d.equil, m);
  for (double p : s.p) EXPECT_NEAR(p, 3000.0, 1e-9);
  for (double sw : s.s) EXPECT_EQ(sw, m.fluid.sat.min_sw());
}

TEST(Equilibrium, IncompressibleWaterColumn) {
  Deck d = make_closed_box_deck(1, 1, 5);
  d.fluid.water.compressibility = 0.0;
  d.equil = EquilibriumSpec{3900.0, 2000.0, 3000.0};
  auto m = build_model(d);
  const auto s = initialize_equilibrium(*d.equil, m);
  for (std::size_t c = 0; c < 5; ++c) {
    const double z = m.grid.depth(c);
    EXPECT_NEAR(s.p[c], 2000.0 + m.fluid.water.rho_ref * units::kGravity * (z - 3900.0), 1e-9);
    EXPECT_EQ(s.s[c], m.fluid.sat.max_sw());
  }
}

TEST(Equilibrium, ExampleOneIsAllOil) {
  const auto d = load_deck(std::filesystem::path(FIMSIM_DATA_DIR) / "mxsmo031.deck");
  const auto m = build_model(d);
  const auto s = initialize_equilibrium(*d.equil, m);
  for (double sw : s.s) EXPECT_EQ(sw, 0.2);
  for (std::size_t c = 1; c < s.p.size(); ++c)
    if (m.grid.depth(c) > m.grid.depth(c - 1)) EXPECT_GT(s.p[c], s.p[c - 1]);
  EXPECT_EQ(s.pb.size(), 2u);
}
