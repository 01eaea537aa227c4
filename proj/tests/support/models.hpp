#pragma once

#include <random>

#include "fimsim/cases.hpp"
#include "fimsim/deck.hpp"
#include "fimsim/discretization.hpp"

namespace models {

// Box model from the closed-box deck, with capillary pressure so that p_w
// differs from p_o, optionally with one producer perforating two cells.
inline fimsim::ReservoirModel box(int nx, int ny, int nz, bool with_well) {
  using namespace fimsim;
  Deck d = make_closed_box_deck(nx, ny, nz);
  d.fluid.sat = SatFunctionTable({0.1, 0.3, 0.5, 0.7, 0.9}, {0.0, 0.05, 0.2, 0.45, 0.8}, {0.9, 0.5, 0.2, 0.05, 0.0},
                                 {8.0, 4.0, 2.0, 1.0, 0.5});
  d.geometry.dz = {20.0, 30.0, 50.0};
  d.geometry.dz.resize(static_cast<std::size_t>(nz), 25.0);
  if (with_well) {
    WellSpec w;
    w.name = "P";
    w.type = WellType::Producer;
    w.ref_depth = 3990.0;
    w.schedule.push_back({0.0, {ControlMode::OilRate, 500.0, 100.0}});
    d.wells = {w};
    d.completions.push_back({"P", nx - 1, ny - 1, 0, 2.0, std::nullopt, 0});
    if (nz > 1) d.completions.push_back({"P", nx - 1, ny - 1, 1, std::nullopt, 0.3, 0});
  }
  return build_model(d);
}

inline fimsim::SimulationState random_state(const fimsim::ReservoirModel& m, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> up(2500.0, 3500.0), us(0.22, 0.78), ub(1500.0, 2500.0);
  fimsim::SimulationState s;
  const std::size_t n = m.grid.num_cells();
  s.p.resize(n);
  s.s.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    s.p[c] = up(rng);
    s.s[c] = us(rng);
  }
  for (std::size_t w = 0; w < m.wells.size(); ++w) s.pb.push_back(ub(rng));
  return s;
}

inline std::vector<std::size_t> all_wells(const fimsim::ReservoirModel& m) {
  std::vector<std::size_t> a(m.wells.size());
  for (std::size_t w = 0; w < a.size(); ++w) a[w] = w;
  return a;
}

}  // namespace models
