#pragma once

#include <cstdint>

#include "fimsim/deck.hpp"

namespace fimsim {

struct WaterfloodOptions {
  int nx = 30, ny = 30, nz = 3;
  double sigma = 2.0;            // std. dev. of ln(k)
  double mean_perm = 100.0;      // mD, geometric mean
  double end_time = 30.0;        // days
  double injection_rate = 2000.0;  // bbl/day
  double production_bhp = 2500.0;  // psi
};

// Five-spot waterflood on a log-normal permeability field: a rate-controlled
// water injector in the central column and BHP producers in the four corners.
Deck make_waterflood_deck(std::uint64_t seed, const WaterfloodOptions& options = {});

// Grid, rock and fluids shared by the bundled example decks, with no wells.
Deck make_closed_box_deck(int nx, int ny, int nz);

}  // namespace fimsim
