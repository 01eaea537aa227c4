#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fimsim/config.hpp"
#include "fimsim/discretization.hpp"
#include "fimsim/grid.hpp"
#include "fimsim/props.hpp"
#include "fimsim/wells.hpp"

namespace fimsim {

// One COMPDAT record, 0-based cell coordinates. Exactly one of well_index
// and radius is set.
struct Completion {
  std::string well;
  int i = 0, j = 0, k = 0;
  std::optional<double> well_index;
  std::optional<double> radius;
  std::size_t line = 0;
};

struct Deck {
  GeometrySection geometry;
  FluidModel fluid;
  std::optional<double> gas_density;  // read, unused by the two-phase model
  std::optional<EquilibriumSpec> equil;
  std::vector<WellSpec> wells;  // schedule filled, perforations from completions
  std::vector<Completion> completions;
  SolverConfig solver;
  double end_time = 0.0;
  std::vector<double> report_times;
  std::vector<std::string> warnings;
};

// Keyword deck: "--" comments, records terminated by "/", N*v repeats.
// Relative FILE paths resolve against base_dir.
Deck parse_deck(std::string_view text, const std::filesystem::path& base_dir = ".");
Deck load_deck(const std::filesystem::path& path);

// Grid, fluid and wells with perforation cells, depths and well indices.
ReservoirModel build_model(const Deck& deck);

}  // namespace fimsim
