#pragma once

#include <filesystem>
#include <iosfwd>

#include "fimsim/simulator.hpp"

namespace fimsim {

struct IterationTotals {
  std::size_t newton = 0;
  std::size_t linear = 0;
  double average_linear() const { return newton ? static_cast<double>(linear) / static_cast<double>(newton) : 0.0; }
};

// Totals over every logged Newton iteration, accepted or not.
IterationTotals iteration_totals(const SimulationResult& result);

void write_report_csv(std::ostream& os, const SimulationResult& result);
void write_iterations_csv(std::ostream& os, const SimulationResult& result);
void write_summary(std::ostream& os, const SimulationResult& result);

// report.csv, iterations.csv and summary.txt in dir (created if needed).
void write_outputs(const std::filesystem::path& dir, const SimulationResult& result);

}  // namespace fimsim
