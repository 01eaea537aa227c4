#include "fimsim/discretization.hpp"

#include <algorithm>
#include <exception>
#include <string>

#include "fimsim/error.hpp"
#include "assembly_kernel.hpp"
#include "flux.hpp"

namespace fimsim {

FimAssembler::FimAssembler(const ReservoirModel& model, const Partition& partition,
                           std::vector<std::size_t> active_wells)
    : model_(&model), partition_(&partition), active_(std::move(active_wells)) {
  const auto& grid = model.grid;
  const std::size_t n = grid.num_cells();
  if (partition.owner.size() != n) throw AssemblyError("partition does not match grid");
  blocks_ = {n, active_.size()};

  conn_ptr_.assign(n + 1, 0);
  for (std::size_t c = 0; c < n; ++c) {
    grid.for_each_neighbor(c, [&](std::size_t nb, Axis axis) {
      conn_.push_back({nb, face_geom_factor(grid, std::min(c, nb), std::max(c, nb), axis)});
    });
    conn_ptr_[c + 1] = conn_.size();
  }

  cell_perfs_.assign(n, {});
  for (std::size_t k = 0; k < active_.size(); ++k) {
    if (active_[k] >= model.wells.size()) throw AssemblyError("active well index out of range");
    const auto& well = model.wells[active_[k]];
    if (well.perforations.empty()) throw AssemblyError("well " + well.name + " has no perforations");
    for (std::size_t m = 0; m < well.perforations.size(); ++m) {
      const std::size_t c = well.perforations[m].cell;
      if (c >= n) throw AssemblyError("well " + well.name + " perforates a cell outside the grid");
      cell_perfs_[c].push_back({k, m});
    }
  }

  std::vector<std::vector<std::size_t>> rows(blocks_.size());
  row_owner_.assign(blocks_.size(), 0);
  for (std::size_t c = 0; c < n; ++c) {
    auto& r = rows[blocks_.pressure(c)];
    r.push_back(blocks_.pressure(c));
    r.push_back(blocks_.saturation(c));
    for (std::size_t q = conn_ptr_[c]; q < conn_ptr_[c + 1]; ++q) {
      r.push_back(blocks_.pressure(conn_[q].neighbor));
      r.push_back(blocks_.saturation(conn_[q].neighbor));
    }
    for (const auto& pr : cell_perfs_[c]) r.push_back(blocks_.well(pr.well));
    rows[blocks_.saturation(c)] = r;
    row_owner_[blocks_.pressure(c)] = row_owner_[blocks_.saturation(c)] = partition.owner[c];
  }
  for (std::size_t k = 0; k < active_.size(); ++k) {
    const auto& well = model.wells[active_[k]];
    auto& r = rows[blocks_.well(k)];
    r.push_back(blocks_.well(k));
    for (const auto& perf : well.perforations) {
      r.push_back(blocks_.pressure(perf.cell));
      r.push_back(blocks_.saturation(perf.cell));
    }
    row_owner_[blocks_.well(k)] = partition.owner[well.perforations.front().cell];
  }
  pattern_ = CsrMatrix::from_pattern(blocks_.size(), rows);
}

std::vector<double> FimAssembler::pack(const SimulationState& state) const {
  const std::size_t n = blocks_.n_cells;
  if (state.p.size() != n || state.s.size() != n || state.pb.size() != model_->wells.size())
    throw AssemblyError("state size does not match model");
  std::vector<double> x(blocks_.size());
  std::copy(state.p.begin(), state.p.end(), x.begin());
  std::copy(state.s.begin(), state.s.end(), x.begin() + static_cast<std::ptrdiff_t>(n));
  for (std::size_t k = 0; k < active_.size(); ++k) x[blocks_.well(k)] = state.pb[active_[k]];
  return x;
}

void FimAssembler::unpack(std::span<const double> x, SimulationState& state) const {
  const std::size_t n = blocks_.n_cells;
  if (x.size() != blocks_.size()) throw AssemblyError("unknown vector has wrong length");
  state.p.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
  state.s.assign(x.begin() + static_cast<std::ptrdiff_t>(n), x.begin() + static_cast<std::ptrdiff_t>(2 * n));
  state.pb.resize(model_->wells.size(), 0.0);
  for (std::size_t k = 0; k < active_.size(); ++k) state.pb[active_[k]] = x[blocks_.well(k)];
}


void FimAssembler::assemble(std::span<const double> x, const SimulationState& prev, double dt,
                            std::span<const WellControl> controls, std::vector<double>& residual,
                            CsrMatrix* jac) const {
  check_assembly_inputs(*this, x, prev, dt, controls, jac);
  const std::size_t n = blocks_.n_cells;
  const auto& part = *partition_;
  const auto& model = *model_;
  residual.assign(blocks_.size(), 0.0);
  if (jac) std::fill(jac->values().begin(), jac->values().end(), 0.0);

  PartitionedField pf(part), sf(part);
  pf.scatter_owned(x.subspan(0, n));
  sf.scatter_owned(x.subspan(n, n));
  halo_exchange(part, pf);
  halo_exchange(part, sf);

  auto rates = rate_storage(model, active_);
  std::vector<CellProperties> first_perf(active_.size());
  AssemblyKernel kernel{*this, x, dt, controls, residual, jac};

  const int nw = part.num_workers;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nw));
#pragma omp parallel for schedule(dynamic)
  for (int w = 0; w < nw; ++w) {
    try {
      const auto pl = pf.local(w);
      const auto sl = sf.local(w);
      const auto& g2l = part.global_to_local[static_cast<std::size_t>(w)];
      std::vector<CellProperties> props(pl.size());
      for (std::size_t l = 0; l < pl.size(); ++l)
        props[l] = evaluate_cell(pl[l], sl[l], model.grid.phi_ref(part.local_to_global(w, l)), model.fluid);
      auto local_props = [&](std::size_t cell) -> const CellProperties& {
        return props[static_cast<std::size_t>(g2l[cell])];
      };
      for (std::size_t c : part.local_cells[static_cast<std::size_t>(w)]) {
        const auto prev_props = evaluate_cell(prev.p[c], prev.s[c], model.grid.phi_ref(c), model.fluid);
        kernel.cell_rows(c, local_props, prev_props, rates.data(), first_perf.data());
      }
    } catch (...) {
      errors[static_cast<std::size_t>(w)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  kernel.well_rows(rates, first_perf);
}

std::vector<std::vector<PerforationRate>> FimAssembler::perforation_rates(
    std::span<const double> x, std::span<const WellControl> controls) const {
  if (controls.size() != active_.size()) throw AssemblyError("one control per active well required");
  const std::size_t n = blocks_.n_cells;
  const auto& model = *model_;
  auto rates = rate_storage(model, active_);
  for (std::size_t k = 0; k < active_.size(); ++k) {
    const auto& well = model.wells[active_[k]];
    for (std::size_t m = 0; m < well.perforations.size(); ++m) {
      const std::size_t c = well.perforations[m].cell;
      const auto cp = evaluate_cell(x[c], x[n + c], model.grid.phi_ref(c), model.fluid);
      rates[k][m] = perforation_rate(well, well.perforations[m], controls[k], x[blocks_.well(k)], cp);
    }
  }
  return rates;
}

FaceTransmissibility upstream_transmissibility(const ReservoirModel& model, std::size_t cell_a, std::size_t cell_b,
                                               int phase, const SimulationState& state) {
  const auto& grid = model.grid;
  const std::size_t a = std::min(cell_a, cell_b), b = std::max(cell_a, cell_b);
  FaceTransmissibility out;
  out.upstream = a;
  std::optional<Axis> axis;
  for (Axis ax : {Axis::X, Axis::Y, Axis::Z})
    if (grid.neighbor(a, ax, 1) == b) axis = ax;
  if (!axis) return out;
  const auto pa = evaluate_cell(state.p[a], state.s[a], grid.phi_ref(a), model.fluid);
  const auto pb = evaluate_cell(state.p[b], state.s[b], grid.phi_ref(b), model.fluid);
  const auto f = phase_flux(phase == 0 ? Phase::Oil : Phase::Water, face_geom_factor(grid, a, b, *axis), pa, pb,
                            grid.depth(a), grid.depth(b));
  out.value = f.trans;
  out.upstream = f.upstream_b ? b : a;
  return out;
}

std::vector<double> assemble_residual(const FimAssembler& assembler, const SimulationState& state,
                                      const SimulationState& prev, double dt, std::span<const WellControl> controls) {
  std::vector<double> r;
  assembler.assemble(assembler.pack(state), prev, dt, controls, r, nullptr);
  return r;
}

JacobianSystem assemble_jacobian(const FimAssembler& assembler, const SimulationState& state,
                                 const SimulationState& prev, double dt, std::span<const WellControl> controls) {
  JacobianSystem sys;
  sys.matrix = assembler.pattern();
  std::vector<double> f;
  assembler.assemble(assembler.pack(state), prev, dt, controls, f, &sys.matrix);
  sys.rhs.resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) sys.rhs[i] = -f[i];
  sys.blocks = assembler.blocks();
  sys.row_owner = assembler.row_owner();
  sys.num_workers = assembler.partition().num_workers;
  return sys;
}

}  // namespace fimsim
