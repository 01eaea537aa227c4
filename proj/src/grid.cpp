#include "fimsim/grid.hpp"

#include <string>

#include "fimsim/error.hpp"

namespace fimsim {

namespace {

std::vector<double> expand_axis(const std::vector<double>& values, int count, const char* keyword) {
  if (values.empty()) throw GridError(std::string("missing ") + keyword);
  std::vector<double> out;
  if (values.size() == 1) {
    out.assign(count, values[0]);
  } else if (values.size() == static_cast<std::size_t>(count)) {
    out = values;
  } else {
    throw GridError(std::string(keyword) + ": expected 1 or " + std::to_string(count) + " values, got " +
                    std::to_string(values.size()));
  }
  for (double v : out) {
    if (!(v > 0.0)) throw GridError(std::string(keyword) + ": cell size must be positive");
  }
  return out;
}

std::vector<double> expand_property(const std::vector<double>& values, int nx, int ny, int nz,
                                    const char* keyword) {
  const std::size_t n = static_cast<std::size_t>(nx) * ny * nz;
  const std::size_t per_layer = static_cast<std::size_t>(nx) * ny;
  std::vector<double> out(n);
  if (values.size() == 1) {
    out.assign(n, values[0]);
  } else if (values.size() == static_cast<std::size_t>(nz)) {
    for (std::size_t c = 0; c < n; ++c) out[c] = values[c / per_layer];
  } else if (values.size() == n) {
    out = values;
  } else {
    throw GridError(std::string(keyword) + ": expected 1, " + std::to_string(nz) + " or " + std::to_string(n) +
                    " values, got " + std::to_string(values.size()));
  }
  return out;
}

}  // namespace

StructuredGrid::StructuredGrid(int nx, int ny, int nz, std::vector<double> dx, std::vector<double> dy,
                               std::vector<double> dz, double top_depth, std::vector<double> kx,
                               std::vector<double> ky, std::vector<double> kz, std::vector<double> phi_ref)
    : nx_(nx),
      ny_(ny),
      nz_(nz),
      dx_(std::move(dx)),
      dy_(std::move(dy)),
      dz_(std::move(dz)),
      top_depth_(top_depth),
      kx_(std::move(kx)),
      ky_(std::move(ky)),
      kz_(std::move(kz)),
      phi_ref_(std::move(phi_ref)) {
  if (nx_ < 1 || ny_ < 1 || nz_ < 1) throw GridError("DIMENS: cell counts must be >= 1");
  if (dx_.size() != static_cast<std::size_t>(nx_) || dy_.size() != static_cast<std::size_t>(ny_) ||
      dz_.size() != static_cast<std::size_t>(nz_))
    throw GridError("cell size arrays do not match DIMENS");
  const std::size_t n = num_cells();
  if (kx_.size() != n || ky_.size() != n || kz_.size() != n || phi_ref_.size() != n)
    throw GridError("property arrays do not match cell count");
  for (std::size_t c = 0; c < n; ++c) {
    if (kx_[c] < 0.0) throw GridError("PERMX: permeability must be non-negative");
    if (ky_[c] < 0.0) throw GridError("PERMY: permeability must be non-negative");
    if (kz_[c] < 0.0) throw GridError("PERMZ: permeability must be non-negative");
    if (!(phi_ref_[c] > 0.0 && phi_ref_[c] <= 1.0)) throw GridError("PORO: porosity must lie in (0, 1]");
  }
  layer_depth_.resize(nz_);
  layer_depth_[0] = top_depth_;
  for (int k = 1; k < nz_; ++k) layer_depth_[k] = layer_depth_[k - 1] + 0.5 * (dz_[k - 1] + dz_[k]);
}

int StructuredGrid::count(Axis a) const noexcept {
  switch (a) {
    case Axis::X: return nx_;
    case Axis::Y: return ny_;
    case Axis::Z: return nz_;
  }
  return 0;
}

std::array<int, 3> StructuredGrid::ijk(std::size_t cell) const noexcept {
  const auto nxy = static_cast<std::size_t>(nx_) * ny_;
  const int k = static_cast<int>(cell / nxy);
  const auto rem = cell % nxy;
  return {static_cast<int>(rem % nx_), static_cast<int>(rem / nx_), k};
}

double StructuredGrid::length(std::size_t cell, Axis a) const {
  const auto [i, j, k] = ijk(cell);
  switch (a) {
    case Axis::X: return dx_[i];
    case Axis::Y: return dy_[j];
    case Axis::Z: return dz_[k];
  }
  return 0.0;
}

double StructuredGrid::cross_section(std::size_t cell, Axis a) const {
  const auto [i, j, k] = ijk(cell);
  switch (a) {
    case Axis::X: return dy_[j] * dz_[k];
    case Axis::Y: return dx_[i] * dz_[k];
    case Axis::Z: return dx_[i] * dy_[j];
  }
  return 0.0;
}

double StructuredGrid::volume(std::size_t cell) const {
  const auto [i, j, k] = ijk(cell);
  return dx_[i] * dy_[j] * dz_[k];
}

double StructuredGrid::perm(std::size_t cell, Axis a) const {
  switch (a) {
    case Axis::X: return kx_[cell];
    case Axis::Y: return ky_[cell];
    case Axis::Z: return kz_[cell];
  }
  return 0.0;
}

std::optional<std::size_t> StructuredGrid::neighbor(std::size_t cell, Axis a, int dir) const {
  auto [i, j, k] = ijk(cell);
  switch (a) {
    case Axis::X: i += dir; break;
    case Axis::Y: j += dir; break;
    case Axis::Z: k += dir; break;
  }
  if (i < 0 || i >= nx_ || j < 0 || j >= ny_ || k < 0 || k >= nz_) return std::nullopt;
  return index(i, j, k);
}

StructuredGrid build_grid(const GeometrySection& g) {
  if (g.nx < 1 || g.ny < 1 || g.nz < 1) throw GridError("DIMENS: cell counts must be >= 1");
  if (!g.top_depth) throw GridError("missing TOPS");
  if (g.permx.empty()) throw GridError("missing PERMX");
  if (g.poro.empty()) throw GridError("missing PORO");
  auto dx = expand_axis(g.dx, g.nx, "DX");
  auto dy = expand_axis(g.dy, g.ny, "DY");
  auto dz = expand_axis(g.dz, g.nz, "DZ");
  auto kx = expand_property(g.permx, g.nx, g.ny, g.nz, "PERMX");
  auto ky = g.permy.empty() ? kx : expand_property(g.permy, g.nx, g.ny, g.nz, "PERMY");
  auto kz = g.permz.empty() ? kx : expand_property(g.permz, g.nx, g.ny, g.nz, "PERMZ");
  auto phi = expand_property(g.poro, g.nx, g.ny, g.nz, "PORO");
  return StructuredGrid(g.nx, g.ny, g.nz, std::move(dx), std::move(dy), std::move(dz), *g.top_depth,
                        std::move(kx), std::move(ky), std::move(kz), std::move(phi));
}

double face_geom_factor(const StructuredGrid& grid, std::size_t a, std::size_t b, Axis axis) {
  const auto nb_plus = grid.neighbor(a, axis, 1);
  const auto nb_minus = grid.neighbor(a, axis, -1);
  if (!((nb_plus && *nb_plus == b) || (nb_minus && *nb_minus == b)))
    throw GridError("face_geom_factor: cells " + std::to_string(a) + " and " + std::to_string(b) +
                    " are not neighbors along the requested axis");
  const double ka = grid.perm(a, axis);
  const double kb = grid.perm(b, axis);
  if (ka == 0.0 || kb == 0.0) return 0.0;
  // Neighbors along an axis share the same cross-section on a tensor grid.
  const double area = grid.cross_section(a, axis);
  const double ra = grid.length(a, axis) / (ka * area);
  const double rb = grid.length(b, axis) / (kb * area);
  return 2.0 / (ra + rb);
}

}  // namespace fimsim
