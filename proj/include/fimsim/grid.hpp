#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fimsim {

enum class Axis : int { X = 0, Y = 1, Z = 2 };

// Geometry keywords as read from a deck. Size arrays may hold one value
// (uniform) or one value per cell along the axis. Property arrays may hold
// one value, one value per layer, or one value per cell.
struct GeometrySection {
  int nx = 0;
  int ny = 0;
  int nz = 0;
  std::vector<double> dx;
  std::vector<double> dy;
  std::vector<double> dz;
  std::optional<double> top_depth;
  std::vector<double> permx;
  std::vector<double> permy;
  std::vector<double> permz;
  std::vector<double> poro;
};

// Tensor-product Cartesian grid, natural ordering with i fastest.
// Depths are positive downward and refer to cell centers.
class StructuredGrid {
 public:
  StructuredGrid() = default;
  StructuredGrid(int nx, int ny, int nz, std::vector<double> dx, std::vector<double> dy,
                 std::vector<double> dz, double top_depth, std::vector<double> kx,
                 std::vector<double> ky, std::vector<double> kz, std::vector<double> phi_ref);

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  int nz() const noexcept { return nz_; }
  std::size_t num_cells() const noexcept { return static_cast<std::size_t>(nx_) * ny_ * nz_; }
  int count(Axis a) const noexcept;

  std::size_t index(int i, int j, int k) const noexcept {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(nx_) * (j + static_cast<std::size_t>(ny_) * k);
  }
  std::array<int, 3> ijk(std::size_t cell) const noexcept;

  double dx(int i) const { return dx_[i]; }
  double dy(int j) const { return dy_[j]; }
  double dz(int k) const { return dz_[k]; }
  double length(std::size_t cell, Axis a) const;
  double cross_section(std::size_t cell, Axis a) const;

  double volume(std::size_t cell) const;
  double depth(std::size_t cell) const { return layer_depth_[ijk(cell)[2]]; }
  double top_depth() const noexcept { return top_depth_; }
  double perm(std::size_t cell, Axis a) const;
  double phi_ref(std::size_t cell) const { return phi_ref_[cell]; }

  std::optional<std::size_t> neighbor(std::size_t cell, Axis a, int dir) const;

  // Face neighbors in the fixed order -x, +x, -y, +y, -z, +z (absent ones skipped).
  template <class Fn>
  void for_each_neighbor(std::size_t cell, Fn&& fn) const {
    static constexpr std::array<Axis, 3> axes{Axis::X, Axis::Y, Axis::Z};
    for (Axis a : axes) {
      for (int dir : {-1, 1}) {
        if (auto nb = neighbor(cell, a, dir)) fn(*nb, a);
      }
    }
  }

 private:
  int nx_ = 0, ny_ = 0, nz_ = 0;
  std::vector<double> dx_, dy_, dz_;
  double top_depth_ = 0.0;
  std::vector<double> layer_depth_;
  std::vector<double> kx_, ky_, kz_, phi_ref_;
};

StructuredGrid build_grid(const GeometrySection& geometry);

// K*A/dd between two face neighbors: harmonic combination of half-cell
// contributions, 2 / (dd_a/(K_a A) + dd_b/(K_b A)), in mD*ft.
double face_geom_factor(const StructuredGrid& grid, std::size_t cell_a, std::size_t cell_b, Axis axis);

// Slab decomposition of the grid into worker-owned subdomains with a
// one-layer halo (6-connectivity).
struct Partition {
  int num_workers = 1;
  Axis axis = Axis::X;
  std::vector<int> owner;
  std::vector<std::vector<std::size_t>> local_cells;
  std::vector<std::vector<std::size_t>> halo_cells;
  // Per worker: global cell -> local index (owned first, then halo), -1 if absent.
  std::vector<std::vector<std::int64_t>> global_to_local;

  std::size_t local_size(int w) const { return local_cells[w].size() + halo_cells[w].size(); }
  std::size_t local_to_global(int w, std::size_t l) const {
    const auto& own = local_cells[w];
    return l < own.size() ? own[l] : halo_cells[w][l - own.size()];
  }
};

Partition partition_grid(const StructuredGrid& grid, int num_workers);

// Per-worker storage of a cell field: owned entries followed by ghosts.
class PartitionedField {
 public:
  explicit PartitionedField(const Partition& partition);

  std::span<double> local(int w) { return local_[w]; }
  std::span<const double> local(int w) const { return local_[w]; }

  void scatter_owned(std::span<const double> global);
  void gather_owned(std::span<double> global) const;

 private:
  const Partition* partition_;
  std::vector<std::vector<double>> local_;
};

// Copies every owner's current values into the ghost entries of the other
// workers. Owned entries are untouched.
void halo_exchange(const Partition& partition, PartitionedField& field);

// Number of halo_exchange calls made by this process.
std::uint64_t halo_exchange_count() noexcept;

}  // namespace fimsim
