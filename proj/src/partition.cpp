#include <algorithm>
#include <atomic>
#include <string>

#include "fimsim/error.hpp"
#include "fimsim/grid.hpp"

namespace fimsim {

namespace {
std::atomic<std::uint64_t> g_exchange_calls{0};
}

Partition partition_grid(const StructuredGrid& grid, int num_workers) {
  if (num_workers < 1) throw GridError("partition_grid: num_workers must be >= 1");

  Axis axis = Axis::X;
  for (Axis a : {Axis::Y, Axis::Z}) {
    if (grid.count(a) > grid.count(axis)) axis = a;
  }
  const int extent = grid.count(axis);
  if (num_workers > extent)
    throw GridError("partition_grid: " + std::to_string(num_workers) + " workers exceed " +
                    std::to_string(extent) + " cells along the partition axis");

  // Slab boundaries: the first (extent % P) slabs are one cell thicker.
  std::vector<int> slab_of(extent);
  const int base = extent / num_workers;
  const int extra = extent % num_workers;
  int pos = 0;
  for (int w = 0; w < num_workers; ++w) {
    const int thickness = base + (w < extra ? 1 : 0);
    for (int t = 0; t < thickness; ++t) slab_of[pos++] = w;
  }

  Partition part;
  part.num_workers = num_workers;
  part.axis = axis;
  const std::size_t n = grid.num_cells();
  part.owner.resize(n);
  part.local_cells.assign(num_workers, {});
  part.halo_cells.assign(num_workers, {});
  for (std::size_t c = 0; c < n; ++c) {
    const int coord = grid.ijk(c)[static_cast<int>(axis)];
    part.owner[c] = slab_of[coord];
    part.local_cells[part.owner[c]].push_back(c);
  }

  for (int w = 0; w < num_workers; ++w) {
    auto& halo = part.halo_cells[w];
    for (std::size_t c : part.local_cells[w]) {
      grid.for_each_neighbor(c, [&](std::size_t nb, Axis) {
        if (part.owner[nb] != w) halo.push_back(nb);
      });
    }
    std::sort(halo.begin(), halo.end());
    halo.erase(std::unique(halo.begin(), halo.end()), halo.end());
  }

  part.global_to_local.assign(num_workers, std::vector<std::int64_t>(n, -1));
  for (int w = 0; w < num_workers; ++w) {
    std::int64_t l = 0;
    for (std::size_t c : part.local_cells[w]) part.global_to_local[w][c] = l++;
    for (std::size_t c : part.halo_cells[w]) part.global_to_local[w][c] = l++;
  }
  return part;
}

PartitionedField::PartitionedField(const Partition& partition) : partition_(&partition) {
  local_.resize(partition.num_workers);
  for (int w = 0; w < partition.num_workers; ++w) local_[w].assign(partition.local_size(w), 0.0);
}

void PartitionedField::scatter_owned(std::span<const double> global) {
  for (int w = 0; w < partition_->num_workers; ++w) {
    const auto& own = partition_->local_cells[w];
    for (std::size_t l = 0; l < own.size(); ++l) local_[w][l] = global[own[l]];
  }
}

void PartitionedField::gather_owned(std::span<double> global) const {
  for (int w = 0; w < partition_->num_workers; ++w) {
    const auto& own = partition_->local_cells[w];
    for (std::size_t l = 0; l < own.size(); ++l) global[own[l]] = local_[w][l];
  }
}

void halo_exchange(const Partition& partition, PartitionedField& field) {
  g_exchange_calls.fetch_add(1, std::memory_order_relaxed);
  const int workers = partition.num_workers;
  // Each worker reads owned entries of others and writes only its own ghosts;
  // the implicit barrier at the end of the loop is the synchronization point.
#pragma omp parallel for schedule(static)
  for (int w = 0; w < workers; ++w) {
    auto dst = field.local(w);
    const auto& own = partition.local_cells[w];
    const auto& halo = partition.halo_cells[w];
    for (std::size_t h = 0; h < halo.size(); ++h) {
      const std::size_t g = halo[h];
      const int o = partition.owner[g];
      const auto src = static_cast<const PartitionedField&>(field).local(o);
      dst[own.size() + h] = src[static_cast<std::size_t>(partition.global_to_local[o][g])];
    }
  }
}

std::uint64_t halo_exchange_count() noexcept { return g_exchange_calls.load(std::memory_order_relaxed); }

}  // namespace fimsim
