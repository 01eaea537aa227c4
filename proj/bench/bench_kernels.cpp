// OpenMP kernels against their serial reference versions.
#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "fimsim/cases.hpp"
#include "fimsim/discretization.hpp"
#include "fimsim/kernels.hpp"
#include "fimsim/ras.hpp"

using namespace fimsim;

namespace {

CsrMatrix laplacian_3d(std::size_t m) {
  std::vector<Triplet> t;
  auto id = [m](std::size_t i, std::size_t j, std::size_t k) { return i + m * (j + m * k); };
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t r = id(i, j, k);
        t.push_back({r, r, 6.0});
        if (i > 0) t.push_back({r, id(i - 1, j, k), -1.0});
        if (i + 1 < m) t.push_back({r, id(i + 1, j, k), -1.0});
        if (j > 0) t.push_back({r, id(i, j - 1, k), -1.0});
        if (j + 1 < m) t.push_back({r, id(i, j + 1, k), -1.0});
        if (k > 0) t.push_back({r, id(i, j, k - 1), -1.0});
        if (k + 1 < m) t.push_back({r, id(i, j, k + 1), -1.0});
      }
  return CsrMatrix::from_triplets(m * m * m, m * m * m, std::move(t));
}

std::vector<double> random_vector(std::size_t n) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

void set_threads(benchmark::State& state) { omp_set_num_threads(static_cast<int>(state.range(1))); }

void BM_SpmvSerial(benchmark::State& state) {
  const auto a = laplacian_3d(static_cast<std::size_t>(state.range(0)));
  const auto x = random_vector(a.rows());
  std::vector<double> y(a.rows());
  for (auto _ : state) {
    serial::spmv(a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.nnz()));
}

void BM_SpmvOmp(benchmark::State& state) {
  set_threads(state);
  const auto a = laplacian_3d(static_cast<std::size_t>(state.range(0)));
  const auto x = random_vector(a.rows());
  std::vector<double> y(a.rows());
  for (auto _ : state) {
    spmv(a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.nnz()));
}

void BM_DotSerial(benchmark::State& state) {
  const auto x = random_vector(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::dot(x, x));
}

void BM_DotOmp(benchmark::State& state) {
  set_threads(state);
  const auto x = random_vector(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dot(x, x));
}

struct Flood {
  Deck deck;
  ReservoirModel model;
  Partition partition;
  SimulationState state;
  std::vector<WellControl> controls;

  Flood(int n, int workers) : deck(make_waterflood_deck(1, {n, n, 3})), model(build_model(deck)) {
    partition = partition_grid(model.grid, workers);
    state = initialize_equilibrium(*deck.equil, model);
    for (const auto& w : model.wells) controls.push_back(w.schedule.front().control);
    state.pb.assign(model.wells.size(), 3000.0);
  }
};

void BM_AssembleReference(benchmark::State& state) {
  Flood f(static_cast<int>(state.range(0)), 1);
  FimAssembler as(f.model, f.partition, {0, 1, 2, 3, 4});
  const auto x = as.pack(f.state);
  std::vector<double> res;
  CsrMatrix jac = as.pattern();
  for (auto _ : state) {
    as.assemble_reference(x, f.state, 1.0, f.controls, res, &jac);
    benchmark::DoNotOptimize(res.data());
  }
}

void BM_AssembleOmp(benchmark::State& state) {
  const int workers = static_cast<int>(state.range(1));
  set_threads(state);
  Flood f(static_cast<int>(state.range(0)), workers);
  FimAssembler as(f.model, f.partition, {0, 1, 2, 3, 4});
  const auto x = as.pack(f.state);
  std::vector<double> res;
  CsrMatrix jac = as.pattern();
  for (auto _ : state) {
    as.assemble(x, f.state, 1.0, f.controls, res, &jac);
    benchmark::DoNotOptimize(res.data());
  }
}

void BM_RasApply(benchmark::State& state) {
  const int workers = static_cast<int>(state.range(1));
  omp_set_num_threads(workers);
  const auto a = laplacian_3d(static_cast<std::size_t>(state.range(0)));
  std::vector<int> owner(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) owner[i] = static_cast<int>(i * workers / a.rows());
  RasPreconditioner m(a, owner, workers, 1);
  const auto r = random_vector(a.rows());
  std::vector<double> z(a.rows());
  for (auto _ : state) {
    m.apply(r, z);
    benchmark::DoNotOptimize(z.data());
  }
}

}  // namespace

BENCHMARK(BM_SpmvSerial)->Arg(64)->UseRealTime();
BENCHMARK(BM_SpmvOmp)->Args({64, 1})->Args({64, 2})->Args({64, 4})->UseRealTime();
BENCHMARK(BM_DotSerial)->Arg(1 << 20)->UseRealTime();
BENCHMARK(BM_DotOmp)->Args({1 << 20, 1})->Args({1 << 20, 2})->Args({1 << 20, 4})->UseRealTime();
BENCHMARK(BM_AssembleReference)->Arg(60)->UseRealTime();
BENCHMARK(BM_AssembleOmp)->Args({60, 1})->Args({60, 2})->Args({60, 4})->UseRealTime();
BENCHMARK(BM_RasApply)->Args({48, 1})->Args({48, 2})->Args({48, 4})->UseRealTime();

BENCHMARK_MAIN();
