#include <benchmark/benchmark.h>

#include <random>
#include <span>

#include "equitile/kernels.hpp"
#include "equitile/partition.hpp"
#include "equitile/triangularize.hpp"

using namespace equitile;

namespace {

Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> d;
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = Complex(d(rng), d(rng));
  return m;
}

// Contiguous cells of size 8 with random complex weights.
WeightedIndicator instance(std::mt19937_64& rng, Index n) {
  std::vector<std::vector<Index>> cells;
  for (Index start = 0; start < n; start += 8) {
    std::vector<Index> cell;
    for (Index v = start; v < std::min(n, start + 8); ++v) cell.push_back(v);
    cells.push_back(std::move(cell));
  }
  std::uniform_real_distribution<double> u(0.5, 2.0);
  Vector w(n);
  for (Index v = 0; v < n; ++v) w(v) = std::polar(u(rng), 6.283185307179586 * u(rng));
  return WeightedIndicator(Partition(n, std::move(cells)), std::move(w));
}

struct Fixture {
  explicit Fixture(Index n) : rng(n), wi(instance(rng, n)), h(build_block_reflector(wi)) {
    m = random_matrix(rng, n, n);
  }
  kernels::BlockLayout layout() const {
    return {std::span<const ElementaryUnitary>(h.blocks()),
            std::span<const Index>(h.offsets().data(), h.blocks().size())};
  }
  std::mt19937_64 rng;
  WeightedIndicator wi;
  BlockReflector h;
  Matrix m;
};

void BM_TwoSidedSerial(benchmark::State& state) {
  Fixture f(state.range(0));
  for (auto _ : state) {
    Matrix work = f.m;
    kernels::apply_block_two_sided_serial(work, f.layout());
    benchmark::DoNotOptimize(work.data());
  }
  state.SetComplexityN(state.range(0));
}

void BM_TwoSidedParallel(benchmark::State& state) {
  Fixture f(state.range(0));
  for (auto _ : state) {
    Matrix work = f.m;
    kernels::apply_block_two_sided_parallel(work, f.layout());
    benchmark::DoNotOptimize(work.data());
  }
  state.SetComplexityN(state.range(0));
}

// Reference cost: forming H' M H with dense products.
void BM_TwoSidedDense(benchmark::State& state) {
  Fixture f(state.range(0));
  const Matrix d = f.h.dense();
  for (auto _ : state) {
    Matrix work = d.adjoint() * f.m * d;
    benchmark::DoNotOptimize(work.data());
  }
  state.SetComplexityN(state.range(0));
}

void BM_AggregateSerial(benchmark::State& state) {
  Fixture f(state.range(0));
  const auto& labels = f.wi.partition().cell_of();
  for (auto _ : state) {
    Matrix r = kernels::aggregate_by_cell_serial(f.m, std::span<const Index>(labels),
                                                 f.wi.num_cells(), f.wi.weights());
    benchmark::DoNotOptimize(r.data());
  }
  state.SetComplexityN(state.range(0));
}

void BM_AggregateParallel(benchmark::State& state) {
  Fixture f(state.range(0));
  const auto& labels = f.wi.partition().cell_of();
  for (auto _ : state) {
    Matrix r = kernels::aggregate_by_cell_parallel(f.m, std::span<const Index>(labels),
                                                   f.wi.num_cells(), f.wi.weights());
    benchmark::DoNotOptimize(r.data());
  }
  state.SetComplexityN(state.range(0));
}

void BM_BlockTriangularize(benchmark::State& state) {
  Fixture f(state.range(0));
  for (auto _ : state) {
    auto r = block_triangularize(f.m, f.wi);
    benchmark::DoNotOptimize(r.F.data());
  }
  state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(BM_TwoSidedSerial)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNSquared);
BENCHMARK(BM_TwoSidedParallel)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNSquared);
BENCHMARK(BM_TwoSidedDense)->RangeMultiplier(2)->Range(64, 512)->Complexity(benchmark::oNCubed);
BENCHMARK(BM_AggregateSerial)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNSquared);
BENCHMARK(BM_AggregateParallel)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNSquared);
BENCHMARK(BM_BlockTriangularize)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNSquared);

BENCHMARK_MAIN();
