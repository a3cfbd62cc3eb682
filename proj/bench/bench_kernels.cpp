// Serial reference kernels against their OpenMP versions.
//   build/bench_kernels --benchmark_filter=ring

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "conesynth/example_problem.hpp"
#include "conesynth/kernels.hpp"
#include "conesynth/synthesis.hpp"

using namespace conesynth;
using namespace conesynth::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

// a: (2w+1) x w, b: (2N+1) x N, full product box.
template <void (*Conv)(GridView, GridView, MutGridView)>
void BM_convolve2d(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0)), w = 8;
  const auto a = random_vec(static_cast<std::size_t>(2 * w + 1) * w, 1);
  const auto b = random_vec(static_cast<std::size_t>(2 * N + 1) * N, 2);
  const int oi = 2 * (N + w) + 1, ot = N + w - 1;
  std::vector<double> out(static_cast<std::size_t>(oi) * ot);
  for (auto _ : state) {
    std::fill(out.begin(), out.end(), 0.0);
    Conv({a.data(), -w, 0, 2 * w + 1, w}, {b.data(), -N, 0, 2 * N + 1, N}, {out.data(), -N - w, 0, oi, ot});
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(a.size()) * static_cast<long>(b.size()));
}

// Closed-loop kernel of reach H over a ring of 4H sites and H steps.
template <void (*Ring)(GridView, GridView, MutGridView)>
void BM_ring_convolve(benchmark::State& state) {
  const int H = static_cast<int>(state.range(0)), n = 4 * H;
  const auto k = random_vec(static_cast<std::size_t>(2 * H + 1) * (H + 1), 3);
  std::vector<double> sig(static_cast<std::size_t>(n) * (H + 1), 0.0), out(sig.size());
  sig[0] = 1.0;
  for (auto _ : state) {
    Ring({k.data(), -H, 0, 2 * H + 1, H + 1}, {sig.data(), 0, 0, n, H + 1}, {out.data(), 0, 0, n, H + 1});
    benchmark::DoNotOptimize(out.data());
  }
}

// One state-update step of a 4-state realization on a ring.
template <void (*Mv)(ZMatView, const double*, double*, int)>
void BM_ring_zmatvec(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0)), dim = 4;
  const auto m1 = random_vec(dim * dim, 4), m0 = random_vec(dim * dim, 5), p1 = random_vec(dim * dim, 6);
  const auto x = random_vec(static_cast<std::size_t>(n) * dim, 7);
  std::vector<double> y(x.size(), 0.0);
  for (auto _ : state) {
    Mv({m1.data(), m0.data(), p1.data(), dim, dim}, x.data(), y.data(), n);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_synthesize(benchmark::State& state) {
  const Problem p = example::problem();
  const Exec exec = state.range(0) ? Exec::parallel : Exec::serial;
  for (auto _ : state) benchmark::DoNotOptimize(synthesize(p, 6, 200, 200, exec).J.value);
}

}  // namespace

BENCHMARK_TEMPLATE(BM_convolve2d, serial::convolve2d)->Arg(64)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK_TEMPLATE(BM_convolve2d, omp::convolve2d)->Arg(64)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_TEMPLATE(BM_ring_convolve, serial::ring_convolve)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_TEMPLATE(BM_ring_convolve, omp::ring_convolve)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_TEMPLATE(BM_ring_zmatvec, serial::ring_zmatvec)->Arg(512)->Arg(1 << 16)->Unit(benchmark::kMicrosecond);
BENCHMARK_TEMPLATE(BM_ring_zmatvec, omp::ring_zmatvec)->Arg(512)->Arg(1 << 16)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_synthesize)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
