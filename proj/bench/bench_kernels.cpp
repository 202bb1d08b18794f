// Serial reference loops against their OpenMP counterparts.
//   ./bench_kernels --benchmark_filter=rigidity
// Thread count follows OMP_NUM_THREADS.

#include <map>
#include <random>

#include <benchmark/benchmark.h>

#include "bistable/kernels.hpp"
#include "bistable/lattice.hpp"

using namespace bistable;

namespace {

const Lattice& lattice(int n) {
    static std::map<int, Lattice> cache;
    return cache.try_emplace(n, n).first->second;
}

Eigen::VectorXd random_vector(Eigen::Index size) {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> d(0.0, 0.05);
    Eigen::VectorXd v(size);
    for (Eigen::Index k = 0; k < size; ++k) v[k] = d(rng);
    return v;
}

template <auto Fn>
void node_kernel(benchmark::State& state) {
    const Lattice& lat = lattice(int(state.range(0)));
    const Eigen::VectorXd u = random_vector(2 * Eigen::Index(lat.num_nodes()));
    for (auto _ : state) benchmark::DoNotOptimize(Fn(lat, u));
    state.SetItemsProcessed(state.iterations() * int64_t(lat.num_edges()));
}

template <auto Fn>
void edge_kernel(benchmark::State& state) {
    const Lattice& lat = lattice(int(state.range(0)));
    const Eigen::VectorXd k = random_vector(Eigen::Index(lat.num_edges()));
    for (auto _ : state) benchmark::DoNotOptimize(Fn(lat, k));
    state.SetItemsProcessed(state.iterations() * int64_t(lat.num_edges()));
}

template <auto Fn>
void energy_kernel(benchmark::State& state) {
    const Lattice& lat = lattice(int(state.range(0)));
    const Eigen::VectorXd k = random_vector(Eigen::Index(lat.num_edges()));
    for (auto _ : state) benchmark::DoNotOptimize(Fn(k, 1.0, 1.0, 0.1));
    state.SetItemsProcessed(state.iterations() * int64_t(lat.num_edges()));
}

void sides(benchmark::internal::Benchmark* b) {
    for (int n : {16, 64, 256}) b->Arg(n);
}

}  // namespace

BENCHMARK(node_kernel<kernels::serial::rigidity_apply>)->Name("rigidity_apply/serial")->Apply(sides);
BENCHMARK(node_kernel<kernels::omp::rigidity_apply>)->Name("rigidity_apply/omp")->Apply(sides);
BENCHMARK(edge_kernel<kernels::serial::rigidity_transpose_apply>)->Name("rigidity_transpose/serial")->Apply(sides);
BENCHMARK(edge_kernel<kernels::omp::rigidity_transpose_apply>)->Name("rigidity_transpose/omp")->Apply(sides);
BENCHMARK(edge_kernel<kernels::serial::hexagon_apply>)->Name("hexagon_apply/serial")->Apply(sides);
BENCHMARK(edge_kernel<kernels::omp::hexagon_apply>)->Name("hexagon_apply/omp")->Apply(sides);
BENCHMARK(node_kernel<kernels::serial::triangle_strain_sum>)->Name("triangle_strain_sum/serial")->Apply(sides);
BENCHMARK(node_kernel<kernels::omp::triangle_strain_sum>)->Name("triangle_strain_sum/omp")->Apply(sides);
BENCHMARK(edge_kernel<kernels::serial::triangle_k_sum>)->Name("triangle_k_sum/serial")->Apply(sides);
BENCHMARK(edge_kernel<kernels::omp::triangle_k_sum>)->Name("triangle_k_sum/omp")->Apply(sides);
BENCHMARK(energy_kernel<kernels::serial::link_energy_sum>)->Name("link_energy_sum/serial")->Apply(sides);
BENCHMARK(energy_kernel<kernels::omp::link_energy_sum>)->Name("link_energy_sum/omp")->Apply(sides);

BENCHMARK_MAIN();
