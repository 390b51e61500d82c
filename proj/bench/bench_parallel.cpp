// Serial reference:: kernels against the OpenMP ones. Thread count comes from
// OMP_NUM_THREADS; the reference variants ignore it.

#include <map>

#include <benchmark/benchmark.h>

#include "gpimage/catalog.hpp"
#include "gpimage/ensemble.hpp"
#include "gpimage/linalg.hpp"

using namespace gpimage;

namespace {

GaussianProcessPrior prior() { return {MeanFunction(), matern_kernel(MaternOrder::five_halves, 0.3, 1)}; }

const SampleEnsemble& ensemble(std::size_t points) {
    static std::map<std::size_t, SampleEnsemble> cache;
    auto it = cache.find(points);
    if (it == cache.end()) it = cache.emplace(points, sample_paths(prior(), Grid::uniform(0, 1, points), 20000, 1)).first;
    return it->second;
}

void BM_gram(benchmark::State& s) {
    const Kernel k = prior().kernel;
    const Grid g = Grid::uniform(0, 1, static_cast<std::size_t>(s.range(0)));
    for (auto _ : s) benchmark::DoNotOptimize(s.range(1) ? gram(k, g) : reference::gram(k, g));
}

void BM_sample_paths(benchmark::State& s) {
    const GaussianProcessPrior p = prior();
    const Grid g = Grid::uniform(0, 1, static_cast<std::size_t>(s.range(0)));
    for (auto _ : s)
        benchmark::DoNotOptimize(s.range(1) ? sample_paths(p, g, 20000, 2) : reference::sample_paths(p, g, 20000, 2));
}

void BM_apply_pathwise(benchmark::State& s) {
    const SampleEnsemble& e = ensemble(static_cast<std::size_t>(s.range(0)));
    const LinearOperator d = LinearOperator::derivative(1);
    for (auto _ : s)
        benchmark::DoNotOptimize(s.range(1) ? apply_operator_pathwise(d, e) : reference::apply_operator_pathwise(d, e));
}

void BM_empirical_cov(benchmark::State& s) {
    const SampleEnsemble& e = ensemble(static_cast<std::size_t>(s.range(0)));
    for (auto _ : s) benchmark::DoNotOptimize(s.range(1) ? empirical_cov(e) : reference::empirical_cov(e));
}

// second argument: 0 = reference, 1 = OpenMP
#define GRID_SIZES ArgsProduct({{33, 129, 513}, {0, 1}})->ArgNames({"points", "parallel"})->Unit(benchmark::kMillisecond)

BENCHMARK(BM_gram)->GRID_SIZES;
BENCHMARK(BM_sample_paths)->GRID_SIZES;
BENCHMARK(BM_apply_pathwise)->GRID_SIZES;
BENCHMARK(BM_empirical_cov)->GRID_SIZES;

} // namespace

BENCHMARK_MAIN();
