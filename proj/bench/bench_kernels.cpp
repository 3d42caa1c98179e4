// Serial vs OpenMP kernels. Run with --benchmark_filter=... as usual.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "featgrid/interaction.hpp"
#include "featgrid/layout.hpp"

namespace {

using featgrid::Execution;

featgrid::ValueMatrix random_values(std::size_t cols, std::size_t rows) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal;
    featgrid::ValueMatrix m;
    for (std::size_t c = 0; c < cols; ++c) m.columns.push_back("f" + std::to_string(c));
    m.rows = rows;
    m.values.resize(cols * rows);
    for (auto& v : m.values) v = normal(rng);
    return m;
}

featgrid::FeatureTable random_table(std::size_t n) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<featgrid::FeatureRecord> recs;
    for (std::size_t i = 0; i < n; ++i) recs.push_back({"f" + std::to_string(i), "t", u(rng), {}});
    return featgrid::build_table(std::move(recs));
}

featgrid::InteractionMatrix random_g(std::size_t n) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) e[i * n + j] = e[j * n + i] = u(rng);
    }
    return featgrid::InteractionMatrix::from_dense(n, std::move(e));
}

Execution exec_of(const benchmark::State& state) {
    return state.range(1) ? Execution::parallel : Execution::serial;
}

void BM_Pearson(benchmark::State& state) {
    const auto values = random_values(static_cast<std::size_t>(state.range(0)), 500);
    for (auto _ : state) {
        benchmark::DoNotOptimize(featgrid::pearson_interaction(values, featgrid::SignPolicy::absolute, exec_of(state)));
    }
}
BENCHMARK(BM_Pearson)->ArgsProduct({{200, 800}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_Greedy(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto table = random_table(n);
    const auto g = random_g(n);
    featgrid::LayoutConfig config;
    config.exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(featgrid::greedy_place(table, g, config));
}
BENCHMARK(BM_Greedy)->ArgsProduct({{500, 2000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_FullLoss(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto table = random_table(n);
    const auto g = random_g(n);
    featgrid::LayoutConfig config;
    const auto layout = featgrid::greedy_place(table, g, config);
    for (auto _ : state) {
        benchmark::DoNotOptimize(featgrid::full_loss(table, g, layout, config.weights, exec_of(state)));
    }
}
BENCHMARK(BM_FullLoss)->ArgsProduct({{2000}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
