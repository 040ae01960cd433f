#include <benchmark/benchmark.h>

#include <random>

#include "blogext/svm.hpp"

using namespace blogext;

namespace {

struct Data {
    Matrix x;
    std::vector<int> y;
};

// Two overlapping Gaussian classes, one positive in five.
Data make_data(std::size_t n, std::size_t dims)
{
    std::mt19937_64 rng(n * 31 + dims);
    std::normal_distribution<double> normal(0, 1);
    Data d;
    for (std::size_t i = 0; i < n; ++i) {
        const int label = i % 5 == 0 ? 1 : -1;
        std::vector<double> row(dims);
        for (auto& v : row) v = normal(rng);
        row[0] += 1.2 * label;
        row[1] -= 0.6 * label;
        d.x.append_row(row);
        d.y.push_back(label);
    }
    return d;
}

void BM_SvmTrain(benchmark::State& state)
{
    const auto d = make_data(static_cast<std::size_t>(state.range(0)), 9);
    TrainConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(train(d.x, d.y, cfg, SchemaId::body_v1, Viewport{}));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SvmTrain)->RangeMultiplier(2)->Range(250, 4000)->Unit(benchmark::kMillisecond)->Complexity();

void BM_SvmDecision(benchmark::State& state)
{
    const auto d = make_data(static_cast<std::size_t>(state.range(0)), 8);
    const auto model = train(d.x, d.y, TrainConfig{}, SchemaId::title_v1, Viewport{});
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(decision_value(model, d.x.row(i)));
        i = (i + 1) % d.x.rows();
    }
    state.counters["support_vectors"] = static_cast<double>(model.dual_coefs.size());
}
BENCHMARK(BM_SvmDecision)->Arg(500)->Arg(2000);

void BM_SaveLoadModel(benchmark::State& state)
{
    const auto d = make_data(1000, 9);
    const auto model = train(d.x, d.y, TrainConfig{}, SchemaId::body_v1, Viewport{});
    for (auto _ : state) benchmark::DoNotOptimize(load_model(save_model(model)));
}
BENCHMARK(BM_SaveLoadModel);

}  // namespace
