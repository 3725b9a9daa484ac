#include "coconsume/backbone.hpp"
#include "coconsume/centrality.hpp"
#include "coconsume/netstats.hpp"
#include "coconsume/openness.hpp"
#include "coconsume/projection.hpp"
#include "coconsume/synthgen.hpp"

#include <benchmark/benchmark.h>

using namespace coconsume;

namespace {

// Roughly the scale of the real data: ~60 countries, daily top lists.
BipartiteGraph planted(std::size_t countriesPerBlock, std::size_t items) {
    PlantedConfig cfg;
    cfg.blocks = {{"B0", countriesPerBlock}, {"B1", countriesPerBlock}, {"B2", countriesPerBlock}};
    cfg.itemsPerCountry = items;
    cfg.intraBlockShare = 0.6;
    cfg.interBlockShare = 0.2;
    cfg.bridges = {{{1, 1, 1}}};
    cfg.popularityExponent = 1.0;
    cfg.seed = 42;
    return buildBipartite(generate(cfg).records);
}

void BM_Project(benchmark::State &state) {
    const auto b = planted(static_cast<std::size_t>(state.range(0)), 200);
    for (auto _ : state)
        benchmark::DoNotOptimize(project(b));
}
BENCHMARK(BM_Project)->Arg(5)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_BackboneAnalytic(benchmark::State &state) {
    const auto g = project(planted(static_cast<std::size_t>(state.range(0)), 200));
    for (auto _ : state)
        benchmark::DoNotOptimize(extractBackbone(g));
}
BENCHMARK(BM_BackboneAnalytic)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_BackboneMonteCarlo(benchmark::State &state) {
    const auto g = project(planted(5, 100));
    BackboneOptions opts;
    opts.test = {BackboneMethod::MonteCarlo, static_cast<std::size_t>(state.range(0)), 1};
    for (auto _ : state)
        benchmark::DoNotOptimize(extractBackbone(g, opts));
}
BENCHMARK(BM_BackboneMonteCarlo)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Centrality(benchmark::State &state) {
    const auto g = project(planted(static_cast<std::size_t>(state.range(0)), 200));
    for (auto _ : state)
        benchmark::DoNotOptimize(computeCentrality(g, Alpha(0.5), {.componentRestrict = true}));
}
BENCHMARK(BM_Centrality)->Arg(5)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_Openness(benchmark::State &state) {
    const auto b = planted(static_cast<std::size_t>(state.range(0)), 200);
    for (auto _ : state)
        benchmark::DoNotOptimize(opennessScores(b));
}
BENCHMARK(BM_Openness)->Arg(5)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_Communities(benchmark::State &state) {
    const auto g = project(planted(static_cast<std::size_t>(state.range(0)), 200));
    for (auto _ : state)
        benchmark::DoNotOptimize(detectCommunities(g, 7));
}
BENCHMARK(BM_Communities)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
