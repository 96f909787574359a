#include "przk/campaign.hpp"

#include <benchmark/benchmark.h>

using namespace przk;

namespace {

sim::CampaignConfig config(benchmark::State& state) {
    sim::CampaignConfig c;
    c.sessions = static_cast<std::size_t>(state.range(0));
    c.adv_ratio = 0.1;
    c.group = state.range(1) == 0 ? GroupId::Toy : GroupId::P256;
    return c;
}

void BM_CampaignSerial(benchmark::State& state) {
    const auto c = config(state);
    for (auto _ : state) benchmark::DoNotOptimize(sim::run_campaign_serial(c));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_CampaignParallel(benchmark::State& state) {
    const auto c = config(state);
    for (auto _ : state) benchmark::DoNotOptimize(sim::run_campaign_parallel(c));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_AllocateKinds(benchmark::State& state) {
    const auto c = config(state);
    for (auto _ : state) benchmark::DoNotOptimize(sim::allocate_kinds(c));
}

} // namespace

// Args: {sessions, group (0 = toy, 1 = p256)}.
BENCHMARK(BM_CampaignSerial)->Args({1000, 0})->Args({500, 1})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CampaignParallel)->Args({1000, 0})->Args({500, 1})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_AllocateKinds)->Args({5000, 0});

BENCHMARK_MAIN();
