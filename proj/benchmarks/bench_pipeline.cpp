#include <benchmark/benchmark.h>

#include <vector>

#include "hfirst/aer_io.hpp"
#include "hfirst/commands.hpp"
#include "hfirst/config.hpp"
#include "hfirst/network.hpp"

namespace {

using namespace hfirst;

RunConfig bench_config() {
    RunConfig cfg;
    apply_kv(cfg, "data.labels", "0,1");
    return cfg;
}

const BenchWorkload& workload() {
    static const BenchWorkload w = build_bench_workload(bench_config());
    return w;
}

void BM_EncodeBinary(benchmark::State& state) {
    const std::vector<Event>& events = workload().stream;
    for (auto _ : state) {
        benchmark::DoNotOptimize(encode_events(events, EventFormat::binary_v1));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(events.size()));
}

void BM_DecodeBinary(benchmark::State& state) {
    const RunConfig cfg = bench_config();
    const std::string bytes = encode_events(workload().stream, EventFormat::binary_v1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(decode_events(bytes, EventFormat::binary_v1, cfg.net.geometry));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(workload().stream.size()));
}

/// Orientation + pooling layers only (no class templates attached).
void BM_OrientationLayers(benchmark::State& state) {
    const RunConfig cfg = bench_config();
    Network net(cfg.net, {});
    for (auto _ : state) {
        net.clear();
        for (const Event& e : workload().stream) net.process(e, nullptr);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(workload().stream.size()));
}

void BM_FullCascade(benchmark::State& state) {
    const RunConfig cfg = bench_config();
    Network net(cfg.net, workload().model.kernels);
    for (auto _ : state) {
        net.clear();
        for (const Event& e : workload().stream) net.process(e, nullptr);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(workload().stream.size()));
}

void BM_PooledInputCascade(benchmark::State& state) {
    RunConfig cfg = bench_config();
    apply_kv(cfg, "bypass_s1", "1");
    const BenchWorkload w = build_bench_workload(cfg);
    Network net(cfg.net, w.model.kernels);
    for (auto _ : state) {
        net.clear();
        for (const Event& e : w.stream) net.process(e, nullptr);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.stream.size()));
}

BENCHMARK(BM_EncodeBinary);
BENCHMARK(BM_DecodeBinary);
BENCHMARK(BM_OrientationLayers);
BENCHMARK(BM_FullCascade);
BENCHMARK(BM_PooledInputCascade);

} // namespace

BENCHMARK_MAIN();
