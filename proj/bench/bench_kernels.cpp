// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include <numbers>

#include "secrelay/montecarlo.hpp"
#include "secrelay/quadrature.hpp"

using namespace secrelay;
namespace mc = secrelay::montecarlo;
namespace qd = secrelay::quadrature;

namespace {

ExecutionMode mode_of(const benchmark::State& state) {
    return state.range(0) == 0 ? ExecutionMode::Serial : ExecutionMode::Parallel;
}

SystemParams params() {
    SystemParams p;
    p.alpha = 4.0;
    p.lambda_e = 1e-4;
    p.d_sd = 20.0;
    p.lambda_r = 1e-3;
    return p;
}

void run_mc(benchmark::State& state, mc::Scenario scenario, EavesdropperModel model) {
    mc::TrialConfig cfg;
    cfg.trials = 50'000;
    cfg.seed = 1;
    cfg.model = model;
    cfg.scenario = scenario;
    cfg.execution = mode_of(state);
    const auto p = params();
    for (auto _ : state) benchmark::DoNotOptimize(mc::estimate(p, cfg).successes);
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * cfg.trials));
}

void BM_DirectMC(benchmark::State& state) { run_mc(state, mc::Direct{}, EavesdropperModel::Colluding); }
void BM_FixedRelayMC(benchmark::State& state) {
    run_mc(state, mc::FixedRelay{PolarPoint(5, std::numbers::pi / 3)}, EavesdropperModel::Colluding);
}
void BM_SelectedRelayMC(benchmark::State& state) {
    run_mc(state, mc::SelectedRelay{}, EavesdropperModel::NonColluding);
}

void BM_NonColludingRelayExact(benchmark::State& state) {
    qd::QuadratureConfig cfg;
    cfg.execution = mode_of(state);
    const auto p = params();
    const PolarPoint relay(5, std::numbers::pi / 3);
    for (auto _ : state) benchmark::DoNotOptimize(qd::p_relay_noncolluding_exact(relay, p, cfg).value);
}

void BM_SelectedRelaySeries(benchmark::State& state) {
    qd::QuadratureConfig cfg;
    cfg.execution = mode_of(state);
    const auto p = params();
    for (auto _ : state) benchmark::DoNotOptimize(qd::p_selected_relay_noncolluding_lower(p, cfg).value);
}

}  // namespace

BENCHMARK(BM_DirectMC)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FixedRelayMC)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SelectedRelayMC)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_NonColludingRelayExact)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SelectedRelaySeries)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
