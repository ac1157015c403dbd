// Microbenchmarks of the hot paths. Run: build/benchmarks/rispr_bench

#include <benchmark/benchmark.h>

#include "rispr/benchmarks.hpp"
#include "rispr/experiment.hpp"
#include "rispr/localizer.hpp"
#include "rispr/pr_beamformer.hpp"
#include "rispr/ris_optimizer.hpp"

using namespace rispr;

namespace {

struct Fixture {
    ArraySpec ris;
    ArraySpec pr{8, 0.5};
    SceneConfig scene;
    PhaseShiftMatrix phases;
    Waveform wave;
    BeamformedData z;

    Fixture(int m, int epochs, int samples)
        : ris{m, 0.5}
    {
        ExperimentConfig c = spectrum_preset();
        Rng rng(1);
        scene = c.scene.realize(rng);
        phases = solve_phase_shifts(suppression_target(ris, scene.aoa_ap_ris, scene.aod_ris_pr), epochs, rng);
        wave = generate_waveform(static_cast<std::size_t>(samples), rng, WaveformKind::Gaussian,
                                 required_history(scene));
        const SnapshotTensor t = simulate_epochs(scene, wave, phases, pr, ris, {0.0, -10.0, 2}, rng);
        z = beamform(t, matched_weight(pr, scene.aoa_ris_pr));
    }
};

void BM_SolvePhaseShifts(benchmark::State& state)
{
    const ArraySpec ris{static_cast<int>(state.range(0)), 0.5};
    const CVector a = suppression_target(ris, -10.0, 40.0);
    Rng rng(1);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_phase_shifts(a, 100, rng));
}
BENCHMARK(BM_SolvePhaseShifts)->Arg(16)->Arg(64)->Arg(256);

void BM_SimulateEpochs(benchmark::State& state)
{
    Fixture f(static_cast<int>(state.range(0)), 100, 100);
    Rng rng(3);
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_epochs(f.scene, f.wave, f.phases, f.pr, f.ris, {0.0, -10.0, 4}, rng));
}
BENCHMARK(BM_SimulateEpochs)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_NlmsSpectrum(benchmark::State& state)
{
    Fixture f(64, static_cast<int>(state.range(0)), 100);
    const LocalizerConfig cfg;
    for (auto _ : state)
        benchmark::DoNotOptimize(spectrum(f.z, cfg, f.phases, f.ris, f.scene.aod_ris_pr));
}
BENCHMARK(BM_NlmsSpectrum)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Music(benchmark::State& state)
{
    Fixture f(64, static_cast<int>(state.range(0)), 100);
    const AngleList grid = default_grid();
    for (auto _ : state)
        benchmark::DoNotOptimize(music_estimate(f.z, 4, grid, f.phases, f.ris, f.scene.aod_ris_pr));
}
BENCHMARK(BM_Music)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_SweepTrial(benchmark::State& state)
{
    ExperimentConfig c = mse_sweep_preset();
    std::size_t p = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(run_sweep_trial(c, p++));
}
BENCHMARK(BM_SweepTrial)->Unit(benchmark::kSecond)->Iterations(1);

}  // namespace
BENCHMARK_MAIN();
