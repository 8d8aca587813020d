#include <benchmark/benchmark.h>

#include "modlab/ab_scattering.hpp"
#include "modlab/evolve.hpp"
#include "modlab/lab/sampling.hpp"
#include "modlab/observables.hpp"
#include "modlab/operator_matrix.hpp"
#include "modlab/states.hpp"

using namespace modlab;

static void BM_ToMomentum(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto g = make_grid(n, -0.5 * static_cast<double>(n) / 8.0, static_cast<double>(n) / 8.0);
    const auto psi = make_packet(g, PacketSpec{PacketKind::gaussian, 0.0, 2.0, 0.5});
    for (auto _ : state) benchmark::DoNotOptimize(to_momentum(psi));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ToMomentum)->RangeMultiplier(4)->Range(256, 65536)->Complexity(benchmark::oNLogN);

static void BM_Propagate(benchmark::State& state) {
    const auto g = make_grid(4096, -128.0, 256.0);
    const auto psi = make_packet(g, PacketSpec{PacketKind::gaussian, 0.0, 2.0, 0.5});
    PropagatorConfig cfg;
    cfg.dt = 0.01;
    cfg.steps = 100;
    cfg.snapshot_every = 100;
    const auto v = PotentialSpec::harmonic(0.01);
    for (auto _ : state) benchmark::DoNotOptimize(propagate(psi, v, cfg));
    state.SetItemsProcessed(state.iterations() * cfg.steps);
}
BENCHMARK(BM_Propagate)->Unit(benchmark::kMillisecond);

static void BM_PropagateTwo(benchmark::State& state) {
    const auto g = make_grid(256, -32.0, 64.0);
    const auto start = TwoParticleState::product(make_packet(g, PacketSpec{PacketKind::gaussian, -8.0, 2.0, 2.0}),
                                                 make_packet(g, PacketSpec{PacketKind::gaussian, 8.0, 2.0, -2.0}));
    PropagatorConfig cfg;
    cfg.dt = 0.01;
    cfg.steps = 10;
    cfg.snapshot_every = 10;
    const auto v = PotentialSpec::gaussian_well(5.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(propagate_two(start, v, cfg));
    state.SetItemsProcessed(state.iterations() * cfg.steps);
}
BENCHMARK(BM_PropagateTwo)->Unit(benchmark::kMillisecond);

static void BM_WeylMoment(benchmark::State& state) {
    const auto g = make_grid(8192, -24.0, 48.0);
    const auto psi = make_two_slit(g, 8.0, PacketSpec{PacketKind::bump, -4.0, 2.0, 0.0}, 0.7);
    for (auto _ : state) benchmark::DoNotOptimize(weyl_moment(psi, {3, 3}));
}
BENCHMARK(BM_WeylMoment)->Unit(benchmark::kMicrosecond);

static void BM_BesselJ(benchmark::State& state) {
    const double z = static_cast<double>(state.range(0));
    double nu = 0.25;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bessel_j(nu, z));
        nu = nu < 150.0 ? nu + 1.0 : 0.25;
    }
}
BENCHMARK(BM_BesselJ)->Arg(5)->Arg(50)->Arg(400);

static void BM_ScatteringProfile(benchmark::State& state) {
    ScatterConfig cfg;
    cfg.r = 10.0;
    for (int i = 0; i < 181; ++i) cfg.thetas.push_back(-kPi + 2.0 * kPi * i / 180.0);
    for (auto _ : state) benchmark::DoNotOptimize(scattering_profile(FluxParam{0.5}, cfg));
}
BENCHMARK(BM_ScatteringProfile)->Unit(benchmark::kMillisecond);

static void BM_SampleDetections(benchmark::State& state) {
    const auto g = make_grid(4096, -64.0, 128.0);
    const auto amps = to_momentum(make_two_slit(g, 8.0, PacketSpec{PacketKind::bump, -4.0, 1.0, 0.0}, 0.0));
    const auto threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(lab::sample_detections(amps, 100000, 1, threads));
    state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_SampleDetections)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_VerifyTranslationIdentity(benchmark::State& state) {
    const auto g = make_grid(static_cast<std::size_t>(state.range(0)), -32.0, 64.0);
    const auto v = PotentialSpec::barrier(1.0, 0.0, 8.0);
    for (auto _ : state) benchmark::DoNotOptimize(verify_translation_identity(g, v, 8.0 * g.dx()));
}
BENCHMARK(BM_VerifyTranslationIdentity)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
