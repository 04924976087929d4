#include <benchmark/benchmark.h>

#include <numbers>

#include "holopulse/dynamics.hpp"
#include "holopulse/gate.hpp"
#include "holopulse/units.hpp"

namespace hp = holopulse;

namespace {

constexpr double kPi = std::numbers::pi;

const hp::PulseSchedule& reference_schedule() {
    static const hp::PulseSchedule s = hp::scale_to_rabi_cap(
        hp::compile_noncyclic_gate({kPi / 2.0, kPi / 2.0}, 0.46, 40.0),
        hp::kDefaultRabiCap);
    return s;
}

hp::NoiseModel reference_noise() {
    hp::NoiseModel n;
    n.gamma1 = hp::kDefaultDecayRate;
    n.gamma2 = hp::kDefaultDephasingRate;
    return n;
}

void BM_CompileNoncyclic(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            hp::compile_noncyclic_gate({kPi / 2.0, kPi / 2.0}, 0.46, 29.5));
    }
}
BENCHMARK(BM_CompileNoncyclic);

void BM_PulseArea(benchmark::State& state) {
    const hp::PulseSchedule& s = reference_schedule();
    for (auto _ : state) benchmark::DoNotOptimize(hp::pulse_area(s));
}
BENCHMARK(BM_PulseArea);

void BM_PropagateUnitary(benchmark::State& state) {
    const hp::PulseSchedule& s = reference_schedule();
    for (auto _ : state) benchmark::DoNotOptimize(hp::propagate_unitary(s));
}
BENCHMARK(BM_PropagateUnitary);

void BM_LindbladEvolve(benchmark::State& state) {
    const hp::PulseSchedule& s = reference_schedule();
    const hp::NoiseModel noise = reference_noise();
    Eigen::Matrix3cd rho0 = Eigen::Matrix3cd::Zero();
    rho0(0, 0) = 1.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(hp::lindblad_evolve(s, rho0, noise));
}
BENCHMARK(BM_LindbladEvolve);

void BM_Superoperator(benchmark::State& state) {
    const hp::PulseSchedule& s = reference_schedule();
    const hp::NoiseModel noise = reference_noise();
    for (auto _ : state)
        benchmark::DoNotOptimize(hp::lindblad_superoperator(s, noise));
}
BENCHMARK(BM_Superoperator);

void BM_AvgGateFidelity(benchmark::State& state) {
    const hp::PulseSchedule& s = reference_schedule();
    const hp::NoiseModel noise = reference_noise();
    for (auto _ : state)
        benchmark::DoNotOptimize(
            hp::avg_gate_fidelity({kPi / 2.0, kPi / 2.0}, s, noise));
}
BENCHMARK(BM_AvgGateFidelity);

void BM_MinimizeArea(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(hp::minimize_area(kPi / 4.0, 40.0));
}
BENCHMARK(BM_MinimizeArea);

}  // namespace

BENCHMARK_MAIN();
