#include "zenoqst/cli/sweep.hpp"
#include "zenoqst/dynamics.hpp"
#include "zenoqst/hamiltonian.hpp"
#include "zenoqst/protocol.hpp"
#include "zenoqst/zeno.hpp"

#include <benchmark/benchmark.h>

using namespace zenoqst;

namespace {

CouplingConfig pair_config(int nodes, double omega) {
    CouplingConfig c = CouplingConfig::uniform(nodes);
    c.rabi[0] = omega;
    c.rabi[1] = -omega;
    c.active_nodes = {0, 1};
    return c;
}

void BM_BuildBasis(benchmark::State& state) {
    const auto spec = SystemSpec::network(static_cast<int>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(build_basis(spec));
    state.SetLabel(std::to_string(build_basis(spec)->dim()) + " states");
}
BENCHMARK(BM_BuildBasis)->Arg(2)->Arg(3)->Arg(4)->Arg(5);

void BM_TotalHamiltonian(benchmark::State& state) {
    const int nodes = static_cast<int>(state.range(0));
    const auto b = filter_excitation(build_basis(SystemSpec::network(nodes, 1)), 2);
    const auto cfg = pair_config(nodes, 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(total_hamiltonian(b, cfg));
}
BENCHMARK(BM_TotalHamiltonian)->Arg(2)->Arg(3)->Arg(5);

// Unitary propagation over one transfer, spectral vs. adaptive ODE.
void BM_Unitary(benchmark::State& state) {
    const auto b = filter_excitation(build_basis(SystemSpec::network(2, 1)), 1);
    const Operator h = total_hamiltonian(b, pair_config(2, 0.1));
    const StateVector psi = StateVector::basis_state(b, BasisState::parse("01:0.0.0"));
    IntegratorSettings s;
    s.unitary = state.range(0) ? UnitaryMethod::ode : UnitaryMethod::spectral;
    const double T = transfer_time(0.1, 1.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(evolve_unitary(h, psi, T, s));
    state.SetLabel(state.range(0) ? "ode" : "spectral");
}
BENCHMARK(BM_Unitary)->Arg(0)->Arg(1);

// One decohering QST in the eight-state space: the unit of work of a sweep point.
void BM_LindbladQst(benchmark::State& state) {
    QstParameters p;
    p.noise = {0.05, 0.05, 0.05};
    for (auto _ : state) benchmark::DoNotOptimize(run_qst(p).fidelity());
}
BENCHMARK(BM_LindbladQst)->Unit(benchmark::kMillisecond);

// Sparse generator path: three nodes, excitation <= 2.
void BM_LindbladSparse(benchmark::State& state) {
    const auto b = filter_excitation(build_basis(SystemSpec::network(3, 1)), 2);
    const Operator h = total_hamiltonian(b, pair_config(3, 0.1));
    const auto ops = collapse_operators(b, NoiseConfig{0.05, 0.05, 0.05});
    const DensityMatrix rho0 = DensityMatrix::pure(StateVector::basis_state(b, BasisState::parse("011:0.0.0.0")));
    for (auto _ : state) benchmark::DoNotOptimize(evolve_lindblad(h, ops, rho0, 5.0));
    state.SetLabel(std::to_string(b->dim()) + " states");
}
BENCHMARK(BM_LindbladSparse)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
    cli::SweepGrid g;
    g.axis1 = {cli::SweepParameter::kappa_over_g, 0.0, 0.1, 4};
    g.axis2 = {cli::SweepParameter::gamma_over_g, 0.0, 0.1, 4};
    cli::SweepOptions o;
    o.workers = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(cli::run_sweep(g, QstParameters{}, o));
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
