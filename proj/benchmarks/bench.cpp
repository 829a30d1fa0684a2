#include <benchmark/benchmark.h>

#include "lamvib/eigensolvers.hpp"
#include "lamvib/oracles.hpp"
#include "lamvib/study.hpp"

namespace {

using namespace lamvib;

const LaminatedBeam& pvb_beam() {
  static const LaminatedBeam beam = [] {
    CaseSpec spec;
    spec.bc = BoundaryCondition::SimplySupported;
    spec.material = "PVB_M";
    return make_beam(spec, builtin_database());
  }();
  return beam;
}

const AssembledSystem& constrained_200() {
  static const AssembledSystem sys =
      apply_bc(assemble(pvb_beam(), 200), pvb_beam().bc);
  return sys;
}

void BM_ComplexModulus(benchmark::State& state) {
  const MaxwellChain& chain =
      builtin_database().interlayer("SGP_M").chain;
  Complex omega(300.0, 11.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(chain.complex_modulus(omega));
    omega += Complex(1e-9, 0.0);
  }
}
BENCHMARK(BM_ComplexModulus);

void BM_CondensedElement(benchmark::State& state) {
  const CrossSection s{10e-3, 0.76e-3, 10e-3, 0.1};
  const LayerElastic glass{72e9, 72e9 / 2.44, 2500.0};
  const LayerMaterials mats{glass, {3e6, 1e6, 1100.0}, glass};
  for (auto _ : state) {
    benchmark::DoNotOptimize(condensed_element(s, mats, 0.005));
  }
}
BENCHMARK(BM_CondensedElement);

void BM_Assemble200(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble(pvb_beam(), 200));
  }
}
BENCHMARK(BM_Assemble200);

void BM_RealModes200(benchmark::State& state) {
  const AssembledSystem& sys = constrained_200();
  const SolverSettings settings;
  for (auto _ : state) {
    benchmark::DoNotOptimize(real_modes(sys, 3, settings));
  }
}
BENCHMARK(BM_RealModes200);

void BM_NewtonSolve200(benchmark::State& state) {
  const AssembledSystem& sys = constrained_200();
  const SolverSettings settings;
  const MaxwellChain chain =
      pvb_beam().interlayer.chain_at(pvb_beam().temperature);
  const auto starts = real_modes(sys, 1, settings);
  for (auto _ : state) {
    benchmark::DoNotOptimize(newton_solve(sys, chain, starts[0], settings));
  }
}
BENCHMARK(BM_NewtonSolve200);

void BM_MseSolve200(benchmark::State& state) {
  const AssembledSystem& sys = constrained_200();
  const SolverSettings settings;
  const MaxwellChain chain =
      pvb_beam().interlayer.chain_at(pvb_beam().temperature);
  const auto starts = real_modes(sys, 1, settings);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mse_solve(sys, chain, starts[0], settings));
  }
}
BENCHMARK(BM_MseSolve200);

void BM_EffectiveModal(benchmark::State& state) {
  const SolverSettings settings;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        effective_modal(pvb_beam(), Method::Eet, 1, settings));
  }
}
BENCHMARK(BM_EffectiveModal);

void BM_FullCase200(benchmark::State& state) {
  StudySettings settings;
  settings.elements = 200;
  CaseSpec spec;
  spec.id = "bench";
  spec.bc = BoundaryCondition::SimplySupported;
  spec.material = "PVB_M";
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_case(spec, settings));
  }
}
BENCHMARK(BM_FullCase200);

}  // namespace

BENCHMARK_MAIN();
