#include <numbers>

#include <benchmark/benchmark.h>

#include "gravbell/bell.hpp"
#include "gravbell/bmv.hpp"
#include "gravbell/lhv.hpp"
#include "gravbell/quantum.hpp"
#include "gravbell/transfer.hpp"

namespace {

using namespace gravbell;

const bell::SettingsQuad kQuad{{0.0},
                               {std::numbers::pi / 2.0},
                               {std::numbers::pi / 4.0},
                               {3.0 * std::numbers::pi / 4.0}};

void BM_EvolveAndTransfer(benchmark::State& state) {
  const bmv::BmvConfig tuned = bmv::tune_for_singlet(bmv::BmvConfig{});
  const transfer::TransferConfig cfg{transfer::Mode::depolarizing, 0.05, 0.05};
  for (auto _ : state) {
    const auto out = transfer::to_photons(bmv::evolve(tuned).state, cfg);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_EvolveAndTransfer);

void BM_RunTrials(benchmark::State& state) {
  const DensityMatrix rho = DensityMatrix::pure(singlet());
  const bell::QuantumModel model(rho, kQuad);
  const auto n = state.range(0);
  for (auto _ : state) {
    const auto records = bell::run_trials(model, n, 17, 1.0);
    benchmark::DoNotOptimize(records);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_RunTrials)->Arg(10'000)->Arg(100'000);

void BM_OptimizeSettings(benchmark::State& state) {
  const DensityMatrix rho = DensityMatrix::pure(singlet());
  for (auto _ : state) {
    const auto result = bell::optimize_settings(rho);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_OptimizeSettings);

void BM_BestLhvFit(benchmark::State& state) {
  const lhv::CorrelationTable target =
      lhv::table_of(DensityMatrix::pure(singlet()), kQuad);
  for (auto _ : state) {
    const auto fit = lhv::best_fit(target);
    benchmark::DoNotOptimize(fit);
  }
}
BENCHMARK(BM_BestLhvFit);

void BM_Negativity(benchmark::State& state) {
  const DensityMatrix rho = DensityMatrix::pure(singlet());
  for (auto _ : state) benchmark::DoNotOptimize(negativity(rho));
}
BENCHMARK(BM_Negativity);

}  // namespace

BENCHMARK_MAIN();
