#include <benchmark/benchmark.h>

#include "fdnoma/channel.hpp"
#include "fdnoma/montecarlo.hpp"
#include "fdnoma/outage.hpp"

using namespace fdnoma;

static void BM_CdfTruncated(benchmark::State& state) {
  const channel::RicianShadowedParams p{1.0, 10.0, 3.0};
  const auto k_tr = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(channel::cdf_truncated(p, 0.1, k_tr));
}
BENCHMARK(BM_CdfTruncated)->Arg(25)->Arg(40);

static void BM_ClosedForm(benchmark::State& state) {
  auto cfg = outage::reference_config();
  cfg.p_t_db = 20.0;
  cfg.k_tr = static_cast<unsigned>(state.range(0));
  const auto scheme = static_cast<Scheme>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(outage::evaluate(cfg, scheme, Node::Gs));
}
BENCHMARK(BM_ClosedForm)->ArgsProduct({{25, 40}, {0, 1, 2}});

static void BM_MonteCarlo(benchmark::State& state) {
  auto cfg = outage::reference_config();
  cfg.p_t_db = 20.0;
  montecarlo::McSettings mc;
  mc.num_samples = 100'000;
  mc.threads = 1;
  mc.antithetic = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(montecarlo::mc_outage(cfg, Scheme::FdNoma, Node::Uav2, mc));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mc.num_samples));
}
BENCHMARK(BM_MonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
