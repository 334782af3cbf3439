#include <benchmark/benchmark.h>

#include "qpsim/engine.hpp"
#include "qpsim/experiments.hpp"
#include "qpsim/markov.hpp"
#include "qpsim/rbm.hpp"

namespace {

void BM_engine_step(benchmark::State& state) {
  auto net = qpsim::star_network(3, 100, 50);
  qpsim::assign_random_oscillators(net, 40.0, 50.0, qpsim::OscMode::periodic, 7);
  qpsim::Engine engine(net, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.step());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_engine_step);

void BM_engine_step_poisson(benchmark::State& state) {
  auto net = qpsim::star_network(3, 100, 50);
  qpsim::assign_random_oscillators(net, 40.0, 50.0, qpsim::OscMode::poisson, 7);
  qpsim::Engine engine(net, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.step());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_engine_step_poisson);

void BM_stationary(benchmark::State& state) {
  const auto fsm = qpsim::counter_fsm(static_cast<int>(state.range(0)));
  const auto chain = qpsim::to_markov_chain(fsm, 0.6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qpsim::stationary(chain));
  }
}
BENCHMARK(BM_stationary)->Arg(3)->Arg(16)->Arg(64);

void BM_gibbs_sweeps(benchmark::State& state) {
  const auto model = qpsim::random_rbm(10, 10, 3, 21);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qpsim::gibbs_sample(model, 100, 21));
  }
  state.SetItemsProcessed(100 * state.iterations());
}
BENCHMARK(BM_gibbs_sweeps);

void BM_exact_distribution(benchmark::State& state) {
  auto model = qpsim::random_rbm(static_cast<int>(state.range(0)),
                                 static_cast<int>(state.range(0)), 3, 21);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qpsim::exact_distribution(model));
  }
}
BENCHMARK(BM_exact_distribution)->Arg(6)->Arg(8)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
