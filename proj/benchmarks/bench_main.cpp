#include <benchmark/benchmark.h>

#include "modleach/election.hpp"
#include "modleach/engine.hpp"
#include "modleach/radio.hpp"

using namespace modleach;

static void BM_TxCost(benchmark::State& state) {
  const RadioModel radio;
  double d = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tx_cost(radio, 4000, d, PowerLevel::High));
    d = d > 150.0 ? 0.0 : d + 0.37;
  }
}
BENCHMARK(BM_TxCost);

static void BM_FormClusters(benchmark::State& state) {
  FieldConfig field;
  field.node_count = static_cast<int>(state.range(0));
  const auto nodes = deploy_nodes(field);
  std::vector<NodeId> heads;
  for (NodeId i = 0; i < nodes.size(); i += 10) heads.push_back(i);
  const RadioModel radio;
  const ProtocolConfig proto;
  for (auto _ : state) {
    benchmark::DoNotOptimize(form_clusters(heads, {}, nullptr, nodes, field, radio, proto));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FormClusters)->Arg(100)->Arg(1000);

static void BM_StepRound(benchmark::State& state) {
  SimConfig cfg;
  cfg.protocol.variant = static_cast<Variant>(state.range(0));
  cfg.field.node_count = static_cast<int>(state.range(1));
  cfg.field.initial_energy_j = 1e6;  // stays alive for the whole benchmark
  Simulation sim(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(sim.step_round());
}
BENCHMARK(BM_StepRound)->ArgsProduct({{0, 1, 2, 3}, {100, 1000}});

static void BM_FullRun(benchmark::State& state) {
  SimConfig cfg;
  cfg.protocol.variant = static_cast<Variant>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    cfg.field.seed = seed++;
    benchmark::DoNotOptimize(run(cfg));
  }
}
BENCHMARK(BM_FullRun)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
