#include <benchmark/benchmark.h>

#include "covanet/agent.hpp"
#include "covanet/experiment.hpp"
#include "covanet/scenario.hpp"
#include "covanet/world.hpp"

namespace {

using namespace covanet;

TrainingConfig tinyConfig(int h1, int h2) {
  TrainingConfig cfg;
  cfg.hidden1 = h1;
  cfg.hidden2 = h2;
  return cfg;
}

void BM_ActorForward(benchmark::State& state) {
  const int h = static_cast<int>(state.range(0));
  Mlp<float> actor = makeActor<float>(SensorFrame::kFlatDim, h, h);
  Rng rng(1);
  initUniform(actor, rng);
  std::vector<float> input(SensorFrame::kFlatDim);
  for (auto& v : input) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward(actor, input, 1));
  }
}
BENCHMARK(BM_ActorForward)->Arg(64)->Arg(300);

void BM_CriticBatchForward(benchmark::State& state) {
  const int h = static_cast<int>(state.range(0));
  Mlp<float> critic = makeCritic<float>(SensorFrame::kFlatDim, 3, h, h);
  Rng rng(2);
  initUniform(critic, rng);
  const int n = 32;
  std::vector<float> input(static_cast<std::size_t>(n) *
                           (SensorFrame::kFlatDim + 3));
  for (auto& v : input) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward(critic, input, n));
  }
}
BENCHMARK(BM_CriticBatchForward)->Arg(64)->Arg(300);

World makeWorld(int numAdv, int numNdv) {
  ScenarioConfig cfg;
  World world(cfg.track.build(), cfg.dynamics, cfg.termination, cfg.grid);
  for (int i = 0; i < numAdv; ++i) world.addVehicle(VehicleKind::Adv);
  for (int i = 0; i < numNdv; ++i) world.addVehicle(VehicleKind::Ndv);
  world.resetEpisode(7);
  return world;
}

void BM_Sense(benchmark::State& state) {
  World world = makeWorld(2, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(world.sense(0));
  }
}
BENCHMARK(BM_Sense)->Arg(3)->Arg(11);

void BM_WorldStep(benchmark::State& state) {
  World world = makeWorld(2, 3);
  std::map<VehicleId, Action> actions;
  for (VehicleId id : world.aliveIds()) actions[id] = Action{0.4, 0.0, 0.05};
  for (auto _ : state) {
    world.step(actions);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_WorldStep);

void BM_AgentTrainStep(benchmark::State& state) {
  const int h = static_cast<int>(state.range(0));
  Agent agent(0, SensorFrame::kFlatDim, tinyConfig(h, h), 11);
  Rng rng(3);
  auto randomState = [&] {
    std::vector<float> s(SensorFrame::kFlatDim);
    for (auto& v : s) v = static_cast<float>(rng.uniform(-1.0, 1.0));
    return s;
  };
  // warm the buffer past one minibatch
  for (int i = 0; i < 64; ++i) {
    Transition<float> tr;
    tr.state = randomState();
    tr.action = {0.5f, 0.1f, 0.0f};
    tr.reward = static_cast<float>(rng.uniform(-1.0, 1.0));
    tr.nextState = randomState();
    agent.observe(std::move(tr));
  }
  Transition<float> tr;
  tr.state = randomState();
  tr.action = {0.5f, 0.1f, 0.0f};
  tr.reward = 0.1f;
  tr.nextState = randomState();
  for (auto _ : state) {
    agent.observe(tr);
  }
}
BENCHMARK(BM_AgentTrainStep)->Arg(32)->Arg(64)->Arg(300);

}  // namespace

BENCHMARK_MAIN();
