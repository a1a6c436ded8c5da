#include "covanet/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "covanet/dist.hpp"
#include "covanet/serial.hpp"

namespace covanet {

namespace {

constexpr std::size_t kLatencyWarmup = 100;

const char* relationName(Relation r) {
  switch (r) {
    case Relation::Peer: return "PEER";
    case Relation::LeaderOf: return "LEADER_OF";
    case Relation::FollowerOf: return "FOLLOWER_OF";
  }
  return "?";
}

double medianOf(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

Action ndvPolicy(const SensorFrame& frame, double targetKmh,
                 const NdvConfig& cfg) {
  Action a;
  if (std::abs(frame.trackPos) > 1.0) return a;  // sensors degraded; coast
  a.steering = clamp(-cfg.steerTrackPosGain * frame.trackPos -
                         cfg.steerAngleGain * frame.angle,
                     -1.0, 1.0);
  const double err = targetKmh - frame.v;
  if (err >= 0.0) {
    a.accel = clamp(cfg.speedGain * err, 0.0, 1.0);
  } else {
    a.brake = clamp(-cfg.speedGain * err, 0.0, 1.0);
  }
  return a;
}

TimedAction timedAct(Agent& agent, const SensorFrame& frame, bool withNoise) {
  TimedAction out;
  const auto t0 = std::chrono::steady_clock::now();
  out.state = flattenFrame<float>(frame);
  out.action = agent.act(out.state, withNoise);
  const auto t1 = std::chrono::steady_clock::now();
  out.seconds = std::chrono::duration<double>(t1 - t0).count();
  return out;
}

double measureLatency(Agent& agent, const SensorFrame& frame) {
  return timedAct(agent, frame, false).seconds;
}

double annealedSigma(const TrainingConfig& cfg, int episode, int episodes) {
  const double progress =
      episodes > 1 ? static_cast<double>(episode) /
                         static_cast<double>(episodes - 1)
                   : 0.0;
  return cfg.ouSigma + (cfg.ouSigmaFinal - cfg.ouSigma) * progress;
}

int firstZeroCollisionWindow(const std::vector<WindowAggregate>& windows) {
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (windows[i].collisionsSum == 0) return static_cast<int>(i) + 1;
  }
  return static_cast<int>(windows.size()) + 1;
}

namespace {

struct SeedRunState {
  std::vector<std::string> topologyRows;
};

SeedResult runSeedImpl(const ScenarioConfig& cfg, std::uint64_t seed,
                       const RunOptions& opts, SeedRunState& state) {
  const bool train = opts.mode == RunMode::Train;
  DiagnosticSink diag =
      opts.diagnostics ? opts.diagnostics : stderrDiagnostics();

  World world(cfg.track.build(), cfg.dynamics, cfg.termination, cfg.grid);
  std::vector<VehicleId> advIds, ndvIds;
  for (int i = 0; i < cfg.numAdv; ++i) {
    advIds.push_back(world.addVehicle(VehicleKind::Adv));
  }
  for (int i = 0; i < cfg.numNdv; ++i) {
    ndvIds.push_back(world.addVehicle(VehicleKind::Ndv));
  }

  std::map<VehicleId, Agent> agents;
  for (VehicleId id : advIds) {
    agents.emplace(id, Agent(id, SensorFrame::kFlatDim, cfg.training,
                             Rng(seed).fork(0xA9E0 + static_cast<std::uint64_t>(id))
                                 .seed()));
  }
  if (!train && !opts.actorCheckpoint.empty()) {
    const Mlp<float> actor = loadNetworkFile(opts.actorCheckpoint);
    for (auto& [id, agent] : agents) {
      const Mlp<float> critic = opts.criticCheckpoint.empty()
                                    ? agent.critic()
                                    : loadNetworkFile(opts.criticCheckpoint);
      agent.adopt(actor, critic);
    }
  }

  VanetRegistry registry(cfg.vanet, diag);
  for (VehicleId id : advIds) registry.addParticipant(id, cfg.vanetBudget);
  DistributionEngine engine(cfg.distribution, diag);

  std::map<VehicleId, CoopAgent> coop;
  for (VehicleId id : advIds) coop.emplace(id, CoopAgent(&agents.at(id)));

  const auto oracle = [&world](VehicleId a, VehicleId b) {
    return world.relativeDistance(a, b);
  };
  const auto visible = [&world](VehicleId id) { return world.visibleFrom(id); };

  std::map<VehicleId, std::vector<double>> latencyRaw;

  SeedResult result;
  result.seed = seed;

  for (int ep = 0; ep < cfg.episodes; ++ep) {
    world.resetEpisode(Rng(seed).fork(0x5E5E0000ULL + static_cast<std::uint64_t>(ep)).seed());
    registry.reset();

    const double sigma = annealedSigma(cfg.training, ep, cfg.episodes);
    for (auto& [id, agent] : agents) {
      agent.beginEpisode();
      agent.setExplorationSigma(train ? sigma : 0.0);
    }

    Rng ndvRng = Rng(seed).fork(0x6D700000ULL + static_cast<std::uint64_t>(ep));
    std::map<VehicleId, double> ndvTarget;
    for (VehicleId id : ndvIds) {
      ndvTarget[id] =
          ndvRng.uniform(cfg.ndv.targetSpeedMinKmh, cfg.ndv.targetSpeedMaxKmh);
    }

    EpisodeMetrics em;
    em.episode = ep + 1;
    for (VehicleId id : advIds) {
      em.reward[id] = 0.0;
      em.breakdownSums[id] = RewardBreakdown{};
      em.collisions[id] = 0;
      em.arrived[id] = false;
      em.arrivalStep[id] = -1;
    }

    std::map<VehicleId, SensorFrame> frames;
    for (VehicleId id : world.aliveIds()) frames[id] = world.sense(id);

    std::set<VehicleId> advDone;
    for (int t = 1; t <= cfg.termination.maxSteps; ++t) {
      std::map<VehicleId, Action> actions;
      std::map<VehicleId, std::vector<float>> states;
      for (VehicleId id : advIds) {
        if (!world.isAlive(id)) continue;
        TimedAction ta = timedAct(agents.at(id), frames.at(id), train);
        if (ta.seconds > 0.0) {
          latencyRaw[id].push_back(ta.seconds);
        } else {
          diag("latency sample dropped for agent " + std::to_string(id));
        }
        actions[id] = ta.action;
        states[id] = std::move(ta.state);
      }
      for (VehicleId id : ndvIds) {
        if (!world.isAlive(id)) continue;
        actions[id] = ndvPolicy(frames.at(id), ndvTarget.at(id), cfg.ndv);
      }

      world.step(actions);

      for (const CollisionEvent& e : world.checkCollisionRadius()) {
        VehicleId lowestAdv = -1;
        for (VehicleId id : {e.a, e.b}) {
          if (id == CollisionEvent::kOffTrack) continue;
          if (world.kindOf(id) != VehicleKind::Adv) continue;
          if (lowestAdv < 0 || id < lowestAdv) lowestAdv = id;
        }
        if (lowestAdv >= 0) {
          ++em.collisionsTotal;
          ++em.collisions[lowestAdv];
        }
      }

      std::map<VehicleId, TerminationReason> verdicts;
      for (const VehicleVerdict& v : world.verdicts(t)) {
        verdicts[v.id] = v.reason;
      }

      std::map<VehicleId, SensorFrame> newFrames;
      for (VehicleId id : world.aliveIds()) newFrames[id] = world.sense(id);

      for (auto& [id, state] : states) {
        const TerminationReason reason = verdicts.at(id);
        const bool arrived = reason == TerminationReason::Arrival;
        const SensorFrame& nf = newFrames.at(id);
        const RewardBreakdown rb =
            perStepReward(nf.v, nf.angle, nf.trackPos, nf.minOpponent(),
                          arrived, cfg.reward);
        em.reward[id] += rb.total;
        auto& sums = em.breakdownSums[id];
        sums.collision += rb.collision;
        sums.time += rb.time;
        sums.onRoad += rb.onRoad;
        sums.total += rb.total;
        coop.at(id).window.push(rb.total);

        if (train) {
          const bool terminal = reason == TerminationReason::Arrival ||
                                reason == TerminationReason::Reversal ||
                                reason == TerminationReason::OffTrack;
          Transition<float> tr;
          tr.state = std::move(state);
          tr.action = {static_cast<float>(actions.at(id).accel),
                       static_cast<float>(actions.at(id).brake),
                       static_cast<float>(actions.at(id).steering)};
          tr.reward = static_cast<float>(rb.total * cfg.training.rewardScale);
          tr.nextState = flattenFrame<float>(nf);
          tr.terminal = terminal;

          Agent& agent = agents.at(id);
          const LearnMode mode = learnOrWait(
              registry.followsAnyone(id), registry.budgetOf(id),
              cfg.distribution);
          agent.setLearningEnabled(mode == LearnMode::Learn);
          if (agent.observe(std::move(tr))) registry.consumeBudget(id, 1.0);
        }
      }

      registry.refreshLocalLists(visible);
      for (VehicleId id : advIds) {
        if (!world.isAlive(id)) continue;
        registry.checkVanetRadius(id, newFrames.at(id), oracle);
      }
      registry.maintain(oracle);
      if (cfg.topologyDump) {
        for (const TopologyEdge& e : registry.edges()) {
          std::ostringstream row;
          row << seed << ',' << (ep + 1) << ',' << t << ',' << e.a << ','
              << e.b << ',' << formatDouble(e.distance) << ','
              << relationName(e.relationOfA);
          state.topologyRows.push_back(row.str());
        }
      }

      if (train) engine.exchange(t, ep + 1, registry, coop);

      for (const auto& [id, reason] : verdicts) {
        if (reason == TerminationReason::None) continue;
        if (world.kindOf(id) == VehicleKind::Adv) {
          if (reason == TerminationReason::Arrival) {
            em.arrived[id] = true;
            em.arrivalStep[id] = t;
          }
          advDone.insert(id);
          const auto& m = registry.membership(id);
          if (m.insideVanet || m.openedVanet || !m.neighbors.empty()) {
            registry.leaveVanet(id);
          }
        }
        world.despawn(id);
        newFrames.erase(id);
      }

      frames = std::move(newFrames);
      if (advDone.size() == advIds.size()) break;
    }
    result.episodes.push_back(std::move(em));
  }

  if (cfg.numAdv > 0) {
    result.windows = aggregateWindows(result.episodes, cfg.numAdv);
  }
  for (VehicleId id : advIds) {
    auto& samples = latencyRaw[id];
    if (samples.size() > kLatencyWarmup) {
      samples.erase(samples.begin(),
                    samples.begin() + static_cast<std::ptrdiff_t>(kLatencyWarmup));
    }
    result.latency.push_back(summarizeLatency(id, std::move(samples)));
  }
  result.groundTruthReads = world.groundTruthReads();

  if (train && !opts.outDir.empty()) {
    const std::filesystem::path ckptDir =
        std::filesystem::path(opts.outDir) / "checkpoints";
    std::filesystem::create_directories(ckptDir);
    for (VehicleId id : advIds) {
      const std::string stem =
          "seed" + std::to_string(seed) + "_adv" + std::to_string(id);
      saveNetworkFile((ckptDir / (stem + "_actor.ckpt")).string(),
                      agents.at(id).actor());
      saveNetworkFile((ckptDir / (stem + "_critic.ckpt")).string(),
                      agents.at(id).critic());
    }
  }
  return result;
}

}  // namespace

SeedResult runSeed(const ScenarioConfig& cfg, std::uint64_t seed,
                   const RunOptions& opts) {
  SeedRunState scratch;
  return runSeedImpl(cfg, seed, opts, scratch);
}

ExperimentResult runExperiment(const ScenarioConfig& cfg,
                               const RunOptions& opts) {
  cfg.validate(opts.mode == RunMode::Train);

  ExperimentResult result;
  result.perSeed.resize(cfg.seeds.size());
  std::vector<SeedRunState> states(cfg.seeds.size());

  const int jobs = std::max(1, std::min<int>(opts.jobs,
                                             static_cast<int>(cfg.seeds.size())));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
      result.perSeed[i] = runSeedImpl(cfg, cfg.seeds[i], opts, states[i]);
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= cfg.seeds.size()) return;
        result.perSeed[i] = runSeedImpl(cfg, cfg.seeds[i], opts, states[i]);
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  if (!opts.outDir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(opts.outDir);
    const fs::path dir(opts.outDir);

    std::ofstream perEp(dir / "per_episode.csv", std::ios::trunc);
    writePerEpisodeHeader(perEp);
    std::ofstream perWin(dir / "per_window.csv", std::ios::trunc);
    writePerWindowHeader(perWin);
    std::ofstream breakdown(dir / "breakdown.csv", std::ios::trunc);
    writeBreakdownHeader(breakdown);
    std::ofstream latency(dir / "latency.csv", std::ios::trunc);
    writeLatencyHeader(latency);
    for (const SeedResult& sr : result.perSeed) {
      writePerEpisodeRows(perEp, sr.seed, sr.episodes);
      writePerWindowRows(perWin, sr.seed, sr.windows);
      writeBreakdownRows(breakdown, sr.seed, sr.episodes);
      writeLatencyRows(latency, sr.seed, sr.latency);
    }

    std::ofstream summary(dir / "summary_windows.csv", std::ios::trunc);
    summary << "window_start,window_end,collisions_sum_median,reward_per_adv_median\n";
    if (!result.perSeed.empty()) {
      const std::size_t windowCount = result.perSeed.front().windows.size();
      for (std::size_t w = 0; w < windowCount; ++w) {
        std::vector<double> coll, rew;
        for (const SeedResult& sr : result.perSeed) {
          if (w >= sr.windows.size()) continue;
          coll.push_back(static_cast<double>(sr.windows[w].collisionsSum));
          rew.push_back(sr.windows[w].rewardPerAdv);
        }
        summary << result.perSeed.front().windows[w].startEpisode << ','
                << result.perSeed.front().windows[w].endEpisode << ','
                << formatDouble(medianOf(coll)) << ','
                << formatDouble(medianOf(rew)) << '\n';
      }
    }

    if (cfg.topologyDump) {
      std::ofstream topo(dir / "topology.csv", std::ios::trunc);
      topo << "seed,episode,step,id_a,id_b,distance,relation\n";
      for (const SeedRunState& st : states) {
        for (const std::string& row : st.topologyRows) topo << row << '\n';
      }
    }
  }
  return result;
}

}  // namespace covanet
