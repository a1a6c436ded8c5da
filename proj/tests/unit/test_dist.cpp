#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "covanet/dist.hpp"
#include "support/oracles.hpp"

using namespace covanet;

namespace {

DiagnosticSink quiet() {
  return [](std::string_view) {};
}

TrainingConfig tinyTraining() {
  TrainingConfig cfg;
  cfg.hidden1 = 4;
  cfg.hidden2 = 4;
  cfg.batchSize = 2;
  cfg.bufferCapacity = 16;
  return cfg;
}

ParameterPacket packetFrom(const Agent& agent, double avgReward,
                           VehicleId sender = 0) {
  ParameterPacket p;
  p.senderId = static_cast<std::uint32_t>(sender);
  p.averageReward = avgReward;
  p.actor = agent.actor();
  p.critic = agent.critic();
  return p;
}

bool sameParams(const Mlp<float>& a, const Mlp<float>& b) {
  for (std::size_t li = 0; li < a.numLayers(); ++li) {
    if (a.layers()[li].weights != b.layers()[li].weights) return false;
    if (a.layers()[li].bias != b.layers()[li].bias) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("reward window mean") {
  RewardWindow w(100);
  CHECK_THROWS_AS(averageReward(w), ContractViolation);

  w.push(1.0);
  w.push(2.0);
  w.push(3.0);
  CHECK(averageReward(w) == doctest::Approx(2.0));

  RewardWindow single(100);
  single.push(-7.25);
  CHECK(averageReward(single) == doctest::Approx(-7.25));

  SUBCASE("sliding window keeps only the most recent entries") {
    RewardWindow small(3);
    for (double x : {1.0, 2.0, 3.0, 4.0}) small.push(x);
    CHECK(small.mean() == doctest::Approx(3.0));  // {2,3,4}
  }

  SUBCASE("matches an independent two-pass mean over a logged run") {
    Rng rng(3);
    RewardWindow w50(100);
    std::vector<double> logged;
    for (int i = 0; i < 50; ++i) {
      const double r = rng.uniform(-1000.0, 1000.0);
      logged.push_back(r);
      w50.push(r);
    }
    CHECK(averageReward(w50) ==
          doctest::Approx(oracles::twoPassMean(logged)).epsilon(1e-12));
  }
}

TEST_CASE("learn or wait") {
  DistributionPolicy policy;
  policy.budgetThreshold = 1.0;
  CHECK(learnOrWait(false, 0.0, policy) == LearnMode::Learn);   // leaders
  CHECK(learnOrWait(true, 0.0, policy) == LearnMode::Wait);
  CHECK(learnOrWait(true, 5.0, policy) == LearnMode::Learn);
}

TEST_CASE("distribute guards") {
  Agent leader(0, 4, tinyTraining(), 1);
  RewardWindow window(100);
  DistributionPolicy policy;

  SUBCASE("no packets off the trigger step") {
    window.push(1.0);
    CHECK(distributeParameters(0, {1, 2}, 99, 1, policy, true, window, 1.0,
                               leader.actor(), leader.critic())
              .empty());
  }

  SUBCASE("one identical packet per follower on the trigger step") {
    window.push(1.0);
    const auto sent = distributeParameters(0, {1, 2}, 100, 1, policy, true,
                                           window, 1.0, leader.actor(),
                                           leader.critic());
    REQUIRE(sent.size() == 2);
    CHECK(sent[0].first == 1);
    CHECK(sent[1].first == 2);
    CHECK(sent[0].second.serialize() == sent[1].second.serialize());
    CHECK(sent[0].second.step == 100);
  }

  SUBCASE("later multiples of the trigger also fire") {
    window.push(1.0);
    CHECK_FALSE(distributeParameters(0, {1}, 200, 1, policy, true, window, 1.0,
                                     leader.actor(), leader.critic())
                    .empty());
    CHECK(distributeParameters(0, {1}, 150, 1, policy, true, window, 1.0,
                               leader.actor(), leader.critic())
              .empty());
  }

  SUBCASE("closed network sends nothing") {
    window.push(1.0);
    CHECK(distributeParameters(0, {1}, 100, 1, policy, false, window, 1.0,
                               leader.actor(), leader.critic())
              .empty());
  }

  SUBCASE("empty window sends nothing") {
    CHECK(distributeParameters(0, {1}, 100, 1, policy, true, window, 1.0,
                               leader.actor(), leader.critic())
              .empty());
  }

  SUBCASE("no followers sends nothing") {
    window.push(1.0);
    CHECK(distributeParameters(0, {}, 100, 1, policy, true, window, 1.0,
                               leader.actor(), leader.critic())
              .empty());
  }
}

TEST_CASE("packet selection rule") {
  Agent self(9, 4, tinyTraining(), 2);
  Agent donorA(0, 4, tinyTraining(), 3);
  Agent donorB(1, 4, tinyTraining(), 4);

  SUBCASE("multi-leader argmax: packets 7 and 3 against own 5 adopt the 7") {
    const std::vector<ParameterPacket> packets{packetFrom(donorA, 7.0, 0),
                                               packetFrom(donorB, 3.0, 1)};
    const PacketDecision d = selectPackets(packets, self.actor(), self.critic(),
                                           5.0, LearnMode::Learn, true);
    CHECK(d.adoptIndex == 0);
    CHECK(d.resultingTag == doctest::Approx(7.0));
  }

  SUBCASE("own superior parameters are kept and forwarded") {
    const std::vector<ParameterPacket> packets{packetFrom(donorA, 7.0, 0)};
    const PacketDecision d = selectPackets(packets, self.actor(), self.critic(),
                                           9.0, LearnMode::Learn, true);
    CHECK(d.adoptIndex == -1);
    CHECK(d.keepOwnAndForward);
    CHECK(d.resultingTag == doctest::Approx(9.0));
  }

  SUBCASE("ties keep the current parameters") {
    const std::vector<ParameterPacket> packets{packetFrom(donorA, 5.0, 0)};
    const PacketDecision d = selectPackets(packets, self.actor(), self.critic(),
                                           5.0, LearnMode::Learn, true);
    CHECK(d.adoptIndex == -1);
  }

  SUBCASE("waiting agents adopt the best packet unconditionally") {
    const std::vector<ParameterPacket> packets{packetFrom(donorA, 3.0, 0)};
    const PacketDecision d = selectPackets(packets, self.actor(), self.critic(),
                                           5.0, LearnMode::Wait, true);
    CHECK(d.adoptIndex == 0);
    CHECK(d.resultingTag == doctest::Approx(3.0));
  }

  SUBCASE("malformed packets are discarded, never adopted") {
    Agent other(2, 6, tinyTraining(), 5);  // wrong state dimension
    std::vector<ParameterPacket> packets{packetFrom(other, 100.0, 2),
                                         packetFrom(donorA, 6.0, 0)};
    const PacketDecision d = selectPackets(packets, self.actor(), self.critic(),
                                           5.0, LearnMode::Learn, true);
    REQUIRE(d.discardedIndices.size() == 1);
    CHECK(d.discardedIndices[0] == 0);
    CHECK(d.adoptIndex == 1);

    SUBCASE("non-finite average is malformed too") {
      packets[1].averageReward = std::nan("");
      const PacketDecision d2 = selectPackets(packets, self.actor(),
                                              self.critic(), 5.0,
                                              LearnMode::Learn, true);
      CHECK(d2.discardedIndices.size() == 2);
      CHECK(d2.adoptIndex == -1);
      CHECK_FALSE(d2.keepOwnAndForward);  // nothing valid arrived
    }
  }

  SUBCASE("max-adoption invariant under the strict rule") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<ParameterPacket> packets;
      double maxAvg = -1e18;
      const int n = 1 + static_cast<int>(rng.index(4));
      for (int i = 0; i < n; ++i) {
        const double avg = rng.uniform(-50.0, 50.0);
        maxAvg = std::max(maxAvg, avg);
        packets.push_back(packetFrom(donorA, avg, i));
      }
      const double own = rng.uniform(-50.0, 50.0);
      const PacketDecision d = selectPackets(packets, self.actor(),
                                             self.critic(), own,
                                             LearnMode::Learn, true);
      CHECK(d.resultingTag == doctest::Approx(std::max(own, maxAvg)));
    }
  }

  SUBCASE("argmax is invariant to a positive rescale") {
    std::vector<ParameterPacket> packets{packetFrom(donorA, 4.0, 0),
                                         packetFrom(donorB, 6.0, 1)};
    const PacketDecision before = selectPackets(
        packets, self.actor(), self.critic(), 1.0, LearnMode::Learn, true);
    for (auto& p : packets) p.averageReward *= 37.5;
    const PacketDecision after = selectPackets(
        packets, self.actor(), self.critic(), 37.5, LearnMode::Learn, true);
    CHECK(before.adoptIndex == after.adoptIndex);
  }
}

TEST_CASE("engine exchange over a real registry") {
  // two agents, 0 leads 1
  Agent a0(0, 4, tinyTraining(), 10);
  Agent a1(1, 4, tinyTraining(), 11);
  VanetRegistry reg(VanetConfig{}, quiet());
  reg.addParticipant(0, 10.0);
  reg.addParticipant(1, 5.0);
  const auto oracle = [](VehicleId, VehicleId) -> std::optional<double> {
    return 50.0;
  };
  reg.refreshLocalLists([](VehicleId id) {
    return id == 0 ? std::vector<VehicleId>{1} : std::vector<VehicleId>{0};
  });
  reg.openVanet(0);
  reg.identifyNeighbors(0, oracle);
  reg.maintain(oracle);
  REQUIRE(reg.followersOf(0) == std::vector<VehicleId>{1});

  DistributionPolicy policy;
  DistributionEngine engine(policy, quiet());
  std::map<VehicleId, CoopAgent> coop;
  coop.emplace(0, CoopAgent(&a0));
  coop.emplace(1, CoopAgent(&a1));
  coop.at(0).window.push(1.0);
  coop.at(1).window.push(1.0);

  SUBCASE("follower adopts the leader's better parameters") {
    coop.at(0).paramsTag = 8.0;
    coop.at(1).paramsTag = 2.0;
    const auto stats = engine.exchange(100, 1, reg, coop);
    CHECK(stats.packetsSent == 1);
    CHECK(stats.adoptions == 1);
    CHECK(sameParams(a1.actor(), a0.actor()));
    CHECK(coop.at(1).paramsTag == doctest::Approx(8.0));
  }

  SUBCASE("superior follower counter-offers and the leader adopts") {
    coop.at(0).paramsTag = 2.0;
    coop.at(1).paramsTag = 8.0;
    const auto stats = engine.exchange(100, 1, reg, coop);
    CHECK(stats.counterOffers == 1);
    CHECK(stats.adoptions == 1);
    CHECK(sameParams(a0.actor(), a1.actor()));
    CHECK(coop.at(0).paramsTag == doctest::Approx(8.0));
  }

  SUBCASE("forwarding can be disabled") {
    DistributionPolicy oneWay;
    oneWay.forwarding = false;
    DistributionEngine engineOneWay(oneWay, quiet());
    coop.at(0).paramsTag = 2.0;
    coop.at(1).paramsTag = 8.0;
    const auto stats = engineOneWay.exchange(100, 1, reg, coop);
    CHECK(stats.counterOffers == 0);
    CHECK_FALSE(sameParams(a0.actor(), a1.actor()));
  }

  SUBCASE("nothing happens off the trigger") {
    const auto stats = engine.exchange(99, 1, reg, coop);
    CHECK(stats.packetsSent == 0);
  }
}

TEST_CASE("knowledge converges along a line within diameter exchanges") {
  // ids 0..5 in a line; budgets descend so each node leads its right
  // neighbor; the best parameters start at the far (most-follower) end
  const int n = 6;
  std::vector<Agent> agents;
  agents.reserve(n);
  for (int i = 0; i < n; ++i) {
    agents.emplace_back(i, 4, tinyTraining(), 100 + i);
  }
  VanetRegistry reg(VanetConfig{}, quiet());
  for (int i = 0; i < n; ++i) {
    reg.addParticipant(i, 100.0 - 10.0 * i);
  }
  const auto oracle = [](VehicleId a, VehicleId b) -> std::optional<double> {
    return std::abs(a - b) == 1 ? std::optional<double>(40.0) : std::nullopt;
  };
  reg.refreshLocalLists([n](VehicleId id) {
    std::vector<VehicleId> out;
    if (id > 0) out.push_back(id - 1);
    if (id < n - 1) out.push_back(id + 1);
    return out;
  });
  reg.openVanet(0);
  for (int i = 0; i < n; ++i) reg.identifyNeighbors(i, oracle);
  reg.maintain(oracle);
  for (int i = 0; i + 1 < n; ++i) {
    REQUIRE(reg.followersOf(i) == std::vector<VehicleId>{i + 1});
  }

  DistributionPolicy policy;
  DistributionEngine engine(policy, quiet());
  std::map<VehicleId, CoopAgent> coop;
  for (int i = 0; i < n; ++i) {
    coop.emplace(i, CoopAgent(&agents[static_cast<std::size_t>(i)]));
    coop.at(i).window.push(1.0);  // frozen windows
    coop.at(i).paramsTag = static_cast<double>(i);  // node 5 is maximal
  }
  const Mlp<float> best = agents[5].actor();

  int rounds = 0;
  for (int t = 100; t <= 500; t += 100) {
    engine.exchange(t, 1, reg, coop);
    ++rounds;
  }
  CHECK(rounds == 5);
  for (int i = 0; i < n; ++i) {
    CHECK(sameParams(agents[static_cast<std::size_t>(i)].actor(), best));
    CHECK(coop.at(i).paramsTag == doctest::Approx(5.0));
  }
}
