#include "covanet/dist.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace covanet {

RewardWindow::RewardWindow(std::size_t capacity) : ring_(capacity, 0.0) {
  if (capacity == 0) throw ConfigError("reward window capacity must be positive");
}

void RewardWindow::push(double reward) {
  ring_[head_] = reward;
  head_ = (head_ + 1) % ring_.size();
  if (count_ < ring_.size()) ++count_;
}

double RewardWindow::mean() const {
  if (count_ == 0) {
    throw ContractViolation("average of an empty reward window is undefined");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < count_; ++i) sum += ring_[i];
  return sum / static_cast<double>(count_);
}

double averageReward(const RewardWindow& window) { return window.mean(); }

LearnMode learnOrWait(bool isFollower, double budget,
                      const DistributionPolicy& policy) {
  if (!isFollower) return LearnMode::Learn;
  return budget >= policy.budgetThreshold ? LearnMode::Learn : LearnMode::Wait;
}

std::vector<std::pair<VehicleId, ParameterPacket>> distributeParameters(
    VehicleId leader, const std::vector<VehicleId>& followers, int t,
    int episode, const DistributionPolicy& policy, bool vanetOpen,
    const RewardWindow& window, double paramsTag, const Mlp<float>& actor,
    const Mlp<float>& critic) {
  std::vector<std::pair<VehicleId, ParameterPacket>> out;
  if (t < policy.triggerStep || t % policy.triggerStep != 0) return out;
  if (!vanetOpen || followers.empty() || window.empty()) return out;

  ParameterPacket packet;
  packet.senderId = static_cast<std::uint32_t>(leader);
  packet.averageReward = paramsTag;
  packet.episode = static_cast<std::uint32_t>(episode);
  packet.step = static_cast<std::uint32_t>(t);
  packet.actor = actor;
  packet.critic = critic;
  for (VehicleId f : followers) out.emplace_back(f, packet);
  return out;
}

PacketDecision selectPackets(const std::vector<ParameterPacket>& packets,
                             const Mlp<float>& expectedActor,
                             const Mlp<float>& expectedCritic,
                             double ownAvgReward, LearnMode mode,
                             bool forwardingEnabled) {
  PacketDecision d;
  d.resultingTag = ownAvgReward;

  int bestIdx = -1;
  double bestAvg = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < packets.size(); ++i) {
    const ParameterPacket& p = packets[i];
    if (!std::isfinite(p.averageReward) ||
        !sameShape(p.actor, expectedActor) ||
        !sameShape(p.critic, expectedCritic)) {
      d.discardedIndices.push_back(i);
      continue;
    }
    if (p.averageReward > bestAvg) {
      bestAvg = p.averageReward;
      bestIdx = static_cast<int>(i);
    }
  }
  if (bestIdx < 0) return d;  // nothing valid received

  if (mode == LearnMode::Wait) {
    d.adoptIndex = bestIdx;
    d.resultingTag = bestAvg;
    return d;
  }
  if (bestAvg > ownAvgReward) {
    d.adoptIndex = bestIdx;
    d.resultingTag = bestAvg;
  } else {
    d.keepOwnAndForward = forwardingEnabled;
  }
  return d;
}

CoopAgent::CoopAgent()
    : paramsTag(-std::numeric_limits<double>::infinity()) {}

CoopAgent::CoopAgent(Agent* a) : CoopAgent() { agent = a; }

void CoopAgent::refreshTag() {
  if (!agent || window.empty()) return;
  if (agent->gradientSteps() > stepsAtTag) {
    paramsTag = window.mean();
    stepsAtTag = agent->gradientSteps();
  }
}

DistributionEngine::DistributionEngine(DistributionPolicy policy,
                                       DiagnosticSink diag)
    : policy_(policy), diag_(diag ? std::move(diag) : stderrDiagnostics()) {
  policy_.validate();
}

DistributionEngine::ExchangeStats DistributionEngine::exchange(
    int t, int episode, VanetRegistry& registry,
    std::map<VehicleId, CoopAgent>& agents) {
  ExchangeStats stats;
  if (!policy_.enabled) return stats;
  if (t < policy_.triggerStep || t % policy_.triggerStep != 0) return stats;

  // Leaders snapshot and broadcast first so every receiver sees this step's
  // simultaneous state.
  std::map<VehicleId, std::vector<ParameterPacket>> inbox;
  std::map<VehicleId, std::vector<VehicleId>> sendersFor;
  for (auto& [id, coop] : agents) {
    const auto followers = registry.followersOf(id);
    if (followers.empty()) continue;
    const auto& m = registry.membership(id);
    coop.refreshTag();
    const auto sent = distributeParameters(
        id, followers, t, episode, policy_, m.insideVanet || m.openedVanet,
        coop.window, coop.paramsTag, coop.agent->actor(), coop.agent->critic());
    for (const auto& [to, packet] : sent) {
      inbox[to].push_back(packet);
      sendersFor[to].push_back(id);
      ++stats.packetsSent;
    }
  }

  // Receivers adopt or counter-offer.
  std::map<VehicleId, std::vector<ParameterPacket>> counterInbox;
  for (auto& [id, packets] : inbox) {
    CoopAgent& coop = agents.at(id);
    coop.refreshTag();
    const LearnMode mode = learnOrWait(registry.followsAnyone(id),
                                       registry.budgetOf(id), policy_);
    const PacketDecision decision =
        selectPackets(packets, coop.agent->actor(), coop.agent->critic(),
                      coop.paramsTag, mode, policy_.forwarding);
    for (std::size_t i : decision.discardedIndices) {
      diag_("agent " + std::to_string(id) + " discarded malformed packet from " +
            std::to_string(packets[i].senderId));
      ++stats.discarded;
    }
    if (decision.adoptIndex >= 0) {
      const ParameterPacket& chosen =
          packets[static_cast<std::size_t>(decision.adoptIndex)];
      coop.agent->adopt(chosen.actor, chosen.critic);
      coop.paramsTag = chosen.averageReward;
      coop.stepsAtTag = coop.agent->gradientSteps();
      ++stats.adoptions;
    } else if (decision.keepOwnAndForward) {
      ParameterPacket own;
      own.senderId = static_cast<std::uint32_t>(id);
      own.averageReward = coop.paramsTag;
      own.episode = static_cast<std::uint32_t>(episode);
      own.step = static_cast<std::uint32_t>(t);
      own.actor = coop.agent->actor();
      own.critic = coop.agent->critic();
      for (VehicleId leader : sendersFor.at(id)) {
        counterInbox[leader].push_back(own);
        ++stats.counterOffers;
      }
    }
  }

  // Leaders consider counter-offers; no further forwarding this round.
  for (auto& [id, packets] : counterInbox) {
    CoopAgent& coop = agents.at(id);
    coop.refreshTag();
    const PacketDecision decision =
        selectPackets(packets, coop.agent->actor(), coop.agent->critic(),
                      coop.paramsTag, LearnMode::Learn, false);
    for (std::size_t i : decision.discardedIndices) {
      diag_("agent " + std::to_string(id) + " discarded malformed packet from " +
            std::to_string(packets[i].senderId));
      ++stats.discarded;
    }
    if (decision.adoptIndex >= 0) {
      const ParameterPacket& chosen =
          packets[static_cast<std::size_t>(decision.adoptIndex)];
      coop.agent->adopt(chosen.actor, chosen.critic);
      coop.paramsTag = chosen.averageReward;
      coop.stepsAtTag = coop.agent->gradientSteps();
      ++stats.adoptions;
    }
  }
  return stats;
}

}  // namespace covanet
