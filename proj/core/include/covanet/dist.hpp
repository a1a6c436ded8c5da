#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "covanet/agent.hpp"
#include "covanet/packet.hpp"
#include "covanet/vanet.hpp"

namespace covanet {

/// Sliding window over the most recent per-step rewards.
class RewardWindow {
 public:
  explicit RewardWindow(std::size_t capacity = 100);

  void push(double reward);
  bool empty() const { return count_ == 0; }
  std::size_t size() const { return count_; }
  std::size_t capacity() const { return ring_.size(); }

  /// Arithmetic mean of the stored rewards; throws ContractViolation when
  /// the window is empty.
  double mean() const;

 private:
  std::vector<double> ring_;
  std::size_t head_{0};
  std::size_t count_{0};
};

/// Mean per-step reward of a nonempty window.
double averageReward(const RewardWindow& window);

struct DistributionPolicy {
  int triggerStep{100};          // exchange every this many steps
  double budgetThreshold{1.0};   // followers below this wait
  bool enabled{true};
  bool forwarding{true};         // followers may counter-offer better params

  void validate() const {
    if (triggerStep < 1) throw ConfigError("trigger step must be >= 1");
  }
};

enum class LearnMode { Learn, Wait };

/// Leaders always learn; followers learn only while they still have budget.
LearnMode learnOrWait(bool isFollower, double budget,
                      const DistributionPolicy& policy);

/// Packets a leader sends at step t: one identical packet per follower, only
/// on trigger steps while its network is open and its window is nonempty.
std::vector<std::pair<VehicleId, ParameterPacket>> distributeParameters(
    VehicleId leader, const std::vector<VehicleId>& followers, int t,
    int episode, const DistributionPolicy& policy, bool vanetOpen,
    const RewardWindow& window, double paramsTag, const Mlp<float>& actor,
    const Mlp<float>& critic);

struct PacketDecision {
  int adoptIndex{-1};  // -1 keeps the current parameters
  bool keepOwnAndForward{false};
  std::vector<std::size_t> discardedIndices;
  double resultingTag{0.0};
};

/// Pure adoption rule over received packets. Waiting agents adopt the
/// highest-average packet unconditionally; learning agents adopt only a
/// strictly better one, otherwise they keep their own and (when forwarding
/// is on) offer it back. Malformed packets are discarded, never partially
/// adopted.
PacketDecision selectPackets(const std::vector<ParameterPacket>& packets,
                             const Mlp<float>& expectedActor,
                             const Mlp<float>& expectedCritic,
                             double ownAvgReward, LearnMode mode,
                             bool forwardingEnabled);

/// A learner participating in cooperative distribution: its reward window
/// plus the average-reward tag of the parameter set it currently runs.
struct CoopAgent {
  Agent* agent{nullptr};
  RewardWindow window{100};
  double paramsTag;
  std::uint64_t stepsAtTag{0};

  CoopAgent();
  explicit CoopAgent(Agent* a);

  /// Re-tag with the window mean once local gradient steps have modified the
  /// parameters since the tag was last set.
  void refreshTag();
};

/// Runs the per-step exchange: leaders broadcast to followers, receivers
/// adopt or counter-offer, leaders consider counter-offers. All packets
/// cross existing network edges only.
class DistributionEngine {
 public:
  struct ExchangeStats {
    int packetsSent{0};
    int adoptions{0};
    int counterOffers{0};
    int discarded{0};
  };

  DistributionEngine(DistributionPolicy policy, DiagnosticSink diag = {});

  const DistributionPolicy& policy() const { return policy_; }

  /// No-op unless t is a positive multiple of the trigger step.
  ExchangeStats exchange(int t, int episode, VanetRegistry& registry,
                         std::map<VehicleId, CoopAgent>& agents);

 private:
  DistributionPolicy policy_;
  DiagnosticSink diag_;
};

}  // namespace covanet
