#pragma once

#include <cstdint>
#include <vector>

#include "covanet/ddpg.hpp"
#include "covanet/vehicle.hpp"

namespace covanet {

/// One vehicle's learner: actor/critic pair, frozen targets, replay buffer
/// and exploration noise. Owns its parameters; adoption of a distributed
/// parameter set replaces mains and targets atomically between steps.
class Agent {
 public:
  Agent(VehicleId id, int stateDim, const TrainingConfig& cfg,
        std::uint64_t seed);

  VehicleId id() const { return id_; }
  int stateDim() const { return stateDim_; }
  const TrainingConfig& config() const { return cfg_; }

  /// Reset the exploration process (start of an episode).
  void beginEpisode();

  /// Exploration scale for subsequent act() calls; annealed by the caller.
  void setExplorationSigma(double sigma) { sigma_ = sigma; }
  double explorationSigma() const { return sigma_; }

  /// Policy action for a flattened state; adds OU noise when asked and
  /// clamps into the action box.
  Action act(const std::vector<float>& state, bool withNoise);

  /// Store a transition and, when learning is enabled and the buffer holds a
  /// full minibatch, run one update cycle. Returns true when a gradient step
  /// ran.
  bool observe(Transition<float> transition);

  void setLearningEnabled(bool enabled) { learningEnabled_ = enabled; }
  bool learningEnabled() const { return learningEnabled_; }

  /// Replace mains with the given parameter sets and reset both targets to
  /// the adopted mains. Validates shapes first; on mismatch the previous
  /// parameters stay untouched.
  void adopt(const Mlp<float>& actor, const Mlp<float>& critic);

  const Mlp<float>& actor() const { return actor_; }
  const Mlp<float>& critic() const { return critic_; }
  const Mlp<float>& targetActor() const { return targetActor_; }
  const Mlp<float>& targetCritic() const { return targetCritic_; }
  Mlp<float>& mutableActor() { return actor_; }
  Mlp<float>& mutableCritic() { return critic_; }

  const ReplayBuffer<float>& buffer() const { return buffer_; }
  std::uint64_t gradientSteps() const { return gradientSteps_; }
  double lastCriticLoss() const { return lastCriticLoss_; }

 private:
  void learnOnce();

  VehicleId id_;
  int stateDim_;
  TrainingConfig cfg_;
  Mlp<float> actor_, critic_, targetActor_, targetCritic_;
  AdamState<float> actorAdam_, criticAdam_;
  ReplayBuffer<float> buffer_;
  OrnsteinUhlenbeck noise_;
  Rng noiseRng_, sampleRng_;
  double sigma_;
  bool learningEnabled_{true};
  std::uint64_t gradientSteps_{0};
  std::uint64_t observations_{0};
  double lastCriticLoss_{0.0};
};

}  // namespace covanet
