#include "covanet/agent.hpp"

namespace covanet {

Agent::Agent(VehicleId id, int stateDim, const TrainingConfig& cfg,
             std::uint64_t seed)
    : id_(id),
      stateDim_(stateDim),
      cfg_(cfg),
      buffer_(cfg.bufferCapacity),
      noiseRng_(Rng(seed).fork(0x6f75)),
      sampleRng_(Rng(seed).fork(0x7362)),
      sigma_(cfg.ouSigma) {
  cfg_.validate();
  actor_ = makeActor<float>(stateDim, cfg.hidden1, cfg.hidden2,
                            cfg.hiddenActivation);
  critic_ = makeCritic<float>(stateDim, 3, cfg.hidden1, cfg.hidden2,
                              cfg.hiddenActivation);
  Rng initRng = Rng(seed).fork(0x696e);
  initUniform(actor_, initRng);
  initUniform(critic_, initRng);
  targetActor_ = actor_;
  targetCritic_ = critic_;
  if (cfg_.optimizer == OptimizerKind::Adam) {
    actorAdam_ = AdamState<float>::zerosLike(actor_);
    criticAdam_ = AdamState<float>::zerosLike(critic_);
  }
  noise_.theta = cfg.ouTheta;
}

void Agent::beginEpisode() { noise_.reset(); }

Action Agent::act(const std::vector<float>& state, bool withNoise) {
  const std::vector<float> out = forward(actor_, state, 1);
  Action a{out[0], out[1], out[2]};
  if (withNoise) {
    const auto& n = noise_.sample(noiseRng_, sigma_);
    a.accel += n[0];
    a.brake += n[1];
    a.steering += n[2];
  }
  a.accel = clamp(a.accel, 0.0, 1.0);
  a.brake = clamp(a.brake, 0.0, 1.0);
  a.steering = clamp(a.steering, -1.0, 1.0);
  return a;
}

bool Agent::observe(Transition<float> transition) {
  buffer_.push(std::move(transition));
  ++observations_;
  if (!learningEnabled_) return false;
  if (buffer_.size() < static_cast<std::size_t>(cfg_.batchSize)) return false;
  if (observations_ % static_cast<std::uint64_t>(cfg_.updateEvery) != 0) {
    return false;
  }
  learnOnce();
  return true;
}

void Agent::learnOnce() {
  const auto indices =
      buffer_.sampleDistinct(sampleRng_, static_cast<std::size_t>(cfg_.batchSize));
  std::vector<const Transition<float>*> batch;
  batch.reserve(indices.size());
  for (std::size_t i : indices) batch.push_back(&buffer_.at(i));

  const std::vector<float> y =
      criticTargets(batch, targetActor_, targetCritic_, cfg_.gamma);
  lastCriticLoss_ = criticUpdate(critic_, batch, y, cfg_.criticLr,
                                 cfg_.optimizer,
                                 cfg_.optimizer == OptimizerKind::Adam
                                     ? &criticAdam_
                                     : nullptr);
  actorUpdate(actor_, critic_, batch, cfg_.actorLr, cfg_.optimizer,
              cfg_.optimizer == OptimizerKind::Adam ? &actorAdam_ : nullptr);
  softUpdate(targetActor_, actor_, cfg_.tau);
  softUpdate(targetCritic_, critic_, cfg_.tau);
  ++gradientSteps_;
}

void Agent::adopt(const Mlp<float>& actor, const Mlp<float>& critic) {
  if (!sameShape(actor_, actor) || !sameShape(critic_, critic)) {
    throw ContractViolation("adopt: parameter shapes do not match this agent");
  }
  actor_ = actor;
  critic_ = critic;
  targetActor_ = actor_;
  targetCritic_ = critic_;
  if (cfg_.optimizer == OptimizerKind::Adam) {
    actorAdam_ = AdamState<float>::zerosLike(actor_);
    criticAdam_ = AdamState<float>::zerosLike(critic_);
  }
}

}  // namespace covanet
