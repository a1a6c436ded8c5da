#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "covanet/common.hpp"
#include "covanet/net.hpp"
#include "covanet/rng.hpp"

namespace covanet {

template <typename S>
struct Transition {
  std::vector<S> state;
  std::array<S, 3> action{};
  S reward{};
  std::vector<S> nextState;
  bool terminal{false};
};

/// Fixed-capacity FIFO ring; uniform minibatch sampling without replacement.
template <typename S>
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw ConfigError("replay capacity must be positive");
    ring_.reserve(capacity);
  }

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return ring_.size(); }
  std::uint64_t insertions() const { return insertions_; }

  void push(Transition<S> t) {
    if (ring_.size() < capacity_) {
      ring_.push_back(std::move(t));
    } else {
      ring_[head_] = std::move(t);
      head_ = (head_ + 1) % capacity_;
    }
    ++insertions_;
  }

  /// i-th oldest stored transition, i in [0, size).
  const Transition<S>& at(std::size_t i) const {
    return ring_[(head_ + i) % ring_.size()];
  }

  /// n distinct uniform indices into [0, size), ascending.
  std::vector<std::size_t> sampleDistinct(Rng& rng, std::size_t n) const {
    if (n > size()) {
      throw ContractViolation("sampleDistinct: minibatch exceeds buffer size");
    }
    // Floyd's algorithm
    std::unordered_set<std::size_t> chosen;
    for (std::size_t i = size() - n; i < size(); ++i) {
      const std::size_t j = rng.index(i + 1);
      if (!chosen.insert(j).second) chosen.insert(i);
    }
    std::vector<std::size_t> out(chosen.begin(), chosen.end());
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::size_t capacity_;
  std::vector<Transition<S>> ring_;
  std::size_t head_{0};  // index of the oldest element once full
  std::uint64_t insertions_{0};
};

/// Discrete Ornstein-Uhlenbeck process (unit step), one channel per action
/// dimension: x += theta * (mu - x) + sigma * N(0,1).
struct OrnsteinUhlenbeck {
  double theta{0.15};
  double mu{0.0};
  std::array<double, 3> x{};

  void reset() { x = {}; }

  const std::array<double, 3>& sample(Rng& rng, double sigma) {
    for (double& xi : x) xi += theta * (mu - xi) + sigma * rng.normal();
    return x;
  }
};

struct TrainingConfig {
  double gamma{0.99};
  double tau{0.001};
  double actorLr{1e-4};
  double criticLr{1e-4};
  int batchSize{32};
  std::size_t bufferCapacity{100000};
  int hidden1{300};
  int hidden2{400};
  Activation hiddenActivation{Activation::Relu};
  OptimizerKind optimizer{OptimizerKind::Sgd};
  double ouTheta{0.15};
  double ouSigma{0.2};
  double ouSigmaFinal{0.05};
  // Scale applied to rewards entering the replay buffer; metrics keep the
  // raw values.
  double rewardScale{1.0};
  int updateEvery{1};

  void validate() const {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("gamma must be in [0,1)");
    if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("tau must be in (0,1)");
    if (batchSize < 1) throw ConfigError("batch size must be >= 1");
    if (bufferCapacity < static_cast<std::size_t>(batchSize)) {
      throw ConfigError("buffer capacity must be >= batch size");
    }
    if (hidden1 < 1 || hidden2 < 1) throw ConfigError("hidden sizes must be >= 1");
    if (actorLr <= 0.0 || criticLr <= 0.0) throw ConfigError("learning rates must be positive");
    if (updateEvery < 1) throw ConfigError("updateEvery must be >= 1");
    if (rewardScale <= 0.0) throw ConfigError("reward scale must be positive");
  }
};

namespace detail {

template <typename S>
std::vector<S> gatherStates(const std::vector<const Transition<S>*>& batch,
                            bool next) {
  const std::size_t dim = batch.front()->state.size();
  std::vector<S> out;
  out.reserve(batch.size() * dim);
  for (const auto* t : batch) {
    const auto& src = next ? t->nextState : t->state;
    out.insert(out.end(), src.begin(), src.end());
  }
  return out;
}

template <typename S>
std::vector<S> concatStateAction(const std::vector<S>& states,
                                 const std::vector<S>& actions,
                                 std::size_t n, std::size_t stateDim) {
  std::vector<S> out;
  out.reserve(n * (stateDim + 3));
  for (std::size_t i = 0; i < n; ++i) {
    out.insert(out.end(), states.begin() + i * stateDim,
               states.begin() + (i + 1) * stateDim);
    out.insert(out.end(), actions.begin() + i * 3, actions.begin() + (i + 1) * 3);
  }
  return out;
}

}  // namespace detail

/// y_i = r_i + gamma * Q'(s_{i+1}, mu'(s_{i+1})); bootstrap masked to
/// y_i = r_i on terminal transitions.
template <typename S>
std::vector<S> criticTargets(const std::vector<const Transition<S>*>& batch,
                             const Mlp<S>& targetActor,
                             const Mlp<S>& targetCritic, double gamma) {
  if (batch.empty()) throw ContractViolation("criticTargets: empty batch");
  const std::size_t n = batch.size();
  const std::size_t stateDim = batch.front()->state.size();
  const std::vector<S> nextStates = detail::gatherStates(batch, true);
  const std::vector<S> nextActions =
      forward(targetActor, nextStates, static_cast<int>(n));
  const std::vector<S> qNext =
      forward(targetCritic,
              detail::concatStateAction(nextStates, nextActions, n, stateDim),
              static_cast<int>(n));
  std::vector<S> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = batch[i]->reward;
    if (!batch[i]->terminal) y[i] += static_cast<S>(gamma) * qNext[i];
  }
  return y;
}

/// One descent step on L = (1/N) sum (y_i - Q(s_i, a_i))^2. Returns L.
template <typename S>
S criticUpdate(Mlp<S>& critic, const std::vector<const Transition<S>*>& batch,
               const std::vector<S>& y, double lr,
               OptimizerKind opt = OptimizerKind::Sgd,
               AdamState<S>* adam = nullptr) {
  const std::size_t n = batch.size();
  const std::size_t stateDim = batch.front()->state.size();
  std::vector<S> actions;
  actions.reserve(n * 3);
  for (const auto* t : batch) {
    actions.insert(actions.end(), t->action.begin(), t->action.end());
  }
  const std::vector<S> input = detail::concatStateAction(
      detail::gatherStates(batch, false), actions, n, stateDim);

  ForwardCache<S> cache;
  const std::vector<S> q = forward(critic, input, static_cast<int>(n), &cache);

  S loss = S(0);
  std::vector<S> dq(n);
  const S invN = S(1) / static_cast<S>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const S diff = q[i] - y[i];
    loss += diff * diff * invN;
    dq[i] = S(2) * diff * invN;
  }
  if (!std::isfinite(static_cast<double>(loss))) {
    throw TrainingDiverged("critic loss is not finite");
  }

  Gradients<S> grads = Gradients<S>::zerosLike(critic);
  backward(critic, cache, dq, grads);
  applyUpdate(critic, grads, lr, opt, adam);
  return loss;
}

/// One ascent step on J = (1/N) sum Q(s_i, mu(s_i)); the critic is read-only.
template <typename S>
void actorUpdate(Mlp<S>& actor, const Mlp<S>& critic,
                 const std::vector<const Transition<S>*>& batch, double lr,
                 OptimizerKind opt = OptimizerKind::Sgd,
                 AdamState<S>* adam = nullptr) {
  const std::size_t n = batch.size();
  const std::size_t stateDim = batch.front()->state.size();
  const std::vector<S> states = detail::gatherStates(batch, false);

  ForwardCache<S> actorCache;
  const std::vector<S> actions =
      forward(actor, states, static_cast<int>(n), &actorCache);

  ForwardCache<S> criticCache;
  forward(critic, detail::concatStateAction(states, actions, n, stateDim),
          static_cast<int>(n), &criticCache);

  // Minimize -J: seed the critic backprop with d(-J)/dQ = -1/N and chain the
  // action slice of the input gradient through the actor.
  std::vector<S> dq(n, -S(1) / static_cast<S>(n));
  Gradients<S> criticScratch = Gradients<S>::zerosLike(critic);
  std::vector<S> dInput;
  backward(critic, criticCache, dq, criticScratch, &dInput);

  std::vector<S> dAction(n * 3);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < 3; ++k) {
      dAction[i * 3 + k] = dInput[i * (stateDim + 3) + stateDim + k];
    }
  }

  Gradients<S> grads = Gradients<S>::zerosLike(actor);
  backward(actor, actorCache, dAction, grads);
  for (const auto& gw : grads.weights) {
    for (S g : gw) {
      if (!std::isfinite(static_cast<double>(g))) {
        throw TrainingDiverged("actor gradient is not finite");
      }
    }
  }
  applyUpdate(actor, grads, lr, opt, adam);
}

}  // namespace covanet
