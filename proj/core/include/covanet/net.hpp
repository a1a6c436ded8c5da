#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "covanet/common.hpp"
#include "covanet/rng.hpp"

namespace covanet {

enum class Activation : std::uint8_t {
  Linear = 0,
  Relu = 1,
  Tanh = 2,
  Sigmoid = 3,
  // Per-channel squash for the 3-dim control head: sigmoid for accel and
  // brake, tanh for steering. Requires an output width of 3.
  ActionSquash = 4,
};

enum class NetworkKind : std::uint8_t { Actor = 0, Critic = 1 };

/// Dense feed-forward network templated on the scalar so the exact same code
/// paths run in float for training and in double for gradient checks.
/// Weights are row-major (outDim x inDim); batches are row-major flat
/// (n x dim) vectors.
template <typename S>
struct Layer {
  int inDim{0};
  int outDim{0};
  std::vector<S> weights;
  std::vector<S> bias;
  Activation activation{Activation::Linear};
};

template <typename S>
class Mlp {
 public:
  Mlp() = default;
  Mlp(NetworkKind kind, const std::vector<int>& dims,
      const std::vector<Activation>& acts)
      : kind_(kind) {
    if (dims.size() < 2 || acts.size() != dims.size() - 1) {
      throw ContractViolation("Mlp: dims/activations mismatch");
    }
    layers_.reserve(acts.size());
    for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
      Layer<S> layer;
      layer.inDim = dims[i];
      layer.outDim = dims[i + 1];
      layer.weights.assign(static_cast<std::size_t>(layer.inDim) * layer.outDim,
                           S(0));
      layer.bias.assign(layer.outDim, S(0));
      layer.activation = acts[i];
      if (layer.activation == Activation::ActionSquash && layer.outDim != 3) {
        throw ContractViolation("ActionSquash head requires 3 outputs");
      }
      layers_.push_back(std::move(layer));
    }
  }

  NetworkKind kind() const { return kind_; }
  int inputDim() const { return layers_.front().inDim; }
  int outputDim() const { return layers_.back().outDim; }
  std::size_t numLayers() const { return layers_.size(); }
  const std::vector<Layer<S>>& layers() const { return layers_; }
  std::vector<Layer<S>>& layers() { return layers_; }

  std::size_t parameterCount() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += l.weights.size() + l.bias.size();
    return n;
  }

 private:
  NetworkKind kind_{NetworkKind::Actor};
  std::vector<Layer<S>> layers_;
};

template <typename S>
bool sameShape(const Mlp<S>& a, const Mlp<S>& b) {
  if (a.kind() != b.kind() || a.numLayers() != b.numLayers()) return false;
  for (std::size_t i = 0; i < a.numLayers(); ++i) {
    const auto& la = a.layers()[i];
    const auto& lb = b.layers()[i];
    if (la.inDim != lb.inDim || la.outDim != lb.outDim ||
        la.activation != lb.activation) {
      return false;
    }
  }
  return true;
}

template <typename S>
struct ForwardCache {
  int n{0};
  // act[0] is the input batch; act[i+1] the post-activation output of layer
  // i; pre[i] its pre-activation.
  std::vector<std::vector<S>> pre;
  std::vector<std::vector<S>> act;
};

namespace detail {

template <typename S>
void applyActivation(Activation act, const std::vector<S>& z,
                     std::vector<S>& y, int n, int dim) {
  switch (act) {
    case Activation::Linear:
      y = z;
      break;
    case Activation::Relu:
      y.resize(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) y[i] = z[i] > S(0) ? z[i] : S(0);
      break;
    case Activation::Tanh:
      y.resize(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) y[i] = std::tanh(z[i]);
      break;
    case Activation::Sigmoid:
      y.resize(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) {
        y[i] = S(1) / (S(1) + std::exp(-z[i]));
      }
      break;
    case Activation::ActionSquash:
      y.resize(z.size());
      for (int r = 0; r < n; ++r) {
        const S* zr = z.data() + static_cast<std::size_t>(r) * dim;
        S* yr = y.data() + static_cast<std::size_t>(r) * dim;
        yr[0] = S(1) / (S(1) + std::exp(-zr[0]));
        yr[1] = S(1) / (S(1) + std::exp(-zr[1]));
        yr[2] = std::tanh(zr[2]);
      }
      break;
  }
}

/// d(post)/d(pre) elementwise, computed from pre- and post-activation.
template <typename S>
S activationGrad(Activation act, S pre, S post, int channel) {
  switch (act) {
    case Activation::Linear:
      return S(1);
    case Activation::Relu:
      return pre > S(0) ? S(1) : S(0);
    case Activation::Tanh:
      return S(1) - post * post;
    case Activation::Sigmoid:
      return post * (S(1) - post);
    case Activation::ActionSquash:
      return channel == 2 ? S(1) - post * post : post * (S(1) - post);
  }
  return S(1);
}

}  // namespace detail

/// Batched forward pass; `input` is n x inputDim row-major. Returns the
/// n x outputDim result and optionally fills a cache for backward().
template <typename S>
std::vector<S> forward(const Mlp<S>& net, const std::vector<S>& input, int n,
                       ForwardCache<S>* cache = nullptr) {
  if (n <= 0 || input.size() != static_cast<std::size_t>(n) * net.inputDim()) {
    throw ContractViolation("forward: input size does not match layer 0 (" +
                            std::to_string(net.inputDim()) + " expected)");
  }
  std::vector<S> x = input;
  if (cache) {
    cache->n = n;
    cache->pre.assign(net.numLayers(), {});
    cache->act.assign(net.numLayers() + 1, {});
    cache->act[0] = x;
  }
  for (std::size_t li = 0; li < net.numLayers(); ++li) {
    const Layer<S>& layer = net.layers()[li];
    std::vector<S> z(static_cast<std::size_t>(n) * layer.outDim);
    for (int r = 0; r < n; ++r) {
      const S* xr = x.data() + static_cast<std::size_t>(r) * layer.inDim;
      S* zr = z.data() + static_cast<std::size_t>(r) * layer.outDim;
      for (int o = 0; o < layer.outDim; ++o) {
        const S* w = layer.weights.data() +
                     static_cast<std::size_t>(o) * layer.inDim;
        S acc = layer.bias[o];
        for (int j = 0; j < layer.inDim; ++j) acc += w[j] * xr[j];
        zr[o] = acc;
      }
    }
    std::vector<S> y;
    detail::applyActivation(layer.activation, z, y, n, layer.outDim);
    if (cache) {
      cache->pre[li] = std::move(z);
      cache->act[li + 1] = y;
    }
    x = std::move(y);
  }
  return x;
}

template <typename S>
struct Gradients {
  std::vector<std::vector<S>> weights;
  std::vector<std::vector<S>> bias;

  static Gradients zerosLike(const Mlp<S>& net) {
    Gradients g;
    g.weights.reserve(net.numLayers());
    g.bias.reserve(net.numLayers());
    for (const auto& l : net.layers()) {
      g.weights.emplace_back(l.weights.size(), S(0));
      g.bias.emplace_back(l.bias.size(), S(0));
    }
    return g;
  }
};

/// Backpropagate `gradOut` (n x outputDim, dObjective/dOutput) through the
/// cached forward pass. Parameter gradients accumulate into `grads`; when
/// `gradInput` is non-null it receives dObjective/dInput (n x inputDim).
template <typename S>
void backward(const Mlp<S>& net, const ForwardCache<S>& cache,
              const std::vector<S>& gradOut, Gradients<S>& grads,
              std::vector<S>* gradInput = nullptr) {
  const int n = cache.n;
  if (gradOut.size() != static_cast<std::size_t>(n) * net.outputDim()) {
    throw ContractViolation("backward: gradient size does not match output");
  }
  std::vector<S> dy = gradOut;
  for (std::size_t li = net.numLayers(); li-- > 0;) {
    const Layer<S>& layer = net.layers()[li];
    const std::vector<S>& pre = cache.pre[li];
    const std::vector<S>& post = cache.act[li + 1];
    const std::vector<S>& x = cache.act[li];

    // d(objective)/d(pre-activation)
    std::vector<S> dz(dy.size());
    for (int r = 0; r < n; ++r) {
      for (int o = 0; o < layer.outDim; ++o) {
        const std::size_t idx = static_cast<std::size_t>(r) * layer.outDim + o;
        dz[idx] = dy[idx] * detail::activationGrad(layer.activation, pre[idx],
                                                   post[idx], o);
      }
    }

    std::vector<S>& gw = grads.weights[li];
    std::vector<S>& gb = grads.bias[li];
    for (int r = 0; r < n; ++r) {
      const S* xr = x.data() + static_cast<std::size_t>(r) * layer.inDim;
      const S* dzr = dz.data() + static_cast<std::size_t>(r) * layer.outDim;
      for (int o = 0; o < layer.outDim; ++o) {
        const S g = dzr[o];
        if (g == S(0)) continue;
        S* gwo = gw.data() + static_cast<std::size_t>(o) * layer.inDim;
        for (int j = 0; j < layer.inDim; ++j) gwo[j] += g * xr[j];
        gb[o] += g;
      }
    }

    const bool needDx = li > 0 || gradInput != nullptr;
    if (!needDx) break;
    std::vector<S> dx(static_cast<std::size_t>(n) * layer.inDim, S(0));
    for (int r = 0; r < n; ++r) {
      const S* dzr = dz.data() + static_cast<std::size_t>(r) * layer.outDim;
      S* dxr = dx.data() + static_cast<std::size_t>(r) * layer.inDim;
      for (int o = 0; o < layer.outDim; ++o) {
        const S g = dzr[o];
        if (g == S(0)) continue;
        const S* w = layer.weights.data() +
                     static_cast<std::size_t>(o) * layer.inDim;
        for (int j = 0; j < layer.inDim; ++j) dxr[j] += g * w[j];
      }
    }
    if (li == 0 && gradInput) *gradInput = std::move(dx);
    dy = std::move(dx);
  }
}

/// Uniform init in +-1/sqrt(fanIn) for weights and biases; the final layer of
/// an actor uses +-3e-3 so initial actions sit near the squash midpoints.
template <typename S>
void initUniform(Mlp<S>& net, Rng& rng) {
  for (std::size_t li = 0; li < net.numLayers(); ++li) {
    Layer<S>& layer = net.layers()[li];
    const bool finalActor =
        net.kind() == NetworkKind::Actor && li + 1 == net.numLayers();
    const double bound =
        finalActor ? 3e-3 : 1.0 / std::sqrt(static_cast<double>(layer.inDim));
    for (S& w : layer.weights) w = static_cast<S>(rng.uniform(-bound, bound));
    for (S& b : layer.bias) b = static_cast<S>(rng.uniform(-bound, bound));
  }
}

/// theta_target <- tau * theta_source + (1 - tau) * theta_target.
template <typename S>
void softUpdate(Mlp<S>& target, const Mlp<S>& source, double tau) {
  if (!sameShape(target, source)) {
    throw ContractViolation("softUpdate: network shapes differ");
  }
  const S t = static_cast<S>(tau);
  const S keep = S(1) - t;
  for (std::size_t li = 0; li < target.numLayers(); ++li) {
    auto& lt = target.layers()[li];
    const auto& ls = source.layers()[li];
    for (std::size_t i = 0; i < lt.weights.size(); ++i) {
      lt.weights[i] = t * ls.weights[i] + keep * lt.weights[i];
    }
    for (std::size_t i = 0; i < lt.bias.size(); ++i) {
      lt.bias[i] = t * ls.bias[i] + keep * lt.bias[i];
    }
  }
}

template <typename S>
Mlp<S> makeActor(int stateDim, int hidden1, int hidden2,
                 Activation hiddenAct = Activation::Relu) {
  return Mlp<S>(NetworkKind::Actor, {stateDim, hidden1, hidden2, 3},
                {hiddenAct, hiddenAct, Activation::ActionSquash});
}

template <typename S>
Mlp<S> makeCritic(int stateDim, int actionDim, int hidden1, int hidden2,
                  Activation hiddenAct = Activation::Relu) {
  return Mlp<S>(NetworkKind::Critic, {stateDim + actionDim, hidden1, hidden2, 1},
                {hiddenAct, hiddenAct, Activation::Linear});
}

enum class OptimizerKind : std::uint8_t { Sgd = 0, Adam = 1 };

template <typename S>
struct AdamState {
  std::vector<std::vector<S>> mW, vW, mB, vB;
  long step{0};

  static AdamState zerosLike(const Mlp<S>& net) {
    AdamState st;
    for (const auto& l : net.layers()) {
      st.mW.emplace_back(l.weights.size(), S(0));
      st.vW.emplace_back(l.weights.size(), S(0));
      st.mB.emplace_back(l.bias.size(), S(0));
      st.vB.emplace_back(l.bias.size(), S(0));
    }
    return st;
  }
};

/// One descent step on the objective whose gradients are in `grads`.
/// Callers minimizing pass the loss gradient; callers maximizing negate.
template <typename S>
void applyUpdate(Mlp<S>& net, const Gradients<S>& grads, double lr,
                 OptimizerKind opt, AdamState<S>* adam) {
  const S rate = static_cast<S>(lr);
  if (opt == OptimizerKind::Sgd) {
    for (std::size_t li = 0; li < net.numLayers(); ++li) {
      auto& l = net.layers()[li];
      for (std::size_t i = 0; i < l.weights.size(); ++i) {
        l.weights[i] -= rate * grads.weights[li][i];
      }
      for (std::size_t i = 0; i < l.bias.size(); ++i) {
        l.bias[i] -= rate * grads.bias[li][i];
      }
    }
    return;
  }
  if (!adam) throw ContractViolation("applyUpdate: Adam requires state");
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  adam->step += 1;
  const double corr1 = 1.0 - std::pow(b1, static_cast<double>(adam->step));
  const double corr2 = 1.0 - std::pow(b2, static_cast<double>(adam->step));
  auto update = [&](std::vector<S>& params, const std::vector<S>& g,
                    std::vector<S>& m, std::vector<S>& v) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double gi = static_cast<double>(g[i]);
      const double mi = b1 * static_cast<double>(m[i]) + (1.0 - b1) * gi;
      const double vi = b2 * static_cast<double>(v[i]) + (1.0 - b2) * gi * gi;
      m[i] = static_cast<S>(mi);
      v[i] = static_cast<S>(vi);
      params[i] -= static_cast<S>(lr * (mi / corr1) /
                                  (std::sqrt(vi / corr2) + eps));
    }
  };
  for (std::size_t li = 0; li < net.numLayers(); ++li) {
    update(net.layers()[li].weights, grads.weights[li], adam->mW[li],
           adam->vW[li]);
    update(net.layers()[li].bias, grads.bias[li], adam->mB[li], adam->vB[li]);
  }
}

}  // namespace covanet
