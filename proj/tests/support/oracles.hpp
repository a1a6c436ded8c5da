// Independent reference implementations used to pin expected values. These
// deliberately avoid the library's own code paths: naive loops, separate
// angle math, textbook formulas.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "covanet/net.hpp"

namespace oracles {

// Plain per-sample matrix product, independent of covanet::forward.
template <typename S>
std::vector<S> naiveForward(const covanet::Mlp<S>& net,
                            const std::vector<S>& input) {
  std::vector<S> x = input;
  for (const auto& layer : net.layers()) {
    std::vector<S> z(static_cast<std::size_t>(layer.outDim), S(0));
    for (int o = 0; o < layer.outDim; ++o) {
      long double acc = layer.bias[static_cast<std::size_t>(o)];
      for (int j = 0; j < layer.inDim; ++j) {
        acc += static_cast<long double>(
                   layer.weights[static_cast<std::size_t>(o) * layer.inDim + j]) *
               x[static_cast<std::size_t>(j)];
      }
      z[static_cast<std::size_t>(o)] = static_cast<S>(acc);
    }
    std::vector<S> y(z.size());
    for (int o = 0; o < layer.outDim; ++o) {
      const S v = z[static_cast<std::size_t>(o)];
      switch (layer.activation) {
        case covanet::Activation::Linear:
          y[o] = v;
          break;
        case covanet::Activation::Relu:
          y[o] = v > S(0) ? v : S(0);
          break;
        case covanet::Activation::Tanh:
          y[o] = std::tanh(v);
          break;
        case covanet::Activation::Sigmoid:
          y[o] = S(1) / (S(1) + std::exp(-v));
          break;
        case covanet::Activation::ActionSquash:
          y[o] = o == 2 ? std::tanh(v) : S(1) / (S(1) + std::exp(-v));
          break;
      }
    }
    x = std::move(y);
  }
  return x;
}

// Central finite differences of a scalar objective with respect to every
// parameter of `net`. The objective must treat the net as read-only between
// calls.
template <typename S>
covanet::Gradients<S> finiteDifferenceGradients(
    covanet::Mlp<S>& net, const std::function<double()>& objective,
    double h = 1e-6) {
  auto grads = covanet::Gradients<S>::zerosLike(net);
  for (std::size_t li = 0; li < net.numLayers(); ++li) {
    auto& layer = net.layers()[li];
    for (std::size_t i = 0; i < layer.weights.size(); ++i) {
      const S saved = layer.weights[i];
      const double step = h * std::max(1.0, std::abs(static_cast<double>(saved)));
      layer.weights[i] = saved + static_cast<S>(step);
      const double plus = objective();
      layer.weights[i] = saved - static_cast<S>(step);
      const double minus = objective();
      layer.weights[i] = saved;
      grads.weights[li][i] = static_cast<S>((plus - minus) / (2.0 * step));
    }
    for (std::size_t i = 0; i < layer.bias.size(); ++i) {
      const S saved = layer.bias[i];
      const double step = h * std::max(1.0, std::abs(static_cast<double>(saved)));
      layer.bias[i] = saved + static_cast<S>(step);
      const double plus = objective();
      layer.bias[i] = saved - static_cast<S>(step);
      const double minus = objective();
      layer.bias[i] = saved;
      grads.bias[li][i] = static_cast<S>((plus - minus) / (2.0 * step));
    }
  }
  return grads;
}

template <typename S>
double maxRelativeError(const covanet::Gradients<S>& a,
                        const covanet::Gradients<S>& b) {
  double worst = 0.0;
  auto compare = [&](const std::vector<S>& ga, const std::vector<S>& gb) {
    for (std::size_t i = 0; i < ga.size(); ++i) {
      const double x = static_cast<double>(ga[i]);
      const double y = static_cast<double>(gb[i]);
      const double denom = std::max({1.0, std::abs(x), std::abs(y)});
      worst = std::max(worst, std::abs(x - y) / denom);
    }
  };
  for (std::size_t li = 0; li < a.weights.size(); ++li) {
    compare(a.weights[li], b.weights[li]);
    compare(a.bias[li], b.bias[li]);
  }
  return worst;
}

// Nearest vehicle per 10-degree sector, written against the sector spec
// directly (explicit [lo, hi) interval test per sector instead of index
// arithmetic).
inline std::array<double, 36> sectorSweepOracle(
    double selfX, double selfY, double selfHeading,
    const std::vector<std::array<double, 2>>& others, double rangeCap) {
  std::array<double, 36> readings;
  readings.fill(rangeCap);
  const double sectorWidth = 2.0 * M_PI / 36.0;
  for (int k = 0; k < 36; ++k) {
    const double lo = k * sectorWidth;
    const double hi = (k + 1) * sectorWidth;
    for (const auto& o : others) {
      const double dx = o[0] - selfX;
      const double dy = o[1] - selfY;
      const double dist = std::sqrt(dx * dx + dy * dy);
      if (dist > rangeCap) continue;
      double bearing = std::atan2(dy, dx) - selfHeading;
      while (bearing < 0.0) bearing += 2.0 * M_PI;
      while (bearing >= 2.0 * M_PI) bearing -= 2.0 * M_PI;
      if (bearing >= lo && bearing < hi) {
        readings[k] = std::min(readings[k], dist);
      }
    }
  }
  return readings;
}

// Two-pass mean.
inline double twoPassMean(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  double correction = 0.0;
  for (double x : xs) correction += x - mean;
  return mean + correction / static_cast<double>(xs.size());
}

// Safe-gap formula in SI units: reaction distance plus the braking-gap
// difference between current and maximal deceleration.
inline double safeDistanceSiOracle(double vKmh, double tS, double aCur,
                                   double aMax) {
  const double vMs = vKmh / 3.6;
  return tS * vMs + vMs * vMs / (2.0 * aCur) - vMs * vMs / (2.0 * aMax);
}

}  // namespace oracles
