#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "qxai/types.hpp"

namespace qxai::nnet {

enum class Activation { identity, relu, leaky_relu, sigmoid, softmax };
enum class Loss { mae, bce };

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct TrainConfig {
  std::size_t epochs = 100;
  std::size_t batch_size = 64;
  AdamConfig adam;
  Loss loss = Loss::mae;
  std::uint64_t seed = 0;

  void validate() const {
    if (epochs < 1) throw ConfigError("train: epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
    if (adam.lr <= 0.0) throw ConfigError("train: learning rate must be positive");
  }
};

/// First-order moment estimates with bias correction.
class Adam {
 public:
  Adam(std::size_t n, AdamConfig cfg) : cfg_(cfg), m_(n, 0.0), v_(n, 0.0) {}

  void step(std::vector<double>& params, const std::vector<double>& grad) {
    ++t_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, double(t_));
    const double c2 = 1.0 - std::pow(cfg_.beta2, double(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * grad[i];
      v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * grad[i] * grad[i];
      params[i] -= cfg_.lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + cfg_.eps);
    }
  }

 private:
  AdamConfig cfg_;
  std::uint64_t t_ = 0;
  std::vector<double> m_, v_;
};

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// Numerically stabilized softmax (max subtraction).
inline std::vector<double> softmax(std::span<const double> e) {
  double mx = e[0];
  for (double v : e) mx = std::max(mx, v);
  std::vector<double> out(e.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    out[i] = std::exp(e[i] - mx);
    sum += out[i];
  }
  for (auto& v : out) v /= sum;
  return out;
}

double loss_value(Loss loss, std::span<const double> y, std::span<const double> target);

/// dL/dz at the output layer's pre-activation, with sigmoid/softmax + BCE
/// folded for stability.
std::vector<double> output_delta(Activation act, Loss loss, std::span<const double> y,
                                 std::span<const double> z, std::span<const double> target);

}  // namespace qxai::nnet
