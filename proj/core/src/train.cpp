#include "qxai/nnet/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qxai/rng.hpp"

namespace qxai::nnet {

namespace {

template <class Model>
TrainResult train_impl(Model& model, const Dataset& data, const TrainConfig& config) {
  config.validate();
  if (data.n_rows() == 0) throw ConfigError("train: empty dataset");

  const std::size_t n = data.n_rows();
  auto& theta = model.params();
  Adam opt(theta.size(), config.adam);
  std::vector<double> grad(theta.size(), 0.0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(splitmix64(config.seed ^ 0x6a09e667f3bcc908ull));

  TrainResult result;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t end = std::min(start + config.batch_size, n);
      std::fill(grad.begin(), grad.end(), 0.0);
      double batch_loss = 0.0;
      for (std::size_t i = start; i < end; ++i) {
        const std::size_t r = order[i];
        batch_loss +=
            model.loss_and_grad(data.rows[r], data.targets[r], config.loss, grad);
      }
      const double inv = 1.0 / double(end - start);
      for (auto& g : grad) g *= inv;
      opt.step(theta, grad);
      epoch_loss += batch_loss;
    }
    epoch_loss /= double(n);
    if (!std::isfinite(epoch_loss))
      throw DivergenceError("train: non-finite loss at epoch " + std::to_string(epoch));
    result.loss_history.push_back(epoch_loss);
  }
  return result;
}

}  // namespace

TrainResult train_mlp(Mlp& model, const Dataset& train, const TrainConfig& config) {
  if (train.n_features() != model.spec().n_inputs() ||
      train.targets.front().size() != model.spec().n_outputs())
    throw ConfigError("train_mlp: dataset incompatible with model spec");
  return train_impl(model, train, config);
}

TrainResult train_attention_net(AttentionNet& model, const Dataset& train,
                                const TrainConfig& config) {
  if (train.n_features() != model.spec().n_features ||
      train.targets.front().size() != model.spec().n_outputs)
    throw ConfigError("train_attention_net: dataset incompatible with model spec");
  return train_impl(model, train, config);
}

AttentionSummary extract_attention(const AttentionNet& model, const Dataset& instances) {
  if (instances.n_rows() == 0) throw ConfigError("extract_attention: empty dataset");
  const std::size_t n = model.spec().n_features;
  AttentionSummary out;
  out.mean_scores.assign(n, 0.0);
  out.mean_weights.assign(n, 0.0);
  for (const auto& row : instances.rows) {
    AttentionTrace t;
    model.forward(row, &t);
    for (std::size_t j = 0; j < n; ++j) {
      out.mean_scores[j] += t.scores[j];
      out.mean_weights[j] += t.weights[j];
    }
    out.traces.push_back(std::move(t));
  }
  const double inv = 1.0 / double(instances.n_rows());
  for (std::size_t j = 0; j < n; ++j) {
    out.mean_scores[j] *= inv;
    out.mean_weights[j] *= inv;
  }
  return out;
}

}  // namespace qxai::nnet
