#pragma once

#include <filesystem>
#include <variant>

#include "qxai/nnet/attention_net.hpp"
#include "qxai/nnet/mlp.hpp"
#include "qxai/predictor.hpp"

namespace qxai::nnet {

/// Versioned JSON container: model spec + flat parameters + training config.
/// Reloading reproduces predictions bit-for-bit.
struct Checkpoint {
  std::variant<Mlp, AttentionNet> model;
  TrainConfig train_config;

  bool is_attention() const { return std::holds_alternative<AttentionNet>(model); }
  Predictor predictor() const;
  std::size_t n_inputs() const;
  std::size_t n_outputs() const;
};

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace qxai::nnet
