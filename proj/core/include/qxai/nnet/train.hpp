#pragma once

#include "qxai/nnet/attention_net.hpp"
#include "qxai/nnet/mlp.hpp"
#include "qxai/types.hpp"

namespace qxai::nnet {

struct TrainResult {
  std::vector<double> loss_history;  // mean per-sample loss, one entry per epoch
};

/// Shuffled mini-batch training with Adam. Deterministic for a fixed
/// (spec, data, config). Throws DivergenceError on a non-finite loss.
TrainResult train_mlp(Mlp& model, const Dataset& train, const TrainConfig& config);
TrainResult train_attention_net(AttentionNet& model, const Dataset& train,
                                const TrainConfig& config);

/// Per-instance attention traces plus the global per-feature summary.
struct AttentionSummary {
  std::vector<AttentionTrace> traces;
  std::vector<double> mean_scores;   // signed
  std::vector<double> mean_weights;  // nonnegative, sums to 1
};

AttentionSummary extract_attention(const AttentionNet& model, const Dataset& instances);

}  // namespace qxai::nnet
