#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qxai/nnet/common.hpp"
#include "qxai/predictor.hpp"

namespace qxai::nnet {

enum class RecurrentCell { lstm, elman };

struct AttentionNetSpec {
  std::size_t n_features = 0;  // sequence length: one position per feature
  std::size_t embed_dim = 4;
  std::size_t hidden = 8;      // per direction; h_j has 2*hidden components
  std::size_t n_outputs = 1;
  RecurrentCell cell = RecurrentCell::lstm;
  Activation output = Activation::identity;

  void validate() const;
};

/// Raw scores e_j, softmax weights alpha_j and the context vector for one
/// instance. alpha sums to 1; e_j is signed in (-1,1).
struct AttentionTrace {
  std::vector<double> scores;
  std::vector<double> weights;
  std::vector<double> context;  // 2*hidden
};

/// Per-feature embedding -> bidirectional recurrent encoder over feature
/// positions -> tanh alignment scores -> softmax attention -> weighted
/// context -> dense decoder.
class AttentionNet {
 public:
  AttentionNet(AttentionNetSpec spec, std::uint64_t seed);
  AttentionNet(AttentionNetSpec spec, std::vector<double> params);

  const AttentionNetSpec& spec() const { return spec_; }
  std::vector<double>& params() { return theta_; }
  const std::vector<double>& params() const { return theta_; }

  std::vector<double> forward(std::span<const double> x,
                              AttentionTrace* trace = nullptr) const;

  /// Decoder head alone, applied to a context vector (used to check that the
  /// extracted trace reproduces the model output).
  std::vector<double> decode(std::span<const double> context) const;

  double loss_and_grad(std::span<const double> x, std::span<const double> target,
                       Loss loss, std::vector<double>& grad) const;

 private:
  AttentionNetSpec spec_;
  std::vector<double> theta_;

  // parameter block offsets
  std::size_t o_we_, o_be_;
  std::size_t o_wf_[2], o_uf_[2], o_bf_[2];  // per direction
  std::size_t o_watt_, o_batt_;
  std::size_t o_wd_, o_bd_;
  std::size_t gate_rows_;  // 4h for lstm, h for elman

  void layout();
};

/// e_j = tanh(dot(x_j, w_j + bias)); the scalar convenience overload treats
/// every quantity as one-dimensional.
std::vector<double> attention_scores(std::span<const double> x,
                                     std::span<const double> position_weights,
                                     double bias);

/// alpha = softmax(e), stabilized by max subtraction.
std::vector<double> attention_weights(std::span<const double> scores);

/// c = sum_j alpha_j h_j.
std::vector<double> context_vector(std::span<const double> weights,
                                   const std::vector<std::vector<double>>& representations);

Predictor make_predictor(const AttentionNet& model);

}  // namespace qxai::nnet
