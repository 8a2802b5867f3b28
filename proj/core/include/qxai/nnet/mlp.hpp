#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qxai/nnet/common.hpp"
#include "qxai/predictor.hpp"

namespace qxai::nnet {

struct MlpSpec {
  std::vector<std::size_t> layer_sizes;  // input, hidden..., output
  Activation hidden = Activation::relu;
  double leaky_slope = 0.01;
  Activation output = Activation::identity;

  void validate() const;
  std::size_t n_inputs() const { return layer_sizes.front(); }
  std::size_t n_outputs() const { return layer_sizes.back(); }
};

class Mlp {
 public:
  Mlp(MlpSpec spec, std::uint64_t seed);
  Mlp(MlpSpec spec, std::vector<double> params);

  const MlpSpec& spec() const { return spec_; }
  std::vector<double>& params() { return theta_; }
  const std::vector<double>& params() const { return theta_; }

  std::vector<double> forward(std::span<const double> x) const;

  /// Forward + backward for one sample: accumulates dL/dtheta into grad
  /// (same length as params) and returns the sample loss.
  double loss_and_grad(std::span<const double> x, std::span<const double> target,
                       Loss loss, std::vector<double>& grad) const;

 private:
  MlpSpec spec_;
  std::vector<double> theta_;
  std::vector<std::size_t> w_off_, b_off_;

  void layout();
};

Predictor make_predictor(const Mlp& model);

}  // namespace qxai::nnet
