#pragma once

#include "qxai/nnet/attention_net.hpp"
#include "qxai/nnet/mlp.hpp"
#include "qxai/types.hpp"

namespace qxai::nnet {

/// Central-difference check of the analytic gradient over a batch:
/// returns max over parameters of |analytic - numeric| / max(|a|,|n|,1e-8).
double grad_check_mlp(Mlp& model, const Dataset& batch, Loss loss, double eps = 1e-5);
double grad_check_attention(AttentionNet& model, const Dataset& batch, Loss loss,
                            double eps = 1e-5);

}  // namespace qxai::nnet
