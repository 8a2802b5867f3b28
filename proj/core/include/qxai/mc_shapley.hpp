#pragma once

#include <cstdint>
#include <vector>

#include "qxai/explanation.hpp"
#include "qxai/game.hpp"

namespace qxai {

struct McConfig {
  std::size_t samples_per_feature = 2000;
  std::uint64_t seed = 0;
  bool antithetic = false;       // reserved; estimator currently ignores it
  bool permutation_sweep = false;  // reuse one (row, order) draw across all features
  std::size_t workers = 1;  // threads; estimates are identical for any value
};

/// Permutation-sampling Shapley estimate: for each feature j and each of M
/// samples, draw a background row and a random feature order, then average
/// f(x with j and its predecessors kept) - f(same but j replaced).
/// Diagnostics carry per-feature standard errors and the sample count.
Explanation mc_shapley(const Predictor& model, std::span<const double> instance,
                       const Dataset& data, const McConfig& config,
                       std::size_t output_index = 0);

/// Max-abs error of the MC estimate against the exact masking-game Shapley
/// values at each checkpoint sample count.
std::vector<std::pair<std::size_t, double>> mc_convergence_curve(
    const Predictor& model, std::span<const double> instance, const Dataset& data,
    const std::vector<std::size_t>& checkpoints, std::uint64_t seed,
    std::size_t output_index = 0);

}  // namespace qxai
