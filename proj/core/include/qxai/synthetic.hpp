#pragma once

#include <cstdint>

#include "qxai/predictor.hpp"
#include "qxai/types.hpp"

namespace qxai {

/// Regression data where only features 1 and 3 (0-based indices 0 and 2)
/// drive the target: y = 3*x1 - 3*x3 + noise, with the two drivers drawn at
/// 1.5x the spread of the distractor features.
Dataset make_planted_regression(std::size_t n_rows, std::size_t n_features,
                                std::uint64_t seed, double noise_sigma = 0.1);

/// Linearly separable multi-label data: label l fires when w_l . x exceeds a
/// margin; rows near the boundary are resampled so a linear model separates.
Dataset make_separable_multilabel(std::size_t n_rows, std::size_t n_features,
                                  std::size_t n_labels, std::uint64_t seed,
                                  double margin = 0.3);

/// f(x) = w . x as a Predictor; closed-form Shapley oracle target.
Predictor linear_predictor(const std::vector<double>& weights);

/// Smooth 6-feature nonlinear toy used by convergence checks.
Predictor nonlinear_toy_predictor();

}  // namespace qxai
