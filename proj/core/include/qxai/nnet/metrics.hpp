#pragma once

#include <span>
#include <vector>

#include "qxai/types.hpp"

namespace qxai::nnet {

struct RegressionMetrics {
  double mae = 0.0;
  double mse = 0.0;
};

RegressionMetrics regression_metrics(std::span<const double> pred,
                                     std::span<const double> actual);

struct ClassificationMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double balanced_accuracy = 0.0;
  std::vector<std::size_t> zero_positive_labels;  // recall defined as 0 there
};

/// Macro-averaged over labels at the given probability threshold.
/// Balanced accuracy is mean(TPR, TNR) per label, then macro.
ClassificationMetrics classification_metrics(
    const std::vector<std::vector<double>>& pred_probabilities,
    const std::vector<std::vector<double>>& actual_indicators, double threshold = 0.5);

}  // namespace qxai::nnet
