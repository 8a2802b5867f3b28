#include "qxai/nnet/metrics.hpp"

#include <cmath>

namespace qxai::nnet {

RegressionMetrics regression_metrics(std::span<const double> pred,
                                     std::span<const double> actual) {
  if (pred.size() != actual.size() || pred.empty())
    throw ConfigError("regression_metrics: length mismatch or empty input");
  RegressionMetrics m;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - actual[i];
    m.mae += std::abs(d);
    m.mse += d * d;
  }
  m.mae /= double(pred.size());
  m.mse /= double(pred.size());
  return m;
}

ClassificationMetrics classification_metrics(
    const std::vector<std::vector<double>>& pred_probabilities,
    const std::vector<std::vector<double>>& actual_indicators, double threshold) {
  if (pred_probabilities.empty() || pred_probabilities.size() != actual_indicators.size())
    throw ConfigError("classification_metrics: shape mismatch");
  const std::size_t labels = pred_probabilities.front().size();
  ClassificationMetrics out;
  for (std::size_t l = 0; l < labels; ++l) {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (std::size_t i = 0; i < pred_probabilities.size(); ++i) {
      const double a = actual_indicators[i][l];
      if (a != 0.0 && a != 1.0)
        throw ConfigError("classification_metrics: actual must be 0/1");
      const bool pred = pred_probabilities[i][l] >= threshold;
      const bool act = a == 1.0;
      if (pred && act) ++tp;
      else if (pred && !act) ++fp;
      else if (!pred && act) ++fn;
      else ++tn;
    }
    double prec = tp + fp > 0 ? double(tp) / double(tp + fp) : 0.0;
    double rec;
    if (tp + fn > 0) {
      rec = double(tp) / double(tp + fn);
    } else {
      rec = 0.0;
      out.zero_positive_labels.push_back(l);
    }
    double f1 = prec + rec > 0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
    double tnr = tn + fp > 0 ? double(tn) / double(tn + fp) : 0.0;
    double tpr = rec;
    out.precision += prec;
    out.recall += rec;
    out.f1 += f1;
    out.balanced_accuracy += 0.5 * (tpr + tnr);
  }
  out.precision /= double(labels);
  out.recall /= double(labels);
  out.f1 /= double(labels);
  out.balanced_accuracy /= double(labels);
  return out;
}

}  // namespace qxai::nnet
