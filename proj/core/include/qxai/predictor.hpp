#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qxai {

/// Black-box deterministic map from a feature vector to an output vector.
/// Evaluation must be pure: same input, bit-identical output, safe to call
/// concurrently.
struct Predictor {
  std::size_t n_inputs = 0;
  std::size_t n_outputs = 1;
  std::function<std::vector<double>(std::span<const double>)> eval;

  std::vector<double> operator()(std::span<const double> x) const { return eval(x); }
};

}  // namespace qxai
