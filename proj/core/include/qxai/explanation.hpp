#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace qxai {

/// Universal output of all attribution methods: a base value (expected model
/// output over the background) plus a signed per-feature, per-output
/// attribution matrix. For Shapley methods, per output k,
/// sum_j phi[j][k] == prediction[k] - base_value[k] within the method tolerance.
struct Explanation {
  std::vector<double> base_value;            // length K
  std::vector<std::vector<double>> phi;      // N rows x K columns
  std::vector<double> prediction;            // f(x), length K
  std::vector<std::string> feature_names;    // length N
  std::string method;                        // exact | kernel | mc | attention
  nlohmann::json diagnostics;                // budget, seed, stderr, ...

  std::size_t n_features() const { return phi.size(); }
  std::size_t n_outputs() const { return base_value.size(); }

  /// |sum_j phi[j][k] - (prediction[k] - base[k])| for output k.
  double efficiency_gap(std::size_t k) const {
    double s = 0.0;
    for (const auto& row : phi) s += row[k];
    double d = s - (prediction[k] - base_value[k]);
    return d < 0 ? -d : d;
  }
};

}  // namespace qxai
