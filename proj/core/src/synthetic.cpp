#include "qxai/synthetic.hpp"

#include <cmath>
#include <random>

#include "qxai/rng.hpp"

namespace qxai {

namespace {

FeatureSchema numbered_schema(std::size_t n_features, TargetKind kind,
                              std::size_t n_labels) {
  FeatureSchema s;
  for (std::size_t j = 0; j < n_features; ++j) s.names.push_back("f" + std::to_string(j + 1));
  s.target.kind = kind;
  if (kind == TargetKind::regression) {
    s.target.columns = {"target"};
  } else {
    for (std::size_t l = 0; l < n_labels; ++l)
      s.target.columns.push_back("label" + std::to_string(l + 1));
  }
  s.groups.subject = "subject";
  s.groups.activity = "activity";
  return s;
}

}  // namespace

Dataset make_planted_regression(std::size_t n_rows, std::size_t n_features,
                                std::uint64_t seed, double noise_sigma) {
  if (n_features < 3) throw ConfigError("planted regression: need >= 3 features");
  Dataset ds;
  ds.schema = numbered_schema(n_features, TargetKind::regression, 0);
  std::mt19937_64 rng(splitmix64(seed ^ 0x51a09cb8e3d72f64ull));
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i < n_rows; ++i) {
    std::vector<double> row(n_features);
    for (auto& v : row) v = gauss(rng);
    // The driver features get a wider spread than the distractors.
    for (std::size_t j = 0; j < n_features; ++j) row[j] *= (j == 0 || j == 2) ? 1.5 : 0.3;
    double y = 3.0 * row[0] - 3.0 * row[2] + noise_sigma * gauss(rng);
    ds.rows.push_back(std::move(row));
    ds.targets.push_back({y});
    ds.groups.push_back({"s" + std::to_string(i % 5 + 1), "rest"});
    ds.orig_index.push_back(i);
  }
  return ds;
}

Dataset make_separable_multilabel(std::size_t n_rows, std::size_t n_features,
                                  std::size_t n_labels, std::uint64_t seed,
                                  double margin) {
  if (n_labels < 1) throw ConfigError("multilabel data: need >= 1 label");
  Dataset ds;
  ds.schema = numbered_schema(n_features, TargetKind::multilabel, n_labels);
  std::mt19937_64 rng(splitmix64(seed ^ 0x2c4d8f16a7b3e950ull));
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Fixed separating directions, unit norm.
  std::vector<std::vector<double>> w(n_labels, std::vector<double>(n_features));
  for (auto& wl : w) {
    double norm = 0.0;
    for (auto& v : wl) {
      v = gauss(rng);
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (auto& v : wl) v /= norm;
  }

  for (std::size_t i = 0; i < n_rows; ++i) {
    std::vector<double> row(n_features);
    std::vector<double> labels(n_labels);
    for (;;) {
      for (auto& v : row) v = gauss(rng);
      bool clear = true;
      for (std::size_t l = 0; l < n_labels; ++l) {
        double dot = 0.0;
        for (std::size_t j = 0; j < n_features; ++j) dot += w[l][j] * row[j];
        if (std::abs(dot) < margin) {
          clear = false;
          break;
        }
        labels[l] = dot > 0 ? 1.0 : 0.0;
      }
      if (clear) break;
    }
    ds.rows.push_back(std::move(row));
    ds.targets.push_back(labels);
    ds.groups.push_back(
        {"s" + std::to_string(i % 5 + 1), "a" + std::to_string(i % 3 + 1)});
    ds.orig_index.push_back(i);
  }
  return ds;
}

Predictor linear_predictor(const std::vector<double>& weights) {
  Predictor p;
  p.n_inputs = weights.size();
  p.n_outputs = 1;
  p.eval = [weights](std::span<const double> x) {
    double y = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) y += weights[i] * x[i];
    return std::vector<double>{y};
  };
  return p;
}

Predictor nonlinear_toy_predictor() {
  Predictor p;
  p.n_inputs = 6;
  p.n_outputs = 1;
  p.eval = [](std::span<const double> x) {
    double y = std::sin(x[0]) + x[1] * x[2] + 0.5 * x[3] * x[3] +
               std::tanh(x[4] - x[5]) + 0.3 * x[0] * x[5];
    return std::vector<double>{y};
  };
  return p;
}

}  // namespace qxai
