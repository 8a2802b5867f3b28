#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qxai/explanation.hpp"
#include "qxai/game.hpp"

namespace qxai {

enum class CoalitionWeighting { shap_kernel, lime_proximity };

struct KernelConfig {
  std::size_t budget = 2048;  // clamped to 2^p - 2 when that is smaller
  std::uint64_t seed = 0;
  CoalitionWeighting weighting = CoalitionWeighting::shap_kernel;
  double lime_sigma = 1.0;
  std::size_t background_cap = 128;
  std::size_t workers = 1;  // threads; estimates are identical for any value
};

/// SHAP similarity kernel (p-1) / (C(p,s) * s * (p-s)); infinite at s=0 and
/// s=p, which are enforced as constraints and must never be sampled.
double shap_kernel_weight(int p, int s);

/// LIME proximity exp(-D(x,z)^2 / sigma^2), D Euclidean.
double lime_proximity(std::span<const double> x, std::span<const double> z, double sigma);

/// Deterministic coalition enumeration: full when 2^p - 2 fits the budget,
/// otherwise filled size-layer by size-layer from the extremes inward
/// (1, p-1, 2, p-2, ...), sampling the partially-filled innermost layer
/// without replacement. Never emits the empty or full coalition.
std::vector<CoalitionMask> enumerate_coalitions(int p, std::size_t budget,
                                                std::uint64_t seed);

/// Minimizes sum_i w_i (targets_i - design_i . phi)^2 subject to
/// sum_j phi_j = total, by eliminating the last coefficient through the
/// constraint. Throws ConfigError on a rank-deficient reduced system.
Eigen::VectorXd solve_constrained_wls(const Eigen::MatrixXd& design,
                                      const Eigen::VectorXd& targets,
                                      const Eigen::VectorXd& weights, double total);

/// Kernel SHAP: sample coalitions, evaluate the masking game, weight with the
/// SHAP kernel, fit the constrained weighted linear model. Multi-output models
/// share one coalition set across outputs.
Explanation kernel_shap_explain(const Predictor& model, std::span<const double> instance,
                                const Dataset& background, const KernelConfig& config = {});

}  // namespace qxai
