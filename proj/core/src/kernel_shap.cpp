#include "qxai/kernel_shap.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_set>

#include "qxai/parallel.hpp"
#include "qxai/rng.hpp"

namespace qxai {

double shap_kernel_weight(int p, int s) {
  if (p < 2) throw ConfigError("shap_kernel_weight: need p >= 2");
  if (s <= 0 || s >= p)
    throw ConfigError("shap_kernel_weight: s in {0,p} has infinite weight; "
                      "enforce as constraint, do not sample");
  double binom = 1.0;
  for (int i = 1; i <= s; ++i) binom *= double(p - i + 1) / double(i);
  return double(p - 1) / (binom * double(s) * double(p - s));
}

double lime_proximity(std::span<const double> x, std::span<const double> z, double sigma) {
  if (sigma <= 0.0) throw ConfigError("lime_proximity: sigma must be positive");
  if (x.size() != z.size()) throw ConfigError("lime_proximity: length mismatch");
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = x[i] - z[i];
    d2 += d * d;
  }
  return std::exp(-d2 / (sigma * sigma));
}

namespace {

double binomial(int p, int s) {
  double b = 1.0;
  for (int i = 1; i <= s; ++i) b *= double(p - i + 1) / double(i);
  return b;
}

// All masks of popcount s over p bits, ascending (Gosper's hack).
std::vector<CoalitionMask> layer_masks(int p, int s) {
  std::vector<CoalitionMask> out;
  const CoalitionMask limit = CoalitionMask{1} << p;
  CoalitionMask m = (CoalitionMask{1} << s) - 1;
  while (m < limit) {
    out.push_back(m);
    CoalitionMask c = m & -m;
    CoalitionMask r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
  }
  return out;
}

std::vector<CoalitionMask> sample_layer(int p, int s, std::size_t count,
                                        std::mt19937_64& rng) {
  const double layer_size = binomial(p, s);
  if (layer_size <= double(1 << 20)) {
    auto all = layer_masks(p, s);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min(count, all.size()));
    return all;
  }
  // Huge layer: draw distinct random masks of the given size.
  std::unordered_set<CoalitionMask> seen;
  std::vector<CoalitionMask> out;
  std::vector<int> positions(p);
  std::iota(positions.begin(), positions.end(), 0);
  while (out.size() < count) {
    for (int i = 0; i < s; ++i) {
      std::uniform_int_distribution<int> pick(i, p - 1);
      std::swap(positions[i], positions[pick(rng)]);
    }
    CoalitionMask m = 0;
    for (int i = 0; i < s; ++i) m |= CoalitionMask{1} << positions[i];
    if (seen.insert(m).second) out.push_back(m);
  }
  return out;
}

}  // namespace

std::vector<CoalitionMask> enumerate_coalitions(int p, std::size_t budget,
                                                std::uint64_t seed) {
  if (p < 2) throw ConfigError("enumerate_coalitions: need p >= 2");
  if (budget < 2) throw ConfigError("enumerate_coalitions: budget must be >= 2");

  // Layer order from the weight extremes inward: 1, p-1, 2, p-2, ...
  std::vector<int> sizes;
  for (int d = 1; 2 * d <= p; ++d) {
    sizes.push_back(d);
    if (d != p - d) sizes.push_back(p - d);
  }

  std::mt19937_64 rng(splitmix64(seed ^ 0x8c6f1d2e3b4a5968ull));
  std::vector<CoalitionMask> out;
  std::size_t remaining = budget;
  for (int s : sizes) {
    if (remaining == 0) break;
    const double layer_size = binomial(p, s);
    if (layer_size <= double(remaining)) {
      auto layer = layer_masks(p, s);
      out.insert(out.end(), layer.begin(), layer.end());
      remaining -= layer.size();
    } else {
      auto sampled = sample_layer(p, s, remaining, rng);
      out.insert(out.end(), sampled.begin(), sampled.end());
      remaining = 0;
    }
  }
  return out;
}

Eigen::VectorXd solve_constrained_wls(const Eigen::MatrixXd& design,
                                      const Eigen::VectorXd& targets,
                                      const Eigen::VectorXd& weights, double total) {
  const Eigen::Index rows = design.rows();
  const Eigen::Index p = design.cols();
  if (rows < p) throw ConfigError("wls: fewer rows than coefficients");
  if ((weights.array() <= 0.0).any()) throw ConfigError("wls: weights must be positive");

  // Eliminate phi_{p-1} = total - sum_{j<p-1} phi_j.
  Eigen::VectorXd last = design.col(p - 1);
  Eigen::MatrixXd reduced = design.leftCols(p - 1).colwise() - last;
  Eigen::VectorXd rhs = targets - last * total;

  Eigen::VectorXd sqw = weights.array().sqrt();
  Eigen::MatrixXd a = sqw.asDiagonal() * reduced;
  Eigen::VectorXd b = sqw.asDiagonal() * rhs;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < p - 1)
    throw ConfigError("wls: rank-deficient system, insufficient distinct coalitions");
  Eigen::VectorXd head = qr.solve(b);

  Eigen::VectorXd phi(p);
  phi.head(p - 1) = head;
  phi(p - 1) = total - head.sum();
  return phi;
}

Explanation kernel_shap_explain(const Predictor& model, std::span<const double> instance,
                                const Dataset& background, const KernelConfig& config) {
  const int p = static_cast<int>(instance.size());
  if (p < 2) throw ConfigError("kernel shap: need at least 2 features");
  if (instance.size() != background.n_features())
    throw ConfigError("kernel shap: instance/background width mismatch");

  const std::size_t all_proper = (std::size_t{1} << p) - 2;
  const std::size_t budget = std::min(config.budget, all_proper);
  if (budget < std::size_t(p))
    throw ConfigError("kernel shap: budget too small for " + std::to_string(p) +
                      " features");

  MaskingGameConfig bg_cfg{config.background_cap, config.seed};
  auto rows = background_sample(background, bg_cfg);
  const std::size_t k_out = model.n_outputs;

  std::vector<double> base(k_out, 0.0);
  for (const auto& z : rows) {
    auto y = model(z);
    for (std::size_t k = 0; k < k_out; ++k) base[k] += y[k];
  }
  for (auto& b : base) b /= double(rows.size());
  auto fx = model(instance);

  auto masks = enumerate_coalitions(p, budget, config.seed);
  const std::size_t m = masks.size();

  // One model call per (mask, background row); all outputs amortized. Each
  // mask writes only its own row, so the worker count cannot change results.
  Eigen::MatrixXd v(m, k_out);
  Eigen::MatrixXd design = Eigen::MatrixXd::Zero(m, p);
  Eigen::VectorXd weights(m);
  parallel_for(m, config.workers, [&](std::size_t i) {
    std::vector<double> acc(k_out, 0.0);
    for (const auto& z : rows) {
      auto y = model(compose(instance, masks[i], z));
      for (std::size_t k = 0; k < k_out; ++k) acc[k] += y[k];
    }
    for (std::size_t k = 0; k < k_out; ++k)
      v(i, k) = acc[k] / double(rows.size()) - base[k];
    for (int j = 0; j < p; ++j)
      if ((masks[i] >> j) & 1) design(i, j) = 1.0;
    const int s = std::popcount(masks[i]);
    if (config.weighting == CoalitionWeighting::shap_kernel) {
      weights(i) = shap_kernel_weight(p, s);
    } else {
      // On the binary coalition space the distance to the full instance is
      // the number of missing features.
      weights(i) =
          std::exp(-double(p - s) / (config.lime_sigma * config.lime_sigma));
    }
  });

  Explanation ex;
  ex.method = "kernel";
  ex.feature_names = background.schema.names;
  ex.prediction = fx;
  ex.base_value = base;
  ex.phi.assign(p, std::vector<double>(k_out, 0.0));
  for (std::size_t k = 0; k < k_out; ++k) {
    Eigen::VectorXd phi =
        solve_constrained_wls(design, v.col(k), weights, fx[k] - base[k]);
    for (int j = 0; j < p; ++j) ex.phi[j][k] = phi(j);
  }
  ex.diagnostics = {{"budget", m},
                    {"seed", config.seed},
                    {"weighting", config.weighting == CoalitionWeighting::shap_kernel
                                      ? "shap_kernel"
                                      : "lime_proximity"},
                    {"background_rows", rows.size()}};
  return ex;
}

}  // namespace qxai
