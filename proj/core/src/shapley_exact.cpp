#include "qxai/shapley_exact.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace qxai {

std::vector<double> tabulate_game(const CoalitionGame& game) {
  const std::size_t count = std::size_t{1} << game.n_players;
  std::vector<double> vals(count);
  for (std::size_t mask = 0; mask < count; ++mask) vals[mask] = game.value(mask);
  return vals;
}

std::vector<double> exact_shapley(const CoalitionGame& game) {
  const int n = game.n_players;
  if (n < 1 || n > kExactSubsetCap)
    throw ConfigError("exact_shapley: player count over cap (" +
                      std::to_string(kExactSubsetCap) + ")");

  // |S|!(n-|S|-1)!/n! = 1 / (n * C(n-1,|S|)); the binomials are exact integers.
  std::vector<double> weight(n);
  double binom = 1.0;
  for (int s = 0; s < n; ++s) {
    weight[s] = 1.0 / (double(n) * binom);
    binom = binom * double(n - 1 - s) / double(s + 1);
  }

  auto vals = tabulate_game(game);
  std::vector<double> phi(n, 0.0);
  const CoalitionMask full = game.full_mask();
  for (CoalitionMask mask = 0; mask <= full; ++mask) {
    const double w = weight[std::popcount(mask)];
    CoalitionMask absent = full & ~mask;
    while (absent) {
      const int j = std::countr_zero(absent);
      absent &= absent - 1;
      phi[j] += w * (vals[mask | (CoalitionMask{1} << j)] - vals[mask]);
    }
  }
  return phi;
}

std::vector<double> exact_shapley_permutation(const CoalitionGame& game) {
  const int n = game.n_players;
  if (n < 1 || n > kExactPermutationCap)
    throw ConfigError("exact_shapley_permutation: player count over cap (" +
                      std::to_string(kExactPermutationCap) + ")");

  auto vals = tabulate_game(game);
  std::vector<double> phi(n, 0.0);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::size_t n_orders = 0;
  do {
    CoalitionMask prefix = 0;
    for (int j : order) {
      const CoalitionMask with = prefix | (CoalitionMask{1} << j);
      phi[j] += vals[with] - vals[prefix];
      prefix = with;
    }
    ++n_orders;
  } while (std::next_permutation(order.begin(), order.end()));
  for (auto& v : phi) v /= double(n_orders);
  return phi;
}

Explanation exact_shapley_explain(const Predictor& model, std::span<const double> instance,
                                  const Dataset& background,
                                  const MaskingGameConfig& config) {
  const std::size_t n = instance.size();
  const std::size_t k_out = model.n_outputs;
  Explanation ex;
  ex.method = "exact";
  ex.feature_names = background.schema.names;
  ex.prediction = model(instance);
  ex.base_value.resize(k_out);
  ex.phi.assign(n, std::vector<double>(k_out, 0.0));

  auto rows = background_sample(background, config);
  for (std::size_t k = 0; k < k_out; ++k) {
    auto game = make_masking_game(model, instance, background, k, config);
    auto phi_k = exact_shapley(game);
    double base = 0.0;
    for (const auto& z : rows) base += model(z)[k];
    ex.base_value[k] = base / double(rows.size());
    for (std::size_t j = 0; j < n; ++j) ex.phi[j][k] = phi_k[j];
  }
  ex.diagnostics = {{"background_rows", rows.size()}, {"seed", config.seed}};
  return ex;
}

}  // namespace qxai
