#include "qxai/game.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>

#include "qxai/rng.hpp"

namespace qxai {

std::vector<double> compose(std::span<const double> instance, CoalitionMask mask,
                            std::span<const double> background_row) {
  if (instance.size() != background_row.size())
    throw ConfigError("compose: length mismatch");
  std::vector<double> out(instance.size());
  for (std::size_t i = 0; i < instance.size(); ++i)
    out[i] = (mask >> i) & 1 ? instance[i] : background_row[i];
  return out;
}

std::vector<std::vector<double>> background_sample(const Dataset& background,
                                                   const MaskingGameConfig& config) {
  if (background.n_rows() == 0) throw ConfigError("masking game: empty background");
  if (background.n_rows() <= config.background_cap) return background.rows;
  std::vector<std::size_t> idx(background.n_rows());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(splitmix64(config.seed ^ 0xb6f5c3a1d2e4f809ull));
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(config.background_cap);
  std::sort(idx.begin(), idx.end());
  std::vector<std::vector<double>> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(background.rows[i]);
  return out;
}

CoalitionGame make_masking_game(const Predictor& model, std::span<const double> instance,
                                const Dataset& background, std::size_t output_index,
                                const MaskingGameConfig& config) {
  if (instance.size() != background.n_features())
    throw ConfigError("masking game: instance/background width mismatch");
  if (output_index >= model.n_outputs)
    throw ConfigError("masking game: output index out of range");

  auto rows = background_sample(background, config);
  double base = 0.0;
  for (const auto& z : rows) base += model(z)[output_index];
  base /= double(rows.size());

  std::vector<double> x(instance.begin(), instance.end());
  const int n = static_cast<int>(instance.size());
  CoalitionGame game;
  game.n_players = n;
  game.value = [model, x = std::move(x), rows = std::move(rows), base,
                output_index](CoalitionMask mask) {
    double acc = 0.0;
    for (const auto& z : rows) acc += model(compose(x, mask, z))[output_index];
    return acc / double(rows.size()) - base;
  };
  return game;
}

CoalitionGame additive_game(const std::vector<double>& weights) {
  if (weights.empty()) throw ConfigError("additive game: no players");
  CoalitionGame g;
  g.n_players = static_cast<int>(weights.size());
  g.value = [weights](CoalitionMask mask) {
    double v = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i)
      if ((mask >> i) & 1) v += weights[i];
    return v;
  };
  return g;
}

CoalitionGame unanimity_game(int n_players, CoalitionMask required) {
  if (n_players <= 0) throw ConfigError("unanimity game: no players");
  if (required == 0) throw ConfigError("unanimity game: empty required set");
  CoalitionGame g;
  g.n_players = n_players;
  g.value = [required](CoalitionMask mask) {
    return (mask & required) == required ? 1.0 : 0.0;
  };
  return g;
}

CoalitionGame majority_game(int n_players) {
  if (n_players <= 0) throw ConfigError("majority game: no players");
  CoalitionGame g;
  g.n_players = n_players;
  g.value = [n_players](CoalitionMask mask) {
    return 2 * std::popcount(mask) > n_players ? 1.0 : 0.0;
  };
  return g;
}

}  // namespace qxai
