#include "qxai/random_game.hpp"

#include <random>

#include "qxai/rng.hpp"

namespace qxai {

CoalitionGame random_game(int n_players, std::uint64_t seed,
                          const RandomGameOptions& options) {
  if (n_players < 1 || n_players > 20)
    throw ConfigError("random_game: player count out of range");
  const std::size_t count = std::size_t{1} << n_players;
  std::vector<double> vals(count);
  std::mt19937_64 rng(splitmix64(seed ^ 0x7b2cf1e8a9d45063ull));
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto& v : vals) v = dist(rng);
  vals[0] = 0.0;

  if (options.twin_a >= 0 && options.twin_b >= 0) {
    const CoalitionMask ba = CoalitionMask{1} << options.twin_a;
    const CoalitionMask bb = CoalitionMask{1} << options.twin_b;
    for (std::size_t m = 0; m < count; ++m)
      if ((m & bb) && !(m & ba)) vals[m] = vals[(m & ~bb) | ba];
  }
  if (options.dummy_player >= 0) {
    const CoalitionMask bj = CoalitionMask{1} << options.dummy_player;
    for (std::size_t m = 0; m < count; ++m)
      if (m & bj) vals[m] = vals[m & ~bj];
  }

  CoalitionGame g;
  g.n_players = n_players;
  g.value = [vals = std::move(vals)](CoalitionMask mask) { return vals[mask]; };
  return g;
}

CoalitionGame sum_games(const CoalitionGame& a, const CoalitionGame& b) {
  if (a.n_players != b.n_players) throw ConfigError("sum_games: player count mismatch");
  CoalitionGame g;
  g.n_players = a.n_players;
  g.value = [va = a.value, vb = b.value](CoalitionMask mask) {
    return va(mask) + vb(mask);
  };
  return g;
}

}  // namespace qxai
