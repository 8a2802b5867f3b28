#pragma once

#include <cstdint>

#include "qxai/game.hpp"

namespace qxai {

/// Tabulated game with values uniform in [-1,1] and v(empty) forced to 0.
/// Optionally plants a dummy player (marginal contribution always 0) or a
/// pair of twin players (interchangeable in every coalition).
struct RandomGameOptions {
  int dummy_player = -1;  // -1: none
  int twin_a = -1, twin_b = -1;
};

CoalitionGame random_game(int n_players, std::uint64_t seed,
                          const RandomGameOptions& options = {});

/// Pointwise sum of two games over the same player set.
CoalitionGame sum_games(const CoalitionGame& a, const CoalitionGame& b);

}  // namespace qxai
