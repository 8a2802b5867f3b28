#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qxai/predictor.hpp"
#include "qxai/types.hpp"

namespace qxai {

/// Coalition as a bitmask over players 0..n-1 (bit set = player present).
using CoalitionMask = std::uint64_t;

/// Player count plus characteristic function with v(empty) = 0.
struct CoalitionGame {
  int n_players = 0;
  std::function<double(CoalitionMask)> value;

  CoalitionMask full_mask() const { return (CoalitionMask{1} << n_players) - 1; }
};

struct MaskingGameConfig {
  std::size_t background_cap = 128;  // uniform subsample above this, seeded
  std::uint64_t seed = 0;
};

/// output[i] = instance[i] if mask bit i is set, else background_row[i].
std::vector<double> compose(std::span<const double> instance, CoalitionMask mask,
                            std::span<const double> background_row);

/// Interventional marginalization:
///   v(S) = E_z[ f(compose(x, S, z))[k] ] - E_z[ f(z)[k] ]
/// so v(empty) = 0 by construction and v(full) = f(x)[k] - E[f][k].
CoalitionGame make_masking_game(const Predictor& model, std::span<const double> instance,
                                const Dataset& background, std::size_t output_index,
                                const MaskingGameConfig& config = {});

/// The background rows the masking game would marginalize over (cap + seed
/// applied); shared by estimators that need the same base value.
std::vector<std::vector<double>> background_sample(const Dataset& background,
                                                   const MaskingGameConfig& config);

CoalitionGame additive_game(const std::vector<double>& weights);
CoalitionGame unanimity_game(int n_players, CoalitionMask required);
CoalitionGame majority_game(int n_players);

}  // namespace qxai
