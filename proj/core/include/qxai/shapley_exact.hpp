#pragma once

#include <vector>

#include "qxai/explanation.hpp"
#include "qxai/game.hpp"

namespace qxai {

inline constexpr int kExactSubsetCap = 20;       // 2^n game evaluations
inline constexpr int kExactPermutationCap = 9;   // n! * n game evaluations

/// Ground-truth Shapley values by full subset enumeration:
///   phi_j = sum_{S not containing j} |S|!(n-|S|-1)!/n! * (v(S u {j}) - v(S))
std::vector<double> exact_shapley(const CoalitionGame& game);

/// Same values through the permutation average over all n! feature orders;
/// agrees with exact_shapley within 1e-9 componentwise.
std::vector<double> exact_shapley_permutation(const CoalitionGame& game);

/// Evaluates v over all 2^n coalitions (index = mask). Shared by both forms.
std::vector<double> tabulate_game(const CoalitionGame& game);

/// Exact Shapley attribution of a model prediction via the masking game,
/// one output at a time.
Explanation exact_shapley_explain(const Predictor& model, std::span<const double> instance,
                                  const Dataset& background,
                                  const MaskingGameConfig& config = {});

}  // namespace qxai
