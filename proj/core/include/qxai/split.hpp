#pragma once

#include <utility>

#include "qxai/types.hpp"

namespace qxai {

/// Deterministic train/test partition. |train| = round(train_fraction * n).
/// With shuffle=false the train split is the leading rows in file order.
std::pair<Dataset, Dataset> split(const Dataset& dataset, const SplitConfig& config);

}  // namespace qxai
