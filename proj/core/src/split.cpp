#include "qxai/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace qxai {

std::pair<Dataset, Dataset> split(const Dataset& dataset, const SplitConfig& config) {
  if (config.train_fraction <= 0.0 || config.train_fraction >= 1.0)
    throw ConfigError("split: train_fraction must be in (0,1)");
  const std::size_t n = dataset.n_rows();
  if (n < 2) throw ConfigError("split: need at least 2 rows");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (config.shuffle) {
    std::mt19937_64 rng(config.seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  auto n_train = static_cast<std::size_t>(std::llround(config.train_fraction * double(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

  auto take = [&](std::size_t begin, std::size_t end) {
    Dataset out;
    out.schema = dataset.schema;
    for (std::size_t i = begin; i < end; ++i) {
      std::size_t r = order[i];
      out.rows.push_back(dataset.rows[r]);
      out.targets.push_back(dataset.targets[r]);
      if (!dataset.groups.empty()) out.groups.push_back(dataset.groups[r]);
      out.orig_index.push_back(dataset.orig_index.empty() ? r : dataset.orig_index[r]);
    }
    return out;
  };
  return {take(0, n_train), take(n_train, n)};
}

}  // namespace qxai
