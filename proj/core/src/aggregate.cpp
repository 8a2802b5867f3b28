#include "qxai/explain/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qxai::explain {

GlobalImportance global_importance(const std::vector<Explanation>& explanations,
                                   std::size_t output_index) {
  if (explanations.empty()) throw ConfigError("global_importance: no explanations");
  const auto& first = explanations.front();
  for (const auto& e : explanations)
    if (e.method != first.method || e.feature_names != first.feature_names)
      throw ConfigError("global_importance: heterogeneous explanations");

  const std::size_t n = first.n_features();
  GlobalImportance gi;
  gi.feature_names = first.feature_names;
  gi.method = first.method;
  gi.n_instances = explanations.size();
  gi.importance.assign(n, 0.0);
  for (const auto& e : explanations)
    for (std::size_t j = 0; j < n; ++j) gi.importance[j] += std::abs(e.phi[j][output_index]);
  for (auto& v : gi.importance) v /= double(explanations.size());

  gi.ranking.resize(n);
  std::iota(gi.ranking.begin(), gi.ranking.end(), std::size_t{0});
  std::stable_sort(gi.ranking.begin(), gi.ranking.end(), [&](std::size_t a, std::size_t b) {
    return gi.importance[a] > gi.importance[b];
  });
  return gi;
}

ForceDecomposition local_force(const Explanation& explanation, std::size_t output_index) {
  const std::size_t n = explanation.n_features();
  ForceDecomposition fd;
  fd.base_value = explanation.base_value[output_index];
  fd.prediction = explanation.prediction[output_index];
  fd.feature_names = explanation.feature_names;
  fd.method = explanation.method;
  fd.forces.resize(n);
  for (std::size_t j = 0; j < n; ++j) fd.forces[j] = explanation.phi[j][output_index];

  for (std::size_t j = 0; j < n; ++j) {
    if (fd.forces[j] > 0.0) fd.positive.push_back(j);
    else if (fd.forces[j] < 0.0) fd.negative.push_back(j);
  }
  auto by_mag = [&](std::size_t a, std::size_t b) {
    return std::abs(fd.forces[a]) > std::abs(fd.forces[b]);
  };
  std::stable_sort(fd.positive.begin(), fd.positive.end(), by_mag);
  std::stable_sort(fd.negative.begin(), fd.negative.end(), by_mag);
  return fd;
}

GroupExplanation group_explanations(
    const Dataset& subset, const std::string& group_key,
    const std::function<Explanation(std::span<const double>)>& estimator,
    std::size_t output_index, std::size_t limit) {
  if (subset.n_rows() == 0) throw ConfigError("group_explanations: empty group");

  // First `limit` members by original index.
  std::vector<std::size_t> order(subset.n_rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return subset.orig_index[a] < subset.orig_index[b];
  });
  order.resize(std::min(limit, order.size()));

  GroupExplanation ge;
  ge.group_key = group_key;
  ge.feature_names = subset.schema.names;
  const std::size_t n = subset.n_features();
  ge.mean_phi.assign(n, 0.0);
  ge.min_phi.assign(n, std::numeric_limits<double>::infinity());
  ge.max_phi.assign(n, -std::numeric_limits<double>::infinity());
  for (std::size_t i : order) {
    Explanation e = estimator(subset.rows[i]);
    ge.method = e.method;
    auto fd = local_force(e, output_index);
    for (std::size_t j = 0; j < n; ++j) {
      ge.mean_phi[j] += fd.forces[j];
      ge.min_phi[j] = std::min(ge.min_phi[j], fd.forces[j]);
      ge.max_phi[j] = std::max(ge.max_phi[j], fd.forces[j]);
    }
    ge.members.push_back(std::move(fd));
  }
  for (auto& v : ge.mean_phi) v /= double(ge.members.size());
  return ge;
}

Explanation merge_feature_groups(const Explanation& explanation,
                                 const std::map<std::string, std::string>& grouping) {
  const std::size_t n = explanation.n_features();
  const std::size_t k = explanation.n_outputs();

  std::vector<std::string> group_names;
  std::vector<std::size_t> feature_group(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto it = grouping.find(explanation.feature_names[j]);
    if (it == grouping.end())
      throw ConfigError("merge_feature_groups: feature '" + explanation.feature_names[j] +
                        "' missing from grouping");
    auto pos = std::find(group_names.begin(), group_names.end(), it->second);
    if (pos == group_names.end()) {
      feature_group[j] = group_names.size();
      group_names.push_back(it->second);
    } else {
      feature_group[j] = std::size_t(pos - group_names.begin());
    }
  }

  Explanation out;
  out.base_value = explanation.base_value;
  out.prediction = explanation.prediction;
  out.method = explanation.method;
  out.feature_names = group_names;
  out.phi.assign(group_names.size(), std::vector<double>(k, 0.0));
  std::vector<std::vector<double>> magnitude(group_names.size(),
                                             std::vector<double>(k, 0.0));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t o = 0; o < k; ++o) {
      out.phi[feature_group[j]][o] += explanation.phi[j][o];
      magnitude[feature_group[j]][o] += std::abs(explanation.phi[j][o]);
    }
  out.diagnostics = explanation.diagnostics;
  out.diagnostics["merged_from"] = explanation.feature_names;
  out.diagnostics["group_magnitude"] = magnitude;
  return out;
}

}  // namespace qxai::explain
