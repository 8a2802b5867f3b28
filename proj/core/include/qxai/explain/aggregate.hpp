#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qxai/explanation.hpp"
#include "qxai/types.hpp"

namespace qxai::explain {

/// Mean absolute attribution per feature over a set of instances, ranked
/// descending (ties broken by feature index).
struct GlobalImportance {
  std::vector<std::string> feature_names;
  std::vector<double> importance;     // I_i = mean |phi_i|
  std::vector<std::size_t> ranking;   // feature indices, descending importance
  std::string method;
  std::size_t n_instances = 0;
};

/// Per-instance signed forces around the base value. base + sum(forces) equals
/// the prediction within the source explanation's tolerance.
struct ForceDecomposition {
  double base_value = 0.0;
  double prediction = 0.0;
  std::vector<std::string> feature_names;
  std::vector<double> forces;                 // signed phi, all features
  std::vector<std::size_t> positive;          // indices, |force| descending
  std::vector<std::size_t> negative;
  std::string method;
};

struct GroupExplanation {
  std::string group_key;
  std::vector<ForceDecomposition> members;
  std::vector<std::string> feature_names;
  std::vector<double> mean_phi, min_phi, max_phi;
  std::string method;
};

GlobalImportance global_importance(const std::vector<Explanation>& explanations,
                                   std::size_t output_index = 0);

ForceDecomposition local_force(const Explanation& explanation,
                               std::size_t output_index = 0);

/// Explains up to `limit` instances of a dataset subset (first `limit` by
/// original index) with the supplied estimator and aggregates the forces.
GroupExplanation group_explanations(
    const Dataset& subset, const std::string& group_key,
    const std::function<Explanation(std::span<const double>)>& estimator,
    std::size_t output_index = 0, std::size_t limit = 200);

/// Signed sums of member attributions per group label (additivity), plus
/// sum of magnitudes in diagnostics. Grouping must cover every feature.
Explanation merge_feature_groups(const Explanation& explanation,
                                 const std::map<std::string, std::string>& grouping);

}  // namespace qxai::explain
