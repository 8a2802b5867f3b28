#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qxai {

// Exit-code mapping in the CLI: IoError -> 1, ConfigError -> 2, DivergenceError -> 3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class TargetKind { regression, multilabel };

struct TargetSpec {
  TargetKind kind = TargetKind::regression;
  std::vector<std::string> columns;  // one for regression, one per label otherwise
};

struct GroupSpec {
  std::optional<std::string> subject;
  std::optional<std::string> activity;
};

/// Declares how dataset columns bind to features, targets and group keys.
struct FeatureSchema {
  std::vector<std::string> names;
  TargetSpec target;
  GroupSpec groups;

  std::size_t n_features() const { return names.size(); }
  std::size_t n_outputs() const { return target.columns.size(); }

  // Throws ConfigError on duplicate/empty names or feature-target overlap.
  void validate() const;
};

struct GroupKey {
  std::string subject;
  std::string activity;
  bool operator==(const GroupKey&) const = default;
};

struct Dataset {
  FeatureSchema schema;
  std::vector<std::vector<double>> rows;     // row-major feature values
  std::vector<std::vector<double>> targets;  // per-row target vector
  std::vector<GroupKey> groups;              // empty when no group columns
  std::vector<std::size_t> orig_index;       // identity through split/standardize

  std::size_t n_rows() const { return rows.size(); }
  std::size_t n_features() const { return schema.n_features(); }
};

struct SplitConfig {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  bool shuffle = true;
};

}  // namespace qxai
