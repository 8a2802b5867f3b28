#pragma once

#include <utility>
#include <vector>

#include "qxai/types.hpp"

namespace qxai {

/// Per-feature affine transform record; suffices to invert the standardization.
struct Standardization {
  std::vector<double> mean;
  std::vector<double> stddev;          // population std; 1.0 for constant columns
  std::vector<bool> constant;          // flagged, passed through unchanged

  std::vector<double> apply(const std::vector<double>& row) const;
  std::vector<double> invert(const std::vector<double>& row) const;
};

/// Centers and scales every non-constant feature to mean 0, std 1 on the
/// given data. Constant columns pass through with a warning flag.
std::pair<Dataset, Standardization> standardize(const Dataset& dataset);

/// Applies a previously fitted record (e.g. train stats to the test split).
Dataset apply_standardization(const Dataset& dataset, const Standardization& s);

}  // namespace qxai
