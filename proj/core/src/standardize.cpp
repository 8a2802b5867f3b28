#include "qxai/standardize.hpp"

#include <cmath>

namespace qxai {

std::vector<double> Standardization::apply(const std::vector<double>& row) const {
  std::vector<double> out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j)
    out[j] = constant[j] ? row[j] : (row[j] - mean[j]) / stddev[j];
  return out;
}

std::vector<double> Standardization::invert(const std::vector<double>& row) const {
  std::vector<double> out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j)
    out[j] = constant[j] ? row[j] : row[j] * stddev[j] + mean[j];
  return out;
}

std::pair<Dataset, Standardization> standardize(const Dataset& dataset) {
  const std::size_t n = dataset.n_rows();
  const std::size_t p = dataset.n_features();
  if (n == 0) throw ConfigError("standardize: empty dataset");

  Standardization s;
  s.mean.assign(p, 0.0);
  s.stddev.assign(p, 1.0);
  s.constant.assign(p, false);

  for (std::size_t j = 0; j < p; ++j) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += dataset.rows[i][j];
    m /= double(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double d = dataset.rows[i][j] - m;
      var += d * d;
    }
    var /= double(n);
    double sd = std::sqrt(var);
    if (sd == 0.0) {
      s.constant[j] = true;
    } else {
      s.mean[j] = m;
      s.stddev[j] = sd;
    }
  }
  return {apply_standardization(dataset, s), s};
}

Dataset apply_standardization(const Dataset& dataset, const Standardization& s) {
  Dataset out = dataset;
  for (auto& row : out.rows) row = s.apply(row);
  return out;
}

}  // namespace qxai
