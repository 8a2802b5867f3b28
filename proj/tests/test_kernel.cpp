#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "qxai/kernel_shap.hpp"
#include "qxai/shapley_exact.hpp"
#include "qxai/synthetic.hpp"

using namespace qxai;

TEST_CASE("shap kernel weight closed forms") {
  // (p-1) / (C(p,s) * s * (p-s))
  CHECK(shap_kernel_weight(4, 1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(shap_kernel_weight(4, 2) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(shap_kernel_weight(4, 3) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(shap_kernel_weight(6, 2) == doctest::Approx(5.0 / (15 * 2 * 4)).epsilon(1e-12));
  for (int s = 1; s < 7; ++s)
    CHECK(shap_kernel_weight(7, s) == doctest::Approx(shap_kernel_weight(7, 7 - s)));
}

TEST_CASE("lime proximity is a gaussian of euclidean distance") {
  std::vector<double> a{1, 2, 3}, b{1, 2, 3}, c{1, 2, 4};
  CHECK(lime_proximity(a, b, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lime_proximity(a, c, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(lime_proximity(a, c, 2.0) == doctest::Approx(std::exp(-0.25)).epsilon(1e-12));
}

TEST_CASE("coalition enumeration is full below the budget") {
  auto masks = enumerate_coalitions(5, 30, 0);
  std::set<CoalitionMask> unique(masks.begin(), masks.end());
  CHECK(unique.size() == 30);
  CHECK_FALSE(unique.contains(0));
  CHECK_FALSE(unique.contains(0b11111));
}

TEST_CASE("coalition enumeration fills size layers from the extremes inward") {
  // p=6: layers 1 and 5 hold 6 masks each; budget 12 is exactly those layers.
  auto masks = enumerate_coalitions(6, 12, 3);
  for (auto m : masks) {
    int s = std::popcount(m);
    CHECK((s == 1 || s == 5));
  }

  // Budget 15 adds 3 sampled masks from the size-2 layer.
  auto more = enumerate_coalitions(6, 15, 3);
  CHECK(more.size() == 15);
  std::set<CoalitionMask> unique(more.begin(), more.end());
  CHECK(unique.size() == 15);
  int mid = 0;
  for (auto m : more) mid += std::popcount(m) == 2;
  CHECK(mid == 3);
}

TEST_CASE("coalition sampling is seed-deterministic") {
  auto a = enumerate_coalitions(10, 100, 5);
  auto b = enumerate_coalitions(10, 100, 5);
  auto c = enumerate_coalitions(10, 100, 6);
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("constrained wls recovers an additive target exactly") {
  // y(S) = sum_{j in S} w_j with w = (1, -2, 3); total = 2.
  Eigen::MatrixXd design(6, 3);
  Eigen::VectorXd targets(6);
  Eigen::VectorXd weights = Eigen::VectorXd::Ones(6);
  std::vector<double> w{1.0, -2.0, 3.0};
  std::vector<int> masks{0b001, 0b010, 0b100, 0b011, 0b110, 0b101};
  for (int i = 0; i < 6; ++i) {
    double y = 0.0;
    for (int j = 0; j < 3; ++j) {
      design(i, j) = (masks[i] >> j) & 1;
      if ((masks[i] >> j) & 1) y += w[j];
    }
    targets(i) = y;
  }
  auto phi = solve_constrained_wls(design, targets, weights, 2.0);
  for (int j = 0; j < 3; ++j) CHECK(phi(j) == doctest::Approx(w[j]).epsilon(1e-9));
}

TEST_CASE("constrained wls honors the efficiency constraint even when overdetermined") {
  Eigen::MatrixXd design(4, 2);
  design << 1, 0, 0, 1, 1, 0, 0, 1;  // duplicated rows
  Eigen::VectorXd targets(4);
  targets << 1.0, 2.0, 1.2, 1.8;
  Eigen::VectorXd weights(4);
  weights << 1, 1, 2, 2;
  auto phi = solve_constrained_wls(design, targets, weights, 3.0);
  CHECK(phi(0) + phi(1) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("constrained wls rejects rank-deficient systems") {
  Eigen::MatrixXd design(2, 3);
  design << 1, 0, 0, 1, 0, 0;  // feature 2 never varies
  Eigen::VectorXd targets(2);
  targets << 1.0, 1.0;
  Eigen::VectorXd weights = Eigen::VectorXd::Ones(2);
  CHECK_THROWS_AS(solve_constrained_wls(design, targets, weights, 1.0), ConfigError);
}

TEST_CASE("kernel shap at full enumeration equals exact shapley") {
  auto data = make_planted_regression(40, 5, 17);
  auto model = linear_predictor({3.0, 0.0, -2.0, 0.5, 1.0});
  auto exact = exact_shapley_explain(model, data.rows[2], data);
  KernelConfig cfg;
  cfg.budget = 30;  // 2^5 - 2
  auto kernel = kernel_shap_explain(model, data.rows[2], data, cfg);
  for (int j = 0; j < 5; ++j)
    CHECK(std::abs(kernel.phi[j][0] - exact.phi[j][0]) < 1e-6);
  CHECK(kernel.efficiency_gap(0) < 1e-8);
  CHECK(kernel.method == "kernel");
}

TEST_CASE("kernel shap under a partial budget keeps efficiency and determinism") {
  auto data = make_planted_regression(60, 8, 19);
  auto model = nonlinear_toy_predictor();
  Dataset six = data;  // toy model takes 6 inputs; trim columns
  six.schema.names.resize(6);
  for (auto& r : six.rows) r.resize(6);

  KernelConfig cfg;
  cfg.budget = 40;  // below 2^8-2 after trim: 2^6-2 = 62
  cfg.seed = 4;
  auto a = kernel_shap_explain(model, six.rows[0], six, cfg);
  auto b = kernel_shap_explain(model, six.rows[0], six, cfg);
  CHECK(a.phi == b.phi);
  CHECK(a.efficiency_gap(0) < 1e-8);
  CHECK(a.diagnostics.at("budget").get<std::size_t>() == 40);

  cfg.seed = 5;
  auto c = kernel_shap_explain(model, six.rows[0], six, cfg);
  CHECK(a.phi != c.phi);
}

TEST_CASE("budget smaller than the feature count is rejected") {
  auto data = make_planted_regression(20, 5, 23);
  auto model = linear_predictor({1, 1, 1, 1, 1});
  KernelConfig cfg;
  cfg.budget = 3;
  CHECK_THROWS_AS(kernel_shap_explain(model, data.rows[0], data, cfg), ConfigError);
}

TEST_CASE("lime weighting mode still satisfies the sum constraint") {
  auto data = make_planted_regression(30, 5, 29);
  auto model = linear_predictor({1.0, -1.0, 2.0, 0.0, 0.5});
  KernelConfig cfg;
  cfg.budget = 30;
  cfg.weighting = CoalitionWeighting::lime_proximity;
  auto ex = kernel_shap_explain(model, data.rows[0], data, cfg);
  CHECK(ex.efficiency_gap(0) < 1e-8);
  CHECK(ex.diagnostics.at("weighting") == "lime_proximity");
}

TEST_CASE("symmetric features receive equal kernel attributions") {
  // Model is symmetric in features 0 and 1; make their observations identical.
  auto model = linear_predictor({2.0, 2.0, -1.0, 0.5});
  Dataset data = make_planted_regression(40, 4, 31);
  for (auto& r : data.rows) r[1] = r[0];
  KernelConfig cfg;
  cfg.budget = 14;
  auto ex = kernel_shap_explain(model, data.rows[0], data, cfg);
  CHECK(ex.phi[0][0] == doctest::Approx(ex.phi[1][0]).epsilon(1e-8));
}
