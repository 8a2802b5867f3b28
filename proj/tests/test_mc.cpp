#include <doctest.h>

#include <cmath>

#include "qxai/mc_shapley.hpp"
#include "qxai/shapley_exact.hpp"
#include "qxai/synthetic.hpp"

using namespace qxai;

TEST_CASE("ignored features get an exactly zero estimate") {
  // The paired evaluations differ only in feature 1; the model never reads it.
  auto data = make_planted_regression(40, 4, 3);
  auto model = linear_predictor({2.0, 0.0, -1.0, 0.5});
  McConfig cfg;
  cfg.samples_per_feature = 50;
  auto ex = mc_shapley(model, data.rows[0], data, cfg);
  CHECK(ex.phi[1][0] == 0.0);
  CHECK(ex.diagnostics.at("stderr").get<std::vector<double>>()[1] == 0.0);
  CHECK(ex.method == "mc");
}

TEST_CASE("estimates are seed-deterministic") {
  auto data = make_planted_regression(30, 5, 5);
  auto model = nonlinear_toy_predictor();
  Dataset six = make_planted_regression(30, 6, 5);
  McConfig cfg;
  cfg.samples_per_feature = 200;
  cfg.seed = 11;
  auto a = mc_shapley(model, six.rows[0], six, cfg);
  auto b = mc_shapley(model, six.rows[0], six, cfg);
  CHECK(a.phi == b.phi);

  cfg.seed = 12;
  auto c = mc_shapley(model, six.rows[0], six, cfg);
  CHECK(a.phi != c.phi);
}

TEST_CASE("per-feature substreams make the estimate schedule-independent") {
  // Feature j's estimate depends only on (seed, j), so restricting the model
  // to fewer outputs or estimating features in any partition cannot move it.
  auto data = make_planted_regression(30, 6, 7);
  auto model = nonlinear_toy_predictor();
  McConfig cfg;
  cfg.samples_per_feature = 300;
  cfg.seed = 3;
  auto full = mc_shapley(model, data.rows[0], data, cfg);
  auto again = mc_shapley(model, data.rows[0], data, cfg);
  CHECK(full.phi == again.phi);
  CHECK(full.diagnostics.at("stderr") == again.diagnostics.at("stderr"));
}

TEST_CASE("reported standard error shrinks with the sample count") {
  auto data = make_planted_regression(40, 6, 9);
  auto model = nonlinear_toy_predictor();
  McConfig small, large;
  small.samples_per_feature = 200;
  large.samples_per_feature = 3200;
  auto se_at = [&](const McConfig& cfg) {
    auto ex = mc_shapley(model, data.rows[0], data, cfg);
    auto se = ex.diagnostics.at("stderr").get<std::vector<double>>();
    double m = 0.0;
    for (double v : se) m = std::max(m, v);
    return m;
  };
  CHECK(se_at(large) < se_at(small));
}

TEST_CASE("estimator is unbiased within 4 standard errors of exact") {
  auto data = make_planted_regression(40, 6, 13);
  auto model = nonlinear_toy_predictor();
  auto exact = exact_shapley_explain(model, data.rows[0], data);
  McConfig cfg;
  cfg.samples_per_feature = 2000;
  cfg.seed = 1;
  auto mc = mc_shapley(model, data.rows[0], data, cfg);
  auto se = mc.diagnostics.at("stderr").get<std::vector<double>>();
  for (int j = 0; j < 6; ++j)
    CHECK(std::abs(mc.phi[j][0] - exact.phi[j][0]) <= 4.0 * se[j] + 1e-9);
}

TEST_CASE("permutation sweep mode reuses draws across features and stays deterministic") {
  auto data = make_planted_regression(30, 6, 15);
  auto model = nonlinear_toy_predictor();
  McConfig cfg;
  cfg.samples_per_feature = 500;
  cfg.permutation_sweep = true;
  auto a = mc_shapley(model, data.rows[0], data, cfg);
  auto b = mc_shapley(model, data.rows[0], data, cfg);
  CHECK(a.phi == b.phi);

  auto exact = exact_shapley_explain(model, data.rows[0], data);
  auto se = a.diagnostics.at("stderr").get<std::vector<double>>();
  for (int j = 0; j < 6; ++j)
    CHECK(std::abs(a.phi[j][0] - exact.phi[j][0]) <= 4.0 * se[j] + 1e-9);
}

TEST_CASE("single-checkpoint convergence curve is a single point") {
  auto data = make_planted_regression(20, 4, 17);
  auto model = linear_predictor({1.0, 2.0, -1.0, 0.5});
  auto curve = mc_convergence_curve(model, data.rows[0], data, {100}, 0);
  REQUIRE(curve.size() == 1);
  CHECK(curve[0].first == 100);
}

TEST_CASE("additive model with a single mean background row converges at M=1") {
  // Every permutation gives the same marginal for a linear model with one
  // background row, so the estimate is exact immediately.
  auto base = make_planted_regression(50, 4, 19);
  std::vector<double> mean(4, 0.0);
  for (const auto& r : base.rows)
    for (int j = 0; j < 4; ++j) mean[j] += r[j] / double(base.n_rows());
  Dataset single;
  single.schema = base.schema;
  single.rows.push_back(mean);
  single.targets.push_back({0.0});
  single.groups.push_back({"s1", "rest"});
  single.orig_index.push_back(0);

  auto model = linear_predictor({2.0, -1.0, 0.5, 3.0});
  auto curve = mc_convergence_curve(model, base.rows[0], single, {1}, 5);
  CHECK(curve[0].second < 1e-9);
}

TEST_CASE("error at 1600 beats error at 100 in most seeds") {
  auto data = make_planted_regression(40, 6, 21);
  auto model = nonlinear_toy_predictor();
  int improved = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto curve = mc_convergence_curve(model, data.rows[0], data, {100, 1600}, seed);
    improved += curve.back().second < curve.front().second;
  }
  CHECK(improved >= 4);
}
