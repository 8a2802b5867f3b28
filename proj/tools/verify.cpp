#include "verify.hpp"

#include <cmath>
#include <cstdio>

#include "qxai/kernel_shap.hpp"
#include "qxai/mc_shapley.hpp"
#include "qxai/nnet/grad_check.hpp"
#include "qxai/nnet/train.hpp"
#include "qxai/random_game.hpp"
#include "qxai/shapley_exact.hpp"
#include "qxai/synthetic.hpp"

namespace {

bool report(const char* name, double observed, double tolerance) {
  const bool ok = observed <= tolerance;
  std::printf("[%s] %-42s observed=%.3e tol=%.3e\n", ok ? "PASS" : "FAIL", name, observed,
              tolerance);
  return ok;
}

bool suite_axioms() {
  using namespace qxai;
  bool ok = true;
  double eff = 0.0, dummy = 0.0, twin = 0.0, add = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + trial % 5;
    auto g = random_game(n, 100 + trial);
    auto phi = exact_shapley(g);
    double sum = 0.0;
    for (double p : phi) sum += p;
    eff = std::max(eff, std::abs(sum - g.value(g.full_mask())));

    auto gd = random_game(n, 200 + trial, {.dummy_player = trial % n});
    dummy = std::max(dummy, std::abs(exact_shapley(gd)[trial % n]));

    auto gt = random_game(n, 300 + trial, {.twin_a = 0, .twin_b = n - 1});
    auto pt = exact_shapley(gt);
    twin = std::max(twin, std::abs(pt[0] - pt[n - 1]));

    auto ga = random_game(n, 400 + trial);
    auto gb = random_game(n, 500 + trial);
    auto pa = exact_shapley(ga);
    auto pb = exact_shapley(gb);
    auto ps = exact_shapley(sum_games(ga, gb));
    for (int j = 0; j < n; ++j) add = std::max(add, std::abs(ps[j] - pa[j] - pb[j]));
  }
  ok &= report("efficiency", eff, 1e-9);
  ok &= report("null player", dummy, 1e-12);
  ok &= report("symmetry (planted twins)", twin, 1e-9);
  ok &= report("additivity", add, 1e-9);
  return ok;
}

bool suite_oracle() {
  using namespace qxai;
  bool ok = true;
  auto data = make_planted_regression(64, 5, 11);
  auto model = linear_predictor({3.0, 0.0, -2.0, 0.5, 1.0});

  auto exact = exact_shapley_explain(model, data.rows[0], data);
  KernelConfig kc;
  kc.budget = 30;  // full enumeration at p=5
  auto kernel = kernel_shap_explain(model, data.rows[0], data, kc);
  double kerr = 0.0;
  for (std::size_t j = 0; j < 5; ++j)
    kerr = std::max(kerr, std::abs(kernel.phi[j][0] - exact.phi[j][0]));
  ok &= report("kernel vs exact (full budget)", kerr, 1e-6);

  McConfig mc;
  mc.samples_per_feature = 2000;
  mc.seed = 7;
  auto est = mc_shapley(model, data.rows[0], data, mc);
  auto se = est.diagnostics.at("stderr").get<std::vector<double>>();
  double mcdev = 0.0;
  for (std::size_t j = 0; j < 5; ++j) {
    double tol = std::max(3.0 * se[j], 1e-9);
    mcdev = std::max(mcdev, std::abs(est.phi[j][0] - exact.phi[j][0]) / tol);
  }
  ok &= report("mc vs exact (3 stderr units)", mcdev, 1.0);
  return ok;
}

bool suite_gradcheck() {
  using namespace qxai;
  using namespace qxai::nnet;
  bool ok = true;
  auto reg = make_planted_regression(8, 5, 3);

  Mlp mlp(MlpSpec{{5, 8, 6, 1}}, 42);
  ok &= report("mlp gradient (mae)", grad_check_mlp(mlp, reg, Loss::mae), 1e-4);

  AttentionNetSpec aspec;
  aspec.n_features = 5;
  aspec.embed_dim = 3;
  aspec.hidden = 4;
  AttentionNet att(aspec, 42);
  ok &= report("attention gradient (mae)", grad_check_attention(att, reg, Loss::mae), 1e-4);

  auto cls = make_separable_multilabel(8, 5, 2, 3);
  Mlp mlp2(MlpSpec{{5, 8, 2}, Activation::leaky_relu, 0.01, Activation::sigmoid}, 5);
  ok &= report("mlp gradient (bce)", grad_check_mlp(mlp2, cls, Loss::bce), 1e-4);
  return ok;
}

bool suite_convergence() {
  using namespace qxai;
  auto data = make_planted_regression(64, 6, 21);
  auto model = nonlinear_toy_predictor();
  bool ok = true;
  int improved = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto curve = mc_convergence_curve(model, data.rows[0], data, {100, 400, 1600}, seed);
    if (curve.back().second < curve.front().second) ++improved;
  }
  ok &= report("mc error shrinks 100 -> 1600 (of 5 seeds)", double(5 - improved), 1.0);
  return ok;
}

}  // namespace

bool run_verify_suite(const std::string& suite) {
  if (suite == "axioms") return suite_axioms();
  if (suite == "oracle") return suite_oracle();
  if (suite == "gradcheck") return suite_gradcheck();
  if (suite == "convergence") return suite_convergence();
  throw qxai::ConfigError("verify: unknown suite '" + suite + "'");
}
