// End-to-end acceptance gate. Each numbered check prints one [PASS]/[FAIL]
// line with the observed value and its tolerance; the process exits nonzero
// if any check fails. argv[1] is the path to the qxai CLI binary, used by the
// determinism checks.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qxai/explain/aggregate.hpp"
#include "qxai/kernel_shap.hpp"
#include "qxai/mc_shapley.hpp"
#include "qxai/nnet/grad_check.hpp"
#include "qxai/nnet/metrics.hpp"
#include "qxai/nnet/train.hpp"
#include "qxai/random_game.hpp"
#include "qxai/shapley_exact.hpp"
#include "qxai/split.hpp"
#include "qxai/synthetic.hpp"

using namespace qxai;
using namespace qxai::nnet;
using namespace qxai::explain;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

bool report(const char* name, double observed, double tol, double seconds = -1.0) {
  const bool ok = observed <= tol;
  if (!ok) ++g_failures;
  if (seconds >= 0.0)
    std::printf("[%s] %-58s observed=%.3e tol=%.3e (%.1fs)\n", ok ? "PASS" : "FAIL",
                name, observed, tol, seconds);
  else
    std::printf("[%s] %-58s observed=%.3e tol=%.3e\n", ok ? "PASS" : "FAIL", name,
                observed, tol);
  return ok;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- 1. axiom battery on 200 random games --------------------------------

void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  double eff = 0.0, dummy = 0.0, twin = 0.0, add = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + trial % 5;
    auto g = random_game(n, 1000 + trial);
    auto phi = exact_shapley(g);
    double sum = 0.0;
    for (double v : phi) sum += v;
    eff = std::max(eff, std::abs(sum - g.value(g.full_mask())));

    auto gd = random_game(n, 2000 + trial, {.dummy_player = trial % n});
    dummy = std::max(dummy, std::abs(exact_shapley(gd)[trial % n]));

    auto gt = random_game(n, 3000 + trial, {.twin_a = 0, .twin_b = n - 1});
    auto pt = exact_shapley(gt);
    twin = std::max(twin, std::abs(pt[0] - pt[n - 1]));

    auto ga = random_game(n, 4000 + trial);
    auto gb = random_game(n, 5000 + trial);
    auto pa = exact_shapley(ga);
    auto pb = exact_shapley(gb);
    auto ps = exact_shapley(sum_games(ga, gb));
    for (int j = 0; j < n; ++j) add = std::max(add, std::abs(ps[j] - pa[j] - pb[j]));
  }
  const double secs = seconds_since(t0);
  report("1a axioms: efficiency", eff, 1e-9);
  report("1b axioms: null player", dummy, 1e-12);
  report("1c axioms: symmetry", twin, 1e-9);
  report("1d axioms: additivity", add, 1e-9);
  report("1e axioms: runtime seconds", secs, 10.0);
}

// ---- 2. subset vs permutation enumeration --------------------------------

void criterion_2() {
  auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 5;  // n <= 6
    auto g = random_game(n, 7000 + trial);
    auto a = exact_shapley(g);
    auto b = exact_shapley_permutation(g);
    for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
  }
  for (auto& g : {additive_game({1, 2, 3, 4}), majority_game(5), unanimity_game(6, 0b101)}) {
    auto a = exact_shapley(g);
    auto b = exact_shapley_permutation(g);
    for (std::size_t j = 0; j < a.size(); ++j)
      worst = std::max(worst, std::abs(a[j] - b[j]));
  }
  report("2  dual-formula agreement (n<=6)", worst, 1e-9, seconds_since(t0));
}

// ---- 3. kernel at full budget vs exact on a trained MLP ------------------

void criterion_3() {
  auto t0 = std::chrono::steady_clock::now();
  auto data = make_planted_regression(400, 5, 42);
  auto [train, test] = split(data, {0.8, 42, true});
  Mlp mlp(MlpSpec{{5, 16, 16, 1}}, 42);
  TrainConfig cfg;
  cfg.epochs = 40;
  cfg.seed = 42;
  train_mlp(mlp, train, cfg);
  auto model = make_predictor(mlp);

  double worst = 0.0;
  MaskingGameConfig game_cfg{64, 0};
  KernelConfig kc;
  kc.budget = 30;  // 2^5 - 2: full enumeration
  kc.background_cap = 64;
  kc.seed = 0;
  for (std::size_t i = 0; i < 50 && i < test.n_rows(); ++i) {
    auto exact = exact_shapley_explain(model, test.rows[i], train, game_cfg);
    auto kernel = kernel_shap_explain(model, test.rows[i], train, kc);
    for (int j = 0; j < 5; ++j)
      worst = std::max(worst, std::abs(kernel.phi[j][0] - exact.phi[j][0]));
  }
  report("3  kernel==exact at full budget (50 instances)", worst, 1e-6,
         seconds_since(t0));
}

// ---- 4. linear closed form across all three estimators -------------------

void criterion_4() {
  auto data = make_planted_regression(64, 5, 11);
  std::vector<double> w{3.0, 0.0, -2.0, 0.5, 1.0};
  auto model = linear_predictor(w);
  std::vector<double> mean(5, 0.0);
  for (const auto& r : data.rows)
    for (int j = 0; j < 5; ++j) mean[j] += r[j] / double(data.n_rows());
  auto closed = [&](int j) { return w[j] * (data.rows[0][j] - mean[j]); };

  auto exact = exact_shapley_explain(model, data.rows[0], data);
  KernelConfig kc;
  kc.budget = 30;
  auto kernel = kernel_shap_explain(model, data.rows[0], data, kc);
  double eerr = 0.0, kerr = 0.0;
  for (int j = 0; j < 5; ++j) {
    eerr = std::max(eerr, std::abs(exact.phi[j][0] - closed(j)));
    kerr = std::max(kerr, std::abs(kernel.phi[j][0] - closed(j)));
  }
  report("4a linear closed form: exact", eerr, 1e-6);
  report("4b linear closed form: kernel", kerr, 1e-6);

  McConfig mc;
  mc.samples_per_feature = 2000;
  mc.seed = 7;
  auto est = mc_shapley(model, data.rows[0], data, mc);
  auto se = est.diagnostics.at("stderr").get<std::vector<double>>();
  double units = 0.0;
  for (int j = 0; j < 5; ++j)
    units = std::max(units, std::abs(est.phi[j][0] - closed(j)) /
                                std::max(3.0 * se[j], 1e-9));
  report("4c linear closed form: mc within 3 stderr", units, 1.0);
}

// ---- 5. MC convergence rate on the nonlinear toy -------------------------

void criterion_5() {
  auto t0 = std::chrono::steady_clock::now();
  auto model = nonlinear_toy_predictor();
  double worst_err = 0.0, slope_sum = 0.0;
  const std::vector<std::size_t> ms{250, 1000, 4000};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto data = make_planted_regression(64, 6, 100 + seed);
    double lo = 1e300, hi = -1e300;
    for (const auto& r : data.rows) {
      double y = model(r)[0];
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
    auto curve = mc_convergence_curve(model, data.rows[0], data, ms, seed);
    worst_err = std::max(worst_err, curve.back().second / (hi - lo));

    // least-squares slope of log(err) on log(M)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [m, err] : curve) {
      double x = std::log(double(m)), y = std::log(std::max(err, 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double n = double(curve.size());
    slope_sum += (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  const double slope = slope_sum / 10.0;
  report("5a mc error at M=4000 over output range", worst_err, 0.05);
  report("5b mc slope in [-0.75,-0.25]: |slope+0.5|", std::abs(slope + 0.5), 0.25,
         seconds_since(t0));
}

// ---- 6. gradient checks --------------------------------------------------

void criterion_6() {
  auto reg = make_planted_regression(8, 5, 3);
  auto cls = make_separable_multilabel(8, 5, 2, 3);
  double worst = 0.0;

  Mlp m1(MlpSpec{{5, 8, 6, 1}}, 1);
  worst = std::max(worst, grad_check_mlp(m1, reg, Loss::mae));
  Mlp m2(MlpSpec{{5, 8, 2}, Activation::leaky_relu, 0.01, Activation::sigmoid}, 2);
  worst = std::max(worst, grad_check_mlp(m2, cls, Loss::bce));

  AttentionNetSpec aspec;
  aspec.n_features = 5;
  aspec.embed_dim = 3;
  aspec.hidden = 4;
  AttentionNet a1(aspec, 3);
  worst = std::max(worst, grad_check_attention(a1, reg, Loss::mae));
  aspec.cell = RecurrentCell::elman;
  AttentionNet a2(aspec, 4);
  worst = std::max(worst, grad_check_attention(a2, reg, Loss::mae));

  report("6  gradient checks (mlp + attention, mae + bce)", worst, 1e-4);
}

// ---- 7. context-vector identity ------------------------------------------

void criterion_7() {
  std::vector<double> alpha{0.2, 0.4, 0.6, 0.1};
  std::vector<double> x{1.25, -3.5, 0.75, 2.0};
  std::vector<std::vector<double>> reps{{x[0]}, {x[1]}, {x[2]}, {x[3]}};
  auto c = context_vector(alpha, reps);
  double manual = 0.0;
  for (int j = 0; j < 4; ++j) manual += alpha[j] * x[j];
  report("7  context vector weighted-sum identity", std::abs(c[0] - manual), 0.0);
}

// ---- 8. planted-relevance agreement across all three channels ------------

void criterion_8() {
  auto t0 = std::chrono::steady_clock::now();
  int agreeing = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto data = make_planted_regression(600, 6, 1000 + seed);
    auto [train, test] = split(data, {0.8, seed, true});

    AttentionNetSpec spec;
    spec.n_features = 6;
    AttentionNet net(spec, seed);
    TrainConfig cfg;
    cfg.epochs = 100;
    cfg.batch_size = 64;
    cfg.seed = seed;
    cfg.adam.lr = 0.01;
    train_attention_net(net, train, cfg);

    auto top2 = [](const std::vector<std::size_t>& rank) {
      return (rank[0] == 0 || rank[0] == 2) && (rank[1] == 0 || rank[1] == 2);
    };

    // channel 1: mean attention weight over the test split
    auto summary = extract_attention(net, test);
    std::vector<std::size_t> arank{0, 1, 2, 3, 4, 5};
    std::stable_sort(arank.begin(), arank.end(), [&](std::size_t a, std::size_t b) {
      return summary.mean_weights[a] > summary.mean_weights[b];
    });

    // channels 2 and 3: exact and kernel Shapley global importance
    Dataset bg;
    bg.schema = train.schema;
    for (std::size_t i = 0; i < 32; ++i) {
      bg.rows.push_back(train.rows[i]);
      bg.targets.push_back(train.targets[i]);
      bg.orig_index.push_back(i);
    }
    auto model = make_predictor(net);
    std::vector<Explanation> exact_set, kernel_set;
    KernelConfig kc;
    kc.budget = 62;  // 2^6 - 2
    kc.seed = seed;
    for (std::size_t i = 0; i < 30; ++i) {
      exact_set.push_back(exact_shapley_explain(model, test.rows[i], bg));
      kernel_set.push_back(kernel_shap_explain(model, test.rows[i], bg, kc));
    }
    auto egi = global_importance(exact_set, 0);
    auto kgi = global_importance(kernel_set, 0);

    agreeing += top2(arank) && top2(egi.ranking) && top2(kgi.ranking);
  }
  report("8  planted relevance: disagreeing seeds (of 10)", double(10 - agreeing), 1.0,
         seconds_since(t0));
}

// ---- 9. training sanity --------------------------------------------------

void criterion_9() {
  auto t0 = std::chrono::steady_clock::now();
  auto data = make_planted_regression(600, 6, 7);
  auto [train, test] = split(data, {0.8, 7, true});
  Mlp mlp(MlpSpec{{6, 32, 32, 1}}, 7);
  TrainConfig cfg;  // Adam defaults, epochs 100, batch 64
  cfg.seed = 7;
  train_mlp(mlp, train, cfg);

  double mean_y = 0.0;
  for (const auto& t : train.targets) mean_y += t[0] / double(train.n_rows());
  std::vector<double> pred, actual, baseline;
  for (std::size_t i = 0; i < test.n_rows(); ++i) {
    pred.push_back(mlp.forward(test.rows[i])[0]);
    baseline.push_back(mean_y);
    actual.push_back(test.targets[i][0]);
  }
  const double model_mae = regression_metrics(pred, actual).mae;
  const double base_mae = regression_metrics(baseline, actual).mae;
  report("9a regression: mae ratio (need >= 5x): 5*mae/baseline", 5.0 * model_mae / base_mae,
         1.0);

  auto cls = make_separable_multilabel(600, 8, 3, 5);
  auto [ctrain, ctest] = split(cls, {0.8, 5, true});
  Mlp cm(MlpSpec{{8, 32, 3}, Activation::leaky_relu, 0.01, Activation::sigmoid}, 5);
  TrainConfig ccfg;
  ccfg.loss = Loss::bce;
  ccfg.seed = 5;
  train_mlp(cm, ctrain, ccfg);
  std::vector<std::vector<double>> probs, truth;
  for (std::size_t i = 0; i < ctest.n_rows(); ++i) {
    probs.push_back(cm.forward(ctest.rows[i]));
    truth.push_back(ctest.targets[i]);
  }
  auto metrics = classification_metrics(probs, truth);
  report("9b classification: 1 - macro F1 (need F1 >= 0.95)", 1.0 - metrics.f1, 0.05);

  auto perfect = classification_metrics(truth, truth);
  const double off = std::max({std::abs(perfect.precision - 1.0),
                               std::abs(perfect.recall - 1.0), std::abs(perfect.f1 - 1.0),
                               std::abs(perfect.balanced_accuracy - 1.0)});
  report("9c metrics on perfect predictions == (1,1,1,1)", off, 0.0, seconds_since(t0));
}

// ---- 10. determinism: CLI byte-identity and worker independence ----------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool same_dir_bytes(const fs::path& a, const fs::path& b) {
  std::vector<std::string> names_a, names_b;
  for (const auto& e : fs::directory_iterator(a)) names_a.push_back(e.path().filename());
  for (const auto& e : fs::directory_iterator(b)) names_b.push_back(e.path().filename());
  std::sort(names_a.begin(), names_a.end());
  std::sort(names_b.begin(), names_b.end());
  if (names_a != names_b) return false;
  for (const auto& n : names_a)
    if (slurp(a / n) != slurp(b / n)) return false;
  return true;
}

int run(const std::string& cmd) { return std::system(cmd.c_str()); }

void criterion_10(const std::string& cli) {
  auto t0 = std::chrono::steady_clock::now();
  auto dir = fs::temp_directory_path() / "qxai_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string d = dir.string();
  const std::string base = "cd " + d + " && " + cli + " ";

  int rc = 0;
  rc |= run(base + "gen-data --task regression --rows 200 --features 6 --seed 3 --out-dir g1 > /dev/null");
  rc |= run(base + "gen-data --task regression --rows 200 --features 6 --seed 3 --out-dir g2 > /dev/null");
  bool ok = rc == 0 && same_dir_bytes(dir / "g1", dir / "g2");

  const std::string train_flags =
      "train --data g1/data.csv --schema g1/schema.json --task regression "
      "--model attention --seed 5 --epochs 5 ";
  rc = run(base + train_flags + "--out ck1.json > /dev/null");
  rc |= run(base + train_flags + "--out ck2.json > /dev/null");
  ok = ok && rc == 0 && slurp(dir / "ck1.json") == slurp(dir / "ck2.json");

  const std::string explain_flags =
      "explain --checkpoint ck1.json --data g1/data.csv --schema g1/schema.json "
      "--instance 0 --seed 2 --budget 40 --samples 400 ";
  for (const std::string method : {"exact", "kernel", "mc", "attention"}) {
    rc = run(base + explain_flags + "--method " + method + " --out e1 > /dev/null");
    rc |= run(base + explain_flags + "--method " + method + " --out e2 > /dev/null");
    ok = ok && rc == 0 && same_dir_bytes(dir / "e1", dir / "e2");
    fs::remove_all(dir / "e1");
    fs::remove_all(dir / "e2");
  }
  report("10a cli reruns are byte-identical (all commands)", ok ? 0.0 : 1.0, 0.0);

  // Worker-count independence, through the CLI env hint and the library knob.
  rc = run("cd " + d + " && QXAI_THREADS=1 " + cli + " " + explain_flags +
           "--method mc --out w1 > /dev/null");
  rc |= run("cd " + d + " && QXAI_THREADS=4 " + cli + " " + explain_flags +
            "--method mc --out w4 > /dev/null");
  bool wok = rc == 0 && same_dir_bytes(dir / "w1", dir / "w4");

  auto data = make_planted_regression(60, 6, 9);
  auto model = nonlinear_toy_predictor();
  std::vector<std::vector<double>> ref_mc, ref_sweep, ref_kernel;
  for (std::size_t workers : {std::size_t{1}, std::size_t{3}, std::size_t{8}}) {
    McConfig mc;
    mc.samples_per_feature = 500;
    mc.seed = 4;
    mc.workers = workers;
    auto est = mc_shapley(model, data.rows[0], data, mc);
    McConfig sweep = mc;
    sweep.permutation_sweep = true;
    auto swept = mc_shapley(model, data.rows[0], data, sweep);
    KernelConfig kc;
    kc.budget = 40;
    kc.seed = 4;
    kc.workers = workers;
    auto ker = kernel_shap_explain(model, data.rows[0], data, kc);
    if (workers == 1) {
      ref_mc = est.phi;
      ref_sweep = swept.phi;
      ref_kernel = ker.phi;
    } else {
      wok = wok && est.phi == ref_mc && swept.phi == ref_sweep && ker.phi == ref_kernel;
    }
  }
  report("10b worker-count independence (1 vs 3 vs 8 threads)", wok ? 0.0 : 1.0, 0.0,
         seconds_since(t0));
}

// ---- 11. force reconstruction and merge conservation ---------------------

void criterion_11() {
  auto data = make_planted_regression(80, 6, 13);
  auto [train, test] = split(data, {0.8, 13, true});
  Mlp mlp(MlpSpec{{6, 16, 1}}, 13);
  TrainConfig cfg;
  cfg.epochs = 20;
  cfg.seed = 13;
  train_mlp(mlp, train, cfg);
  auto model = make_predictor(mlp);

  double worst = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    auto exact = exact_shapley_explain(model, test.rows[i], train);
    auto fd = local_force(exact);
    double sum = fd.base_value;
    for (double f : fd.forces) sum += f;
    worst = std::max(worst, std::abs(sum - fd.prediction) / 1e-8);

    KernelConfig kc;
    kc.budget = 40;
    kc.seed = i;
    auto kernel = kernel_shap_explain(model, test.rows[i], train, kc);
    auto kfd = local_force(kernel);
    sum = kfd.base_value;
    for (double f : kfd.forces) sum += f;
    worst = std::max(worst, std::abs(sum - kfd.prediction) / 1e-8);

    McConfig mcc;
    mcc.samples_per_feature = 1000;
    mcc.seed = i;
    auto mc = mc_shapley(model, test.rows[i], train, mcc);
    auto mfd = local_force(mc);
    sum = mfd.base_value;
    for (double f : mfd.forces) sum += f;
    auto se = mc.diagnostics.at("stderr").get<std::vector<double>>();
    double se2 = 0.0;
    for (double s : se) se2 += s * s;
    const double mc_tol = 4.0 * std::sqrt(se2) + 1e-9;  // statistical tolerance
    worst = std::max(worst, std::abs(sum - mfd.prediction) / mc_tol);
  }
  report("11a force reconstruction in tolerance units (all methods)", worst, 1.0);

  auto exact = exact_shapley_explain(model, test.rows[0], train);
  std::map<std::string, std::string> grouping;
  for (std::size_t j = 0; j < 6; ++j)
    grouping[exact.feature_names[j]] = j < 3 ? "left" : "right";
  auto merged = merge_feature_groups(exact, grouping);
  double before = 0.0, after = 0.0;
  for (const auto& r : exact.phi) before += r[0];
  for (const auto& r : merged.phi) after += r[0];
  report("11b merge conserves total attribution", std::abs(after - before), 1e-12);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-qxai-cli>\n", argv[0]);
    return 2;
  }
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10(fs::absolute(argv[1]).string());
  criterion_11();
  if (g_failures) {
    std::printf("%d check(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance checks passed\n");
  return 0;
}
