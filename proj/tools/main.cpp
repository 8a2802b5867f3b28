#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <numeric>
#include <string>

#include <CLI11.hpp>

#include "qxai/csv.hpp"
#include "qxai/explain/report.hpp"
#include "qxai/kernel_shap.hpp"
#include "qxai/mc_shapley.hpp"
#include "qxai/nnet/checkpoint.hpp"
#include "qxai/nnet/metrics.hpp"
#include "qxai/nnet/train.hpp"
#include "qxai/shapley_exact.hpp"
#include "qxai/split.hpp"
#include "qxai/synthetic.hpp"
#include "verify.hpp"

namespace fs = std::filesystem;
using namespace qxai;
using namespace qxai::nnet;
using namespace qxai::explain;

namespace {

struct GenArgs {
  std::string task = "regression";
  std::size_t rows = 1000, features = 6, labels = 3;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

int cmd_gen_data(const GenArgs& a) {
  Dataset ds = a.task == "regression"
                   ? make_planted_regression(a.rows, a.features, a.seed)
                   : make_separable_multilabel(a.rows, a.features, a.labels, a.seed);
  fs::create_directories(a.out_dir);
  save_csv(ds, fs::path(a.out_dir) / "data.csv");
  save_schema(ds.schema, fs::path(a.out_dir) / "schema.json");
  std::printf("wrote %s and %s (%zu rows, %zu features)\n",
              (fs::path(a.out_dir) / "data.csv").c_str(),
              (fs::path(a.out_dir) / "schema.json").c_str(), ds.n_rows(),
              ds.n_features());
  return 0;
}

struct TrainArgs {
  std::string data, schema, task = "regression", model = "mlp", out = "checkpoint.json";
  double split_fraction = 0.8;
  std::uint64_t seed = 0;
  std::size_t epochs = 100, batch = 64;
};

int cmd_train(const TrainArgs& a) {
  FeatureSchema schema = load_schema(a.schema);
  const bool classification = a.task == "classification";
  if (classification && schema.target.kind != TargetKind::multilabel)
    throw ConfigError("train: --task classification but schema declares a regression target");
  if (!classification && schema.target.kind != TargetKind::regression)
    throw ConfigError("train: --task regression but schema declares a multilabel target");

  Dataset ds = load_csv(a.data, schema);
  auto [train_set, test_set] = split(ds, {a.split_fraction, a.seed, true});
  const std::size_t p = ds.n_features();
  const std::size_t k = schema.n_outputs();

  TrainConfig cfg;
  cfg.epochs = a.epochs;
  cfg.batch_size = a.batch;
  cfg.loss = classification ? Loss::bce : Loss::mae;
  cfg.seed = a.seed;

  Checkpoint ckpt{Mlp{MlpSpec{{1, 1, 1}}, std::uint64_t{0}}, cfg};
  if (a.model == "mlp") {
    MlpSpec spec;
    spec.layer_sizes = {p, 32, 32, 32, k};
    spec.hidden = classification ? Activation::leaky_relu : Activation::relu;
    spec.output = classification ? Activation::sigmoid : Activation::identity;
    Mlp model(spec, a.seed);
    train_mlp(model, train_set, cfg);
    ckpt.model = std::move(model);
  } else if (a.model == "attention") {
    AttentionNetSpec spec;
    spec.n_features = p;
    spec.n_outputs = k;
    spec.output = classification ? Activation::sigmoid : Activation::identity;
    AttentionNet model(spec, a.seed);
    train_attention_net(model, train_set, cfg);
    ckpt.model = std::move(model);
  } else {
    throw ConfigError("train: unknown model '" + a.model + "'");
  }

  auto predictor = ckpt.predictor();
  if (classification) {
    std::vector<std::vector<double>> probs;
    for (const auto& row : test_set.rows) probs.push_back(predictor(row));
    auto m = classification_metrics(probs, test_set.targets);
    std::printf("precision %.6f\nrecall %.6f\nf1 %.6f\nbalanced_accuracy %.6f\n",
                m.precision, m.recall, m.f1, m.balanced_accuracy);
  } else {
    std::vector<double> pred, actual;
    for (std::size_t i = 0; i < test_set.n_rows(); ++i) {
      pred.push_back(predictor(test_set.rows[i])[0]);
      actual.push_back(test_set.targets[i][0]);
    }
    auto m = regression_metrics(pred, actual);
    std::printf("MAE %.6f\nMSE %.6f\n", m.mae, m.mse);
  }
  save_checkpoint(ckpt, a.out);
  std::printf("wrote %s\n", a.out.c_str());
  return 0;
}

struct ExplainArgs {
  std::string checkpoint, data, schema, method = "kernel", out = "reports",
              format = "json", group;
  int instance = -1;
  std::size_t budget = 2048, samples = 2000, background = 128;
  std::uint64_t seed = 0;
};

// Thread-count hint; results are identical for any value.
std::size_t env_workers() {
  const char* v = std::getenv("QXAI_THREADS");
  if (!v) return 1;
  char* end = nullptr;
  long n = std::strtol(v, &end, 10);
  if (end == v || *end != '\0' || n < 1)
    throw ConfigError("QXAI_THREADS must be a positive integer");
  return std::size_t(n);
}

GlobalImportance importance_from(const std::vector<Explanation>& explanations) {
  return global_importance(explanations, 0);
}

int cmd_explain(const ExplainArgs& a) {
  Checkpoint ckpt = load_checkpoint(a.checkpoint);
  FeatureSchema schema = load_schema(a.schema);
  Dataset ds = load_csv(a.data, schema);
  if (ds.n_features() != ckpt.n_inputs())
    throw ConfigError("explain: dataset width does not match checkpoint");
  Predictor model = ckpt.predictor();

  if (a.method == "attention" && !ckpt.is_attention())
    throw ConfigError("explain: --method attention requires an attention checkpoint");
  if (a.method == "exact" && ds.n_features() > std::size_t(kExactSubsetCap))
    throw ConfigError("explain: feature count over the exact cap (" +
                      std::to_string(kExactSubsetCap) + "); use --method kernel or mc");

  auto estimator = [&](std::span<const double> x) -> Explanation {
    if (a.method == "exact") {
      return exact_shapley_explain(model, x, ds, {a.background, a.seed});
    }
    if (a.method == "kernel") {
      KernelConfig kc;
      kc.budget = a.budget;
      kc.seed = a.seed;
      kc.background_cap = a.background;
      kc.workers = env_workers();
      return kernel_shap_explain(model, x, ds, kc);
    }
    if (a.method == "mc") {
      McConfig mc;
      mc.samples_per_feature = a.samples;
      mc.seed = a.seed;
      mc.workers = env_workers();
      return mc_shapley(model, x, ds, mc);
    }
    if (a.method == "attention") {
      const auto& net = std::get<AttentionNet>(ckpt.model);
      AttentionTrace t;
      auto y = net.forward(x, &t);
      Explanation ex;
      ex.method = "attention";
      ex.feature_names = schema.names;
      ex.base_value = {0.0};
      ex.prediction = {y[0]};
      ex.phi.assign(t.scores.size(), std::vector<double>(1, 0.0));
      for (std::size_t j = 0; j < t.scores.size(); ++j) ex.phi[j][0] = t.scores[j];
      ex.diagnostics = {{"weights", t.weights}};
      return ex;
    }
    throw ConfigError("explain: unknown method '" + a.method + "'");
  };

  fs::create_directories(a.out);
  const ReportFormat fmt = parse_format(a.format);
  const std::string ext = "." + a.format;
  const fs::path out_dir(a.out);

  if (!a.group.empty()) {
    const auto eq = a.group.find('=');
    if (eq == std::string::npos)
      throw ConfigError("explain: --group expects subject=VALUE or activity=VALUE");
    const std::string key = a.group.substr(0, eq), value = a.group.substr(eq + 1);
    if (key != "subject" && key != "activity")
      throw ConfigError("explain: unknown group key '" + key + "'");
    if (ds.groups.empty()) throw ConfigError("explain: dataset has no group columns");

    Dataset subset;
    subset.schema = ds.schema;
    for (std::size_t i = 0; i < ds.n_rows(); ++i) {
      const std::string& g = key == "subject" ? ds.groups[i].subject : ds.groups[i].activity;
      if (g == value) {
        subset.rows.push_back(ds.rows[i]);
        subset.targets.push_back(ds.targets[i]);
        subset.groups.push_back(ds.groups[i]);
        subset.orig_index.push_back(ds.orig_index[i]);
      }
    }
    if (subset.n_rows() == 0) throw ConfigError("explain: empty group '" + a.group + "'");

    auto ge = group_explanations(subset, a.group, estimator, 0, 200);
    write_report(ge, fmt, out_dir / ("group" + ext));

    // Global importance over the same member set, without re-estimating.
    std::vector<std::size_t> order(subset.n_rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return subset.orig_index[x] < subset.orig_index[y];
    });
    GlobalImportance gi;
    gi.feature_names = ge.feature_names;
    gi.method = ge.method;
    gi.n_instances = ge.members.size();
    gi.importance.assign(ge.feature_names.size(), 0.0);
    for (const auto& m : ge.members)
      for (std::size_t j = 0; j < m.forces.size(); ++j)
        gi.importance[j] += std::abs(m.forces[j]);
    for (auto& v : gi.importance) v /= double(ge.members.size());
    gi.ranking.resize(gi.importance.size());
    std::iota(gi.ranking.begin(), gi.ranking.end(), std::size_t{0});
    std::stable_sort(gi.ranking.begin(), gi.ranking.end(), [&](std::size_t x, std::size_t y) {
      return gi.importance[x] > gi.importance[y];
    });
    write_report(gi, fmt, out_dir / ("global_importance" + ext));
    std::printf("wrote %s and %s\n", (out_dir / ("group" + ext)).c_str(),
                (out_dir / ("global_importance" + ext)).c_str());
  } else {
    const std::size_t idx = a.instance < 0 ? 0 : std::size_t(a.instance);
    if (idx >= ds.n_rows()) throw ConfigError("explain: --instance out of range");
    Explanation ex = estimator(ds.rows[idx]);
    write_report(local_force(ex, 0), fmt, out_dir / ("local_force" + ext));
    write_report(importance_from({ex}), fmt, out_dir / ("global_importance" + ext));
    std::printf("wrote %s and %s\n", (out_dir / ("local_force" + ext)).c_str(),
                (out_dir / ("global_importance" + ext)).c_str());
    if (a.method == "attention") {
      const auto& net = std::get<AttentionNet>(ckpt.model);
      auto summary = extract_attention(net, ds);
      AttentionGlobal ag{schema.names, summary.mean_scores, summary.mean_weights,
                         ds.n_rows()};
      write_report(ag, fmt, out_dir / ("attention_summary" + ext));
      std::printf("wrote %s\n", (out_dir / ("attention_summary" + ext)).c_str());
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feature-attribution toolkit: Shapley estimators and attention models"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* sc_gen = app.add_subcommand("gen-data", "Generate a bundled synthetic dataset");
  sc_gen->add_option("--task", gen.task)->check(CLI::IsMember({"regression", "classification"}));
  sc_gen->add_option("--rows", gen.rows);
  sc_gen->add_option("--features", gen.features);
  sc_gen->add_option("--labels", gen.labels);
  sc_gen->add_option("--seed", gen.seed);
  sc_gen->add_option("--out-dir", gen.out_dir);

  TrainArgs tr;
  auto* sc_train = app.add_subcommand("train", "Train a model and write a checkpoint");
  sc_train->add_option("--data", tr.data)->required();
  sc_train->add_option("--schema", tr.schema)->required();
  sc_train->add_option("--task", tr.task)
      ->check(CLI::IsMember({"regression", "classification"}));
  sc_train->add_option("--model", tr.model)->check(CLI::IsMember({"mlp", "attention"}));
  sc_train->add_option("--split", tr.split_fraction);
  sc_train->add_option("--seed", tr.seed);
  sc_train->add_option("--out", tr.out);
  sc_train->add_option("--epochs", tr.epochs);
  sc_train->add_option("--batch", tr.batch);

  ExplainArgs exp;
  auto* sc_explain = app.add_subcommand("explain", "Explain predictions and write reports");
  sc_explain->add_option("--checkpoint", exp.checkpoint)->required();
  sc_explain->add_option("--data", exp.data)->required();
  sc_explain->add_option("--schema", exp.schema)->required();
  sc_explain->add_option("--method", exp.method)
      ->check(CLI::IsMember({"exact", "kernel", "mc", "attention"}));
  sc_explain->add_option("--instance", exp.instance);
  sc_explain->add_option("--group", exp.group);
  sc_explain->add_option("--budget", exp.budget);
  sc_explain->add_option("--samples", exp.samples);
  sc_explain->add_option("--background", exp.background);
  sc_explain->add_option("--seed", exp.seed);
  sc_explain->add_option("--out", exp.out);
  sc_explain->add_option("--format", exp.format)
      ->check(CLI::IsMember({"json", "svg", "html"}));

  std::string suite;
  auto* sc_verify = app.add_subcommand("verify", "Run a self-check suite");
  sc_verify->add_option("--suite", suite)
      ->required()
      ->check(CLI::IsMember({"axioms", "oracle", "gradcheck", "convergence"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sc_gen->parsed()) return cmd_gen_data(gen);
    if (sc_train->parsed()) return cmd_train(tr);
    if (sc_explain->parsed()) return cmd_explain(exp);
    if (sc_verify->parsed()) return run_verify_suite(suite) ? 0 : 1;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const DivergenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
