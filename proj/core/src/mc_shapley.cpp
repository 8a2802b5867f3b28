#include "qxai/mc_shapley.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qxai/parallel.hpp"
#include "qxai/rng.hpp"
#include "qxai/shapley_exact.hpp"

namespace qxai {

namespace {

struct Draw {
  std::size_t row;
  std::vector<int> order;
};

Draw draw_sample(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter,
                 std::size_t n_rows, int p) {
  auto rng = substream(seed, stream, counter);
  Draw d;
  d.row = std::uniform_int_distribution<std::size_t>(0, n_rows - 1)(rng);
  d.order.resize(p);
  std::iota(d.order.begin(), d.order.end(), 0);
  std::shuffle(d.order.begin(), d.order.end(), rng);
  return d;
}

// x with feature j and everything preceding j in the order kept, z elsewhere;
// the paired sample differs only in j coming from z.
std::pair<std::vector<double>, std::vector<double>> build_pair(
    std::span<const double> x, const std::vector<double>& z, const std::vector<int>& order,
    int j) {
  std::vector<double> plus(z), minus(z);
  for (int f : order) {
    plus[f] = x[f];
    if (f == j) break;
    minus[f] = x[f];
  }
  return {std::move(plus), std::move(minus)};
}

}  // namespace

Explanation mc_shapley(const Predictor& model, std::span<const double> instance,
                       const Dataset& data, const McConfig& config,
                       std::size_t output_index) {
  if (data.n_rows() == 0) throw ConfigError("mc_shapley: empty data");
  if (instance.size() != data.n_features())
    throw ConfigError("mc_shapley: instance width mismatch");
  if (config.samples_per_feature < 1) throw ConfigError("mc_shapley: M must be >= 1");
  if (output_index >= model.n_outputs)
    throw ConfigError("mc_shapley: output index out of range");

  const int p = static_cast<int>(instance.size());
  const std::size_t m_samples = config.samples_per_feature;

  std::vector<double> phi(p, 0.0), sq(p, 0.0);
  if (config.permutation_sweep) {
    // Samples come from counter-addressed substreams, so blocks of the sample
    // range can be evaluated on any thread; combining block sums in block
    // order keeps the result independent of the worker count.
    const std::size_t block = 512;
    const std::size_t n_blocks = (m_samples + block - 1) / block;
    std::vector<std::vector<double>> bphi(n_blocks, std::vector<double>(p, 0.0));
    std::vector<std::vector<double>> bsq(n_blocks, std::vector<double>(p, 0.0));
    parallel_for(n_blocks, config.workers, [&](std::size_t b) {
      const std::size_t lo = b * block, hi = std::min(m_samples, lo + block);
      for (std::size_t m = lo; m < hi; ++m) {
        Draw d = draw_sample(config.seed, 0, m, data.n_rows(), p);
        for (int j = 0; j < p; ++j) {
          auto [plus, minus] = build_pair(instance, data.rows[d.row], d.order, j);
          double diff = model(plus)[output_index] - model(minus)[output_index];
          bphi[b][j] += diff;
          bsq[b][j] += diff * diff;
        }
      }
    });
    for (std::size_t b = 0; b < n_blocks; ++b)
      for (int j = 0; j < p; ++j) {
        phi[j] += bphi[b][j];
        sq[j] += bsq[b][j];
      }
  } else {
    // Feature j's estimate depends only on (seed, j), never on which thread
    // runs it or in what order.
    parallel_for(std::size_t(p), config.workers, [&](std::size_t jf) {
      const int j = int(jf);
      for (std::size_t m = 0; m < m_samples; ++m) {
        Draw d = draw_sample(config.seed, std::uint64_t(j) + 1, m, data.n_rows(), p);
        auto [plus, minus] = build_pair(instance, data.rows[d.row], d.order, j);
        double diff = model(plus)[output_index] - model(minus)[output_index];
        phi[j] += diff;
        sq[j] += diff * diff;
      }
    });
  }

  std::vector<double> stderrs(p, 0.0);
  for (int j = 0; j < p; ++j) {
    phi[j] /= double(m_samples);
    double var = sq[j] / double(m_samples) - phi[j] * phi[j];
    stderrs[j] = std::sqrt(std::max(var, 0.0) / double(m_samples));
  }

  double base = 0.0;
  for (const auto& z : data.rows) base += model(z)[output_index];
  base /= double(data.n_rows());

  Explanation ex;
  ex.method = "mc";
  ex.feature_names = data.schema.names;
  // Single-column explanation for the requested output.
  ex.prediction = {model(instance)[output_index]};
  ex.base_value.assign(1, base);
  ex.phi.assign(p, std::vector<double>(1, 0.0));
  for (int j = 0; j < p; ++j) ex.phi[j][0] = phi[j];
  ex.diagnostics = {{"samples_per_feature", m_samples},
                    {"seed", config.seed},
                    {"permutation_sweep", config.permutation_sweep},
                    {"output_index", output_index},
                    {"stderr", stderrs}};
  return ex;
}

std::vector<std::pair<std::size_t, double>> mc_convergence_curve(
    const Predictor& model, std::span<const double> instance, const Dataset& data,
    const std::vector<std::size_t>& checkpoints, std::uint64_t seed,
    std::size_t output_index) {
  const int p = static_cast<int>(instance.size());
  if (p > kExactSubsetCap) throw ConfigError("mc_convergence_curve: over exact cap");

  // Let the exact oracle marginalize over the identical row set MC draws from.
  MaskingGameConfig cfg;
  cfg.background_cap = std::max<std::size_t>(data.n_rows(), cfg.background_cap);
  cfg.seed = seed;
  auto game = make_masking_game(model, instance, data, output_index, cfg);
  auto exact = exact_shapley(game);

  std::vector<std::pair<std::size_t, double>> curve;
  for (std::size_t m : checkpoints) {
    McConfig mc{.samples_per_feature = m, .seed = seed};
    auto est = mc_shapley(model, instance, data, mc, output_index);
    double err = 0.0;
    for (int j = 0; j < p; ++j)
      err = std::max(err, std::abs(est.phi[j][0] - exact[j]));
    curve.emplace_back(m, err);
  }
  return curve;
}

}  // namespace qxai
