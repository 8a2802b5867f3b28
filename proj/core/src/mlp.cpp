#include "qxai/nnet/mlp.hpp"

#include <algorithm>
#include <random>

#include "qxai/rng.hpp"

namespace qxai::nnet {

double loss_value(Loss loss, std::span<const double> y, std::span<const double> target) {
  const double k = double(y.size());
  double acc = 0.0;
  switch (loss) {
    case Loss::mae:
      for (std::size_t i = 0; i < y.size(); ++i) acc += std::abs(y[i] - target[i]);
      return acc / k;
    case Loss::bce:
      for (std::size_t i = 0; i < y.size(); ++i) {
        double p = std::clamp(y[i], 1e-12, 1.0 - 1e-12);
        acc -= target[i] * std::log(p) + (1.0 - target[i]) * std::log(1.0 - p);
      }
      return acc / k;
  }
  return 0.0;
}

std::vector<double> output_delta(Activation act, Loss loss, std::span<const double> y,
                                 std::span<const double> z, std::span<const double> target) {
  const std::size_t k = y.size();
  std::vector<double> dz(k);
  if (loss == Loss::bce && act == Activation::sigmoid) {
    for (std::size_t i = 0; i < k; ++i) dz[i] = (y[i] - target[i]) / double(k);
    return dz;
  }
  if (loss == Loss::bce && act == Activation::softmax) {
    // Softmax head with one-hot targets: categorical cross-entropy gradient.
    for (std::size_t i = 0; i < k; ++i) dz[i] = (y[i] - target[i]) / double(k);
    return dz;
  }
  std::vector<double> dy(k);
  switch (loss) {
    case Loss::mae:
      for (std::size_t i = 0; i < k; ++i) {
        double r = y[i] - target[i];
        dy[i] = (r > 0 ? 1.0 : (r < 0 ? -1.0 : 0.0)) / double(k);
      }
      break;
    case Loss::bce:
      for (std::size_t i = 0; i < k; ++i) {
        double p = std::clamp(y[i], 1e-12, 1.0 - 1e-12);
        dy[i] = (p - target[i]) / (p * (1.0 - p)) / double(k);
      }
      break;
  }
  switch (act) {
    case Activation::identity:
      return dy;
    case Activation::relu:
      for (std::size_t i = 0; i < k; ++i) dz[i] = z[i] > 0 ? dy[i] : 0.0;
      return dz;
    case Activation::leaky_relu:
      for (std::size_t i = 0; i < k; ++i) dz[i] = z[i] > 0 ? dy[i] : 0.01 * dy[i];
      return dz;
    case Activation::sigmoid:
      for (std::size_t i = 0; i < k; ++i) dz[i] = dy[i] * y[i] * (1.0 - y[i]);
      return dz;
    case Activation::softmax: {
      double dot = 0.0;
      for (std::size_t i = 0; i < k; ++i) dot += dy[i] * y[i];
      for (std::size_t i = 0; i < k; ++i) dz[i] = y[i] * (dy[i] - dot);
      return dz;
    }
  }
  return dz;
}

void MlpSpec::validate() const {
  if (layer_sizes.size() < 3) throw ConfigError("mlp: need at least one hidden layer");
  for (auto s : layer_sizes)
    if (s == 0) throw ConfigError("mlp: layer sizes must be positive");
}

void Mlp::layout() {
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < spec_.layer_sizes.size(); ++l) {
    w_off_.push_back(off);
    off += spec_.layer_sizes[l + 1] * spec_.layer_sizes[l];
    b_off_.push_back(off);
    off += spec_.layer_sizes[l + 1];
  }
  theta_.resize(off, 0.0);
}

Mlp::Mlp(MlpSpec spec, std::uint64_t seed) : spec_(std::move(spec)) {
  spec_.validate();
  layout();
  std::mt19937_64 rng(splitmix64(seed ^ 0x17c3a9f25e8b6d40ull));
  for (std::size_t l = 0; l + 1 < spec_.layer_sizes.size(); ++l) {
    const double s = std::sqrt(1.0 / double(spec_.layer_sizes[l]));
    std::uniform_real_distribution<double> dist(-s, s);
    const std::size_t count = spec_.layer_sizes[l + 1] * spec_.layer_sizes[l];
    for (std::size_t i = 0; i < count; ++i) theta_[w_off_[l] + i] = dist(rng);
  }
}

Mlp::Mlp(MlpSpec spec, std::vector<double> params) : spec_(std::move(spec)) {
  spec_.validate();
  layout();
  if (params.size() != theta_.size()) throw ConfigError("mlp: parameter count mismatch");
  theta_ = std::move(params);
}

namespace {

void apply_hidden(Activation act, double slope, std::vector<double>& z) {
  switch (act) {
    case Activation::relu:
      for (auto& v : z) v = std::max(v, 0.0);
      break;
    case Activation::leaky_relu:
      for (auto& v : z) v = v > 0 ? v : slope * v;
      break;
    case Activation::sigmoid:
      for (auto& v : z) v = sigmoid(v);
      break;
    default:
      throw ConfigError("mlp: unsupported hidden activation");
  }
}

}  // namespace

std::vector<double> Mlp::forward(std::span<const double> x) const {
  if (x.size() != spec_.n_inputs()) throw ConfigError("mlp: input width mismatch");
  std::vector<double> a(x.begin(), x.end());
  const std::size_t n_layers = spec_.layer_sizes.size() - 1;
  for (std::size_t l = 0; l < n_layers; ++l) {
    const std::size_t in = spec_.layer_sizes[l], out = spec_.layer_sizes[l + 1];
    std::vector<double> z(out);
    for (std::size_t i = 0; i < out; ++i) {
      double s = theta_[b_off_[l] + i];
      const double* w = &theta_[w_off_[l] + i * in];
      for (std::size_t j = 0; j < in; ++j) s += w[j] * a[j];
      z[i] = s;
    }
    if (l + 1 < n_layers) {
      apply_hidden(spec_.hidden, spec_.leaky_slope, z);
      a = std::move(z);
    } else {
      switch (spec_.output) {
        case Activation::identity: a = std::move(z); break;
        case Activation::relu:
          for (auto& v : z) v = std::max(v, 0.0);
          a = std::move(z);
          break;
        case Activation::sigmoid:
          for (auto& v : z) v = sigmoid(v);
          a = std::move(z);
          break;
        case Activation::softmax: a = softmax(z); break;
        case Activation::leaky_relu:
          for (auto& v : z) v = v > 0 ? v : spec_.leaky_slope * v;
          a = std::move(z);
          break;
      }
    }
  }
  return a;
}

double Mlp::loss_and_grad(std::span<const double> x, std::span<const double> target,
                          Loss loss, std::vector<double>& grad) const {
  const std::size_t n_layers = spec_.layer_sizes.size() - 1;
  std::vector<std::vector<double>> acts(n_layers + 1);  // post-activation
  std::vector<std::vector<double>> pre(n_layers);       // pre-activation
  acts[0].assign(x.begin(), x.end());

  for (std::size_t l = 0; l < n_layers; ++l) {
    const std::size_t in = spec_.layer_sizes[l], out = spec_.layer_sizes[l + 1];
    pre[l].resize(out);
    for (std::size_t i = 0; i < out; ++i) {
      double s = theta_[b_off_[l] + i];
      const double* w = &theta_[w_off_[l] + i * in];
      for (std::size_t j = 0; j < in; ++j) s += w[j] * acts[l][j];
      pre[l][i] = s;
    }
    acts[l + 1] = pre[l];
    if (l + 1 < n_layers) {
      apply_hidden(spec_.hidden, spec_.leaky_slope, acts[l + 1]);
    } else {
      switch (spec_.output) {
        case Activation::identity: break;
        case Activation::relu:
          for (auto& v : acts[l + 1]) v = std::max(v, 0.0);
          break;
        case Activation::leaky_relu:
          for (auto& v : acts[l + 1]) v = v > 0 ? v : spec_.leaky_slope * v;
          break;
        case Activation::sigmoid:
          for (auto& v : acts[l + 1]) v = sigmoid(v);
          break;
        case Activation::softmax: acts[l + 1] = softmax(acts[l + 1]); break;
      }
    }
  }

  const double loss_val = loss_value(loss, acts[n_layers], target);
  std::vector<double> delta =
      output_delta(spec_.output, loss, acts[n_layers], pre[n_layers - 1], target);

  for (std::size_t l = n_layers; l-- > 0;) {
    const std::size_t in = spec_.layer_sizes[l], out = spec_.layer_sizes[l + 1];
    for (std::size_t i = 0; i < out; ++i) {
      grad[b_off_[l] + i] += delta[i];
      double* gw = &grad[w_off_[l] + i * in];
      for (std::size_t j = 0; j < in; ++j) gw[j] += delta[i] * acts[l][j];
    }
    if (l == 0) break;
    std::vector<double> prev(in, 0.0);
    for (std::size_t i = 0; i < out; ++i) {
      const double* w = &theta_[w_off_[l] + i * in];
      for (std::size_t j = 0; j < in; ++j) prev[j] += w[j] * delta[i];
    }
    // Hidden activation derivative of the previous layer.
    for (std::size_t j = 0; j < in; ++j) {
      switch (spec_.hidden) {
        case Activation::relu:
          prev[j] = pre[l - 1][j] > 0 ? prev[j] : 0.0;
          break;
        case Activation::leaky_relu:
          prev[j] = pre[l - 1][j] > 0 ? prev[j] : spec_.leaky_slope * prev[j];
          break;
        case Activation::sigmoid: {
          double a = acts[l][j];
          prev[j] *= a * (1.0 - a);
          break;
        }
        default:
          break;
      }
    }
    delta = std::move(prev);
  }
  return loss_val;
}

Predictor make_predictor(const Mlp& model) {
  Predictor p;
  p.n_inputs = model.spec().n_inputs();
  p.n_outputs = model.spec().n_outputs();
  p.eval = [m = model](std::span<const double> x) { return m.forward(x); };
  return p;
}

}  // namespace qxai::nnet
