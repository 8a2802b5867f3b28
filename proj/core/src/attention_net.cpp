#include "qxai/nnet/attention_net.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qxai/rng.hpp"

namespace qxai::nnet {

std::vector<double> attention_scores(std::span<const double> x,
                                     std::span<const double> position_weights,
                                     double bias) {
  if (x.size() != position_weights.size())
    throw ConfigError("attention_scores: length mismatch");
  std::vector<double> e(x.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    e[j] = std::tanh(x[j] * (position_weights[j] + bias));
  return e;
}

std::vector<double> attention_weights(std::span<const double> scores) {
  if (scores.empty()) throw ConfigError("attention_weights: empty scores");
  return softmax(scores);
}

std::vector<double> context_vector(std::span<const double> weights,
                                   const std::vector<std::vector<double>>& representations) {
  if (weights.size() != representations.size())
    throw ConfigError("context_vector: one representation per weight required");
  std::vector<double> c(representations.front().size(), 0.0);
  for (std::size_t j = 0; j < weights.size(); ++j)
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += weights[j] * representations[j][i];
  return c;
}

void AttentionNetSpec::validate() const {
  if (n_features == 0) throw ConfigError("attention net: n_features must be positive");
  if (embed_dim == 0 || hidden == 0)
    throw ConfigError("attention net: embed_dim and hidden must be >= 1");
  if (n_outputs == 0) throw ConfigError("attention net: n_outputs must be positive");
}

void AttentionNet::layout() {
  const std::size_t d = spec_.embed_dim, h = spec_.hidden, n = spec_.n_features,
                    k = spec_.n_outputs;
  gate_rows_ = spec_.cell == RecurrentCell::lstm ? 4 * h : h;
  std::size_t off = 0;
  auto block = [&](std::size_t count) {
    std::size_t at = off;
    off += count;
    return at;
  };
  o_we_ = block(d);
  o_be_ = block(d);
  for (int dir = 0; dir < 2; ++dir) {
    o_wf_[dir] = block(gate_rows_ * d);
    o_uf_[dir] = block(gate_rows_ * h);
    o_bf_[dir] = block(gate_rows_);
  }
  o_watt_ = block(n);
  o_batt_ = block(1);
  o_wd_ = block(k * 2 * h);
  o_bd_ = block(k);
  theta_.resize(off, 0.0);
}

AttentionNet::AttentionNet(AttentionNetSpec spec, std::uint64_t seed)
    : spec_(std::move(spec)) {
  spec_.validate();
  layout();
  std::mt19937_64 rng(splitmix64(seed ^ 0x3fd58a2b1c7e9604ull));
  auto fill = [&](std::size_t at, std::size_t count, std::size_t fan_in) {
    const double s = std::sqrt(1.0 / double(std::max<std::size_t>(fan_in, 1)));
    std::uniform_real_distribution<double> dist(-s, s);
    for (std::size_t i = 0; i < count; ++i) theta_[at + i] = dist(rng);
  };
  const std::size_t d = spec_.embed_dim, h = spec_.hidden, k = spec_.n_outputs;
  fill(o_we_, d, 1);
  for (int dir = 0; dir < 2; ++dir) {
    fill(o_wf_[dir], gate_rows_ * d, d);
    fill(o_uf_[dir], gate_rows_ * h, h);
  }
  fill(o_wd_, k * 2 * h, 2 * h);
  // Score parameters start at zero: e = 0, alpha uniform on a fresh net.
}

AttentionNet::AttentionNet(AttentionNetSpec spec, std::vector<double> params)
    : spec_(std::move(spec)) {
  spec_.validate();
  layout();
  if (params.size() != theta_.size())
    throw ConfigError("attention net: parameter count mismatch");
  theta_ = std::move(params);
}

namespace {

struct LstmCache {
  // per time step, each of length h
  std::vector<std::vector<double>> gi, gf, gg, go, cell, hid;
};

struct ElmanCache {
  std::vector<std::vector<double>> hid;
};

}  // namespace

struct Cache {
  std::vector<std::vector<double>> emb;  // N x d
  LstmCache lstm[2];
  ElmanCache elman[2];
  std::vector<std::vector<double>> rep;  // N x 2h
  std::vector<double> scores, alpha, context, z_out, y;
  std::vector<double> score_pre;  // pre-tanh alignment values
};

namespace {

void run_lstm(const std::vector<double>& theta, std::size_t o_w, std::size_t o_u,
              std::size_t o_b, const std::vector<std::vector<double>>& emb,
              const std::vector<int>& order, std::size_t d, std::size_t h,
              LstmCache& cache) {
  const std::size_t n = order.size();
  cache.gi.assign(n, {});
  cache.gf.assign(n, {});
  cache.gg.assign(n, {});
  cache.go.assign(n, {});
  cache.cell.assign(n, {});
  cache.hid.assign(n, {});
  std::vector<double> h_prev(h, 0.0), c_prev(h, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    const auto& e = emb[order[t]];
    std::vector<double> z(4 * h);
    for (std::size_t r = 0; r < 4 * h; ++r) {
      double s = theta[o_b + r];
      const double* w = &theta[o_w + r * d];
      for (std::size_t j = 0; j < d; ++j) s += w[j] * e[j];
      const double* u = &theta[o_u + r * h];
      for (std::size_t j = 0; j < h; ++j) s += u[j] * h_prev[j];
      z[r] = s;
    }
    auto& gi = cache.gi[t];
    auto& gf = cache.gf[t];
    auto& gg = cache.gg[t];
    auto& go = cache.go[t];
    gi.resize(h);
    gf.resize(h);
    gg.resize(h);
    go.resize(h);
    cache.cell[t].resize(h);
    cache.hid[t].resize(h);
    for (std::size_t j = 0; j < h; ++j) {
      gi[j] = sigmoid(z[j]);
      gf[j] = sigmoid(z[h + j]);
      gg[j] = std::tanh(z[2 * h + j]);
      go[j] = sigmoid(z[3 * h + j]);
      cache.cell[t][j] = gf[j] * c_prev[j] + gi[j] * gg[j];
      cache.hid[t][j] = go[j] * std::tanh(cache.cell[t][j]);
    }
    h_prev = cache.hid[t];
    c_prev = cache.cell[t];
  }
}

void run_elman(const std::vector<double>& theta, std::size_t o_w, std::size_t o_u,
               std::size_t o_b, const std::vector<std::vector<double>>& emb,
               const std::vector<int>& order, std::size_t d, std::size_t h,
               ElmanCache& cache) {
  const std::size_t n = order.size();
  cache.hid.assign(n, {});
  std::vector<double> h_prev(h, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    const auto& e = emb[order[t]];
    cache.hid[t].resize(h);
    for (std::size_t r = 0; r < h; ++r) {
      double s = theta[o_b + r];
      const double* w = &theta[o_w + r * d];
      for (std::size_t j = 0; j < d; ++j) s += w[j] * e[j];
      const double* u = &theta[o_u + r * h];
      for (std::size_t j = 0; j < h; ++j) s += u[j] * h_prev[j];
      cache.hid[t][r] = std::tanh(s);
    }
    h_prev = cache.hid[t];
  }
}

}  // namespace

// Shared forward pass with full caches; backward consumes the same cache.
static void forward_impl(const AttentionNetSpec& spec, const std::vector<double>& theta,
                         std::size_t o_we, std::size_t o_be, const std::size_t* o_wf,
                         const std::size_t* o_uf, const std::size_t* o_bf,
                         std::size_t o_watt, std::size_t o_batt, std::size_t o_wd,
                         std::size_t o_bd, std::span<const double> x, Cache& c) {
  const std::size_t n = spec.n_features, d = spec.embed_dim, h = spec.hidden,
                    k = spec.n_outputs;
  if (x.size() != n) throw ConfigError("attention net: input width mismatch");

  c.emb.assign(n, std::vector<double>(d));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < d; ++i)
      c.emb[j][i] = x[j] * theta[o_we + i] + theta[o_be + i];

  std::vector<int> fwd(n), bwd(n);
  for (std::size_t t = 0; t < n; ++t) {
    fwd[t] = int(t);
    bwd[t] = int(n - 1 - t);
  }
  if (spec.cell == RecurrentCell::lstm) {
    run_lstm(theta, o_wf[0], o_uf[0], o_bf[0], c.emb, fwd, d, h, c.lstm[0]);
    run_lstm(theta, o_wf[1], o_uf[1], o_bf[1], c.emb, bwd, d, h, c.lstm[1]);
  } else {
    run_elman(theta, o_wf[0], o_uf[0], o_bf[0], c.emb, fwd, d, h, c.elman[0]);
    run_elman(theta, o_wf[1], o_uf[1], o_bf[1], c.emb, bwd, d, h, c.elman[1]);
  }

  c.rep.assign(n, std::vector<double>(2 * h));
  for (std::size_t j = 0; j < n; ++j) {
    const auto& hf = spec.cell == RecurrentCell::lstm ? c.lstm[0].hid[j]
                                                      : c.elman[0].hid[j];
    const auto& hb = spec.cell == RecurrentCell::lstm ? c.lstm[1].hid[n - 1 - j]
                                                      : c.elman[1].hid[n - 1 - j];
    std::copy(hf.begin(), hf.end(), c.rep[j].begin());
    std::copy(hb.begin(), hb.end(), c.rep[j].begin() + h);
  }

  c.score_pre.resize(n);
  c.scores.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = x[j] * (theta[o_watt + j] + theta[o_batt]);
    c.score_pre[j] = s;
    c.scores[j] = std::tanh(s);
  }
  c.alpha = softmax(c.scores);
  c.context = context_vector(c.alpha, c.rep);

  c.z_out.resize(k);
  for (std::size_t r = 0; r < k; ++r) {
    double s = theta[o_bd + r];
    const double* w = &theta[o_wd + r * 2 * h];
    for (std::size_t j = 0; j < 2 * h; ++j) s += w[j] * c.context[j];
    c.z_out[r] = s;
  }
  c.y = c.z_out;
  switch (spec.output) {
    case Activation::identity: break;
    case Activation::relu:
      for (auto& v : c.y) v = std::max(v, 0.0);
      break;
    case Activation::leaky_relu:
      for (auto& v : c.y) v = v > 0 ? v : 0.01 * v;
      break;
    case Activation::sigmoid:
      for (auto& v : c.y) v = sigmoid(v);
      break;
    case Activation::softmax: c.y = softmax(c.z_out); break;
  }
}

std::vector<double> AttentionNet::forward(std::span<const double> x,
                                          AttentionTrace* trace) const {
  Cache c;
  forward_impl(spec_, theta_, o_we_, o_be_, o_wf_, o_uf_, o_bf_, o_watt_, o_batt_, o_wd_,
               o_bd_, x, c);
  if (trace) {
    trace->scores = c.scores;
    trace->weights = c.alpha;
    trace->context = c.context;
  }
  return c.y;
}

std::vector<double> AttentionNet::decode(std::span<const double> context) const {
  const std::size_t h = spec_.hidden, k = spec_.n_outputs;
  if (context.size() != 2 * h) throw ConfigError("decode: context width mismatch");
  std::vector<double> z(k);
  for (std::size_t r = 0; r < k; ++r) {
    double s = theta_[o_bd_ + r];
    const double* w = &theta_[o_wd_ + r * 2 * h];
    for (std::size_t j = 0; j < 2 * h; ++j) s += w[j] * context[j];
    z[r] = s;
  }
  switch (spec_.output) {
    case Activation::identity: return z;
    case Activation::relu:
      for (auto& v : z) v = std::max(v, 0.0);
      return z;
    case Activation::leaky_relu:
      for (auto& v : z) v = v > 0 ? v : 0.01 * v;
      return z;
    case Activation::sigmoid:
      for (auto& v : z) v = sigmoid(v);
      return z;
    case Activation::softmax: return softmax(z);
  }
  return z;
}

double AttentionNet::loss_and_grad(std::span<const double> x,
                                   std::span<const double> target, Loss loss,
                                   std::vector<double>& grad) const {
  const std::size_t n = spec_.n_features, d = spec_.embed_dim, h = spec_.hidden,
                    k = spec_.n_outputs;
  Cache c;
  forward_impl(spec_, theta_, o_we_, o_be_, o_wf_, o_uf_, o_bf_, o_watt_, o_batt_, o_wd_,
               o_bd_, x, c);
  const double loss_val = loss_value(loss, c.y, target);

  // Decoder head.
  std::vector<double> dz = output_delta(spec_.output, loss, c.y, c.z_out, target);
  std::vector<double> dctx(2 * h, 0.0);
  for (std::size_t r = 0; r < k; ++r) {
    grad[o_bd_ + r] += dz[r];
    double* gw = &grad[o_wd_ + r * 2 * h];
    const double* w = &theta_[o_wd_ + r * 2 * h];
    for (std::size_t j = 0; j < 2 * h; ++j) {
      gw[j] += dz[r] * c.context[j];
      dctx[j] += w[j] * dz[r];
    }
  }

  // Context -> attention weights and representations.
  std::vector<double> dalpha(n, 0.0);
  std::vector<std::vector<double>> drep(n, std::vector<double>(2 * h, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < 2 * h; ++i) {
      dalpha[j] += dctx[i] * c.rep[j][i];
      drep[j][i] += c.alpha[j] * dctx[i];
    }
  }

  // Softmax Jacobian, then tanh score.
  double dot = 0.0;
  for (std::size_t j = 0; j < n; ++j) dot += dalpha[j] * c.alpha[j];
  std::vector<std::vector<double>> demb(n, std::vector<double>(d, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    const double de = c.alpha[j] * (dalpha[j] - dot);
    const double ds = de * (1.0 - c.scores[j] * c.scores[j]);
    grad[o_watt_ + j] += ds * x[j];
    grad[o_batt_] += ds * x[j];
  }

  // BPTT per direction; drep holds [forward | backward] halves.
  auto bptt_lstm = [&](int dir, const std::vector<int>& order) {
    const LstmCache& lc = c.lstm[dir];
    const std::size_t steps = order.size();
    std::vector<double> dh(h, 0.0), dc(h, 0.0);
    for (std::size_t t = steps; t-- > 0;) {
      const int pos = order[t];
      for (std::size_t j = 0; j < h; ++j)
        dh[j] += drep[pos][dir == 0 ? j : h + j];
      const auto& gi = lc.gi[t];
      const auto& gf = lc.gf[t];
      const auto& gg = lc.gg[t];
      const auto& go = lc.go[t];
      const auto& cell = lc.cell[t];
      const std::vector<double> zero(h, 0.0);
      const auto& c_prev = t > 0 ? lc.cell[t - 1] : zero;
      const auto& h_prev = t > 0 ? lc.hid[t - 1] : zero;
      std::vector<double> dz(4 * h);
      std::vector<double> dc_prev(h), dh_prev(h, 0.0);
      for (std::size_t j = 0; j < h; ++j) {
        const double tc = std::tanh(cell[j]);
        const double dcj = dc[j] + dh[j] * go[j] * (1.0 - tc * tc);
        const double di = dcj * gg[j];
        const double df = dcj * c_prev[j];
        const double dg = dcj * gi[j];
        const double do_ = dh[j] * tc;
        dz[j] = di * gi[j] * (1.0 - gi[j]);
        dz[h + j] = df * gf[j] * (1.0 - gf[j]);
        dz[2 * h + j] = dg * (1.0 - gg[j] * gg[j]);
        dz[3 * h + j] = do_ * go[j] * (1.0 - go[j]);
        dc_prev[j] = dcj * gf[j];
      }
      const auto& e = c.emb[pos];
      for (std::size_t r = 0; r < 4 * h; ++r) {
        grad[o_bf_[dir] + r] += dz[r];
        double* gw = &grad[o_wf_[dir] + r * d];
        const double* w = &theta_[o_wf_[dir] + r * d];
        for (std::size_t j = 0; j < d; ++j) {
          gw[j] += dz[r] * e[j];
          demb[pos][j] += w[j] * dz[r];
        }
        double* gu = &grad[o_uf_[dir] + r * h];
        const double* u = &theta_[o_uf_[dir] + r * h];
        for (std::size_t j = 0; j < h; ++j) {
          gu[j] += dz[r] * h_prev[j];
          dh_prev[j] += u[j] * dz[r];
        }
      }
      dh = std::move(dh_prev);
      dc = std::move(dc_prev);
    }
  };

  auto bptt_elman = [&](int dir, const std::vector<int>& order) {
    const ElmanCache& ec = c.elman[dir];
    const std::size_t steps = order.size();
    std::vector<double> dh(h, 0.0);
    for (std::size_t t = steps; t-- > 0;) {
      const int pos = order[t];
      for (std::size_t j = 0; j < h; ++j)
        dh[j] += drep[pos][dir == 0 ? j : h + j];
      const std::vector<double> zero(h, 0.0);
      const auto& h_prev = t > 0 ? ec.hid[t - 1] : zero;
      const auto& e = c.emb[pos];
      std::vector<double> dh_prev(h, 0.0);
      for (std::size_t r = 0; r < h; ++r) {
        const double a = ec.hid[t][r];
        const double dzr = dh[r] * (1.0 - a * a);
        grad[o_bf_[dir] + r] += dzr;
        double* gw = &grad[o_wf_[dir] + r * d];
        const double* w = &theta_[o_wf_[dir] + r * d];
        for (std::size_t j = 0; j < d; ++j) {
          gw[j] += dzr * e[j];
          demb[pos][j] += w[j] * dzr;
        }
        double* gu = &grad[o_uf_[dir] + r * h];
        const double* u = &theta_[o_uf_[dir] + r * h];
        for (std::size_t j = 0; j < h; ++j) {
          gu[j] += dzr * h_prev[j];
          dh_prev[j] += u[j] * dzr;
        }
      }
      dh = std::move(dh_prev);
    }
  };

  std::vector<int> fwd(n), bwd(n);
  for (std::size_t t = 0; t < n; ++t) {
    fwd[t] = int(t);
    bwd[t] = int(n - 1 - t);
  }
  if (spec_.cell == RecurrentCell::lstm) {
    bptt_lstm(0, fwd);
    bptt_lstm(1, bwd);
  } else {
    bptt_elman(0, fwd);
    bptt_elman(1, bwd);
  }

  // Embedding parameters.
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < d; ++i) {
      grad[o_we_ + i] += demb[j][i] * x[j];
      grad[o_be_ + i] += demb[j][i];
    }
  }
  return loss_val;
}

Predictor make_predictor(const AttentionNet& model) {
  Predictor p;
  p.n_inputs = model.spec().n_features;
  p.n_outputs = model.spec().n_outputs;
  p.eval = [m = model](std::span<const double> x) { return m.forward(x); };
  return p;
}

}  // namespace qxai::nnet
