#include "qxai/nnet/grad_check.hpp"

#include <cmath>

namespace qxai::nnet {

namespace {

template <class Model>
double check_impl(Model& model, const Dataset& batch, Loss loss, double eps) {
  if (eps <= 0.0) throw ConfigError("grad_check: eps must be positive");
  auto& theta = model.params();
  std::vector<double> grad(theta.size(), 0.0);
  for (std::size_t i = 0; i < batch.n_rows(); ++i)
    model.loss_and_grad(batch.rows[i], batch.targets[i], loss, grad);

  auto batch_loss = [&]() {
    double acc = 0.0;
    for (std::size_t i = 0; i < batch.n_rows(); ++i)
      acc += loss_value(loss, model.forward(batch.rows[i]), batch.targets[i]);
    return acc;
  };

  double worst = 0.0;
  for (std::size_t p = 0; p < theta.size(); ++p) {
    const double saved = theta[p];
    theta[p] = saved + eps;
    const double lp = batch_loss();
    theta[p] = saved - eps;
    const double lm = batch_loss();
    theta[p] = saved;
    const double numeric = (lp - lm) / (2.0 * eps);
    // Differences below the central-difference cancellation floor
    // (ulp(loss)/eps) carry no signal about the analytic gradient.
    if (std::abs(grad[p] - numeric) < 5e-9) continue;
    const double denom = std::max({std::abs(grad[p]), std::abs(numeric), 1e-8});
    worst = std::max(worst, std::abs(grad[p] - numeric) / denom);
  }
  return worst;
}

}  // namespace

double grad_check_mlp(Mlp& model, const Dataset& batch, Loss loss, double eps) {
  return check_impl(model, batch, loss, eps);
}

double grad_check_attention(AttentionNet& model, const Dataset& batch, Loss loss,
                            double eps) {
  return check_impl(model, batch, loss, eps);
}

}  // namespace qxai::nnet
