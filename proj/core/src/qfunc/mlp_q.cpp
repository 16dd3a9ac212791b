#include "rlcert/qfunc/mlp_q.hpp"

#include <cmath>

#include "rlcert/errors.hpp"
#include "rlcert/noise.hpp"

namespace rlcert {

MlpQ::MlpQ(std::vector<Layer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw DomainError("MlpQ: need at least one layer");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Layer& l = layers_[i];
    if (l.rows < 1 || l.cols < 1) throw DomainError("MlpQ: empty layer");
    if (l.weights.size() != static_cast<std::size_t>(l.rows) * l.cols ||
        l.bias.size() != static_cast<std::size_t>(l.rows)) {
      throw DomainError("MlpQ: layer buffer sizes do not match its shape");
    }
    if (i > 0 && layers_[i - 1].rows != l.cols) {
      throw DomainError("MlpQ: layer shapes do not chain");
    }
    for (double v : l.weights) {
      if (!std::isfinite(v)) throw DomainError("MlpQ: weights must be finite");
    }
    for (double v : l.bias) {
      if (!std::isfinite(v)) throw DomainError("MlpQ: bias must be finite");
    }
  }
}

MlpQ MlpQ::random(const std::vector<int>& dims, std::uint64_t seed) {
  if (dims.size() < 2) throw DomainError("MlpQ::random: need input and output dims");
  CounterRng rng{seed};
  std::vector<Layer> layers;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    Layer l;
    l.cols = dims[i];
    l.rows = dims[i + 1];
    const double scale = std::sqrt(2.0 / l.cols);
    l.weights.resize(static_cast<std::size_t>(l.rows) * l.cols);
    l.bias.assign(static_cast<std::size_t>(l.rows), 0.0);
    for (std::size_t j = 0; j < l.weights.size(); ++j) {
      l.weights[j] = scale * rng.gaussian(i, 0, j);
    }
    for (std::size_t j = 0; j < l.bias.size(); ++j) {
      l.bias[j] = 0.1 * rng.gaussian(i, 1, j);
    }
    layers.push_back(std::move(l));
  }
  return MlpQ(std::move(layers));
}

void MlpQ::eval_raw(std::span<const double> obs, std::span<double> out) const {
  if (static_cast<int>(obs.size()) != obs_dim()) {
    throw DomainError("MlpQ: observation dimension mismatch");
  }
  std::vector<double> cur(obs.begin(), obs.end());
  std::vector<double> next;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Layer& l = layers_[i];
    next.assign(static_cast<std::size_t>(l.rows), 0.0);
    for (int r = 0; r < l.rows; ++r) {
      double acc = l.bias[r];
      const double* w = &l.weights[static_cast<std::size_t>(r) * l.cols];
      for (int c = 0; c < l.cols; ++c) acc += w[c] * cur[c];
      next[r] = acc;
    }
    if (i + 1 < layers_.size()) {
      for (double& v : next) v = v > 0.0 ? v : 0.0;
    }
    cur.swap(next);
  }
  for (std::size_t a = 0; a < cur.size(); ++a) out[a] = cur[a];
}

std::unique_ptr<QFunction> MlpQ::clone() const { return std::make_unique<MlpQ>(*this); }

std::vector<double> MlpQ::input_gradient(std::span<const double> obs,
                                         std::span<const double> direction) const {
  if (static_cast<int>(obs.size()) != obs_dim() ||
      static_cast<int>(direction.size()) != num_actions()) {
    throw DomainError("MlpQ::input_gradient: dimension mismatch");
  }
  // Forward pass, keeping each layer's pre-activation.
  std::vector<std::vector<double>> pre(layers_.size());
  std::vector<double> cur(obs.begin(), obs.end());
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Layer& l = layers_[i];
    pre[i].assign(static_cast<std::size_t>(l.rows), 0.0);
    for (int r = 0; r < l.rows; ++r) {
      double acc = l.bias[r];
      const double* w = &l.weights[static_cast<std::size_t>(r) * l.cols];
      for (int c = 0; c < l.cols; ++c) acc += w[c] * cur[c];
      pre[i][r] = acc;
    }
    cur = pre[i];
    if (i + 1 < layers_.size()) {
      for (double& v : cur) v = v > 0.0 ? v : 0.0;
    }
  }
  // Backward pass.
  std::vector<double> grad(direction.begin(), direction.end());
  for (std::size_t i = layers_.size(); i-- > 0;) {
    const Layer& l = layers_[i];
    if (i + 1 < layers_.size()) {
      // The gradient arriving here is w.r.t. the ReLU output of layer i.
      for (int r = 0; r < l.rows; ++r) {
        if (pre[i][r] <= 0.0) grad[r] = 0.0;
      }
    }
    std::vector<double> prev(static_cast<std::size_t>(l.cols), 0.0);
    for (int r = 0; r < l.rows; ++r) {
      const double g = grad[r];
      if (g == 0.0) continue;
      const double* w = &l.weights[static_cast<std::size_t>(r) * l.cols];
      for (int c = 0; c < l.cols; ++c) prev[c] += g * w[c];
    }
    grad.swap(prev);
  }
  return grad;
}

std::vector<double> input_gradient(const QFunction& q, std::span<const double> obs,
                                   std::span<const double> direction) {
  const auto* mlp = dynamic_cast<const MlpQ*>(&q);
  if (mlp == nullptr) {
    throw UnsupportedError(
        "input_gradient: only differentiable Q-functions support gradients");
  }
  return mlp->input_gradient(obs, direction);
}

}  // namespace rlcert
