#pragma once

#include <cstdint>
#include <vector>

#include "rlcert/qfunc/q_function.hpp"

namespace rlcert {

/// Fully-connected Q-network with ReLU hidden activations and a linear output
/// layer. Weights are immutable after construction.
class MlpQ final : public QFunction {
 public:
  struct Layer {
    int rows = 0;  // outputs
    int cols = 0;  // inputs
    std::vector<double> weights;  // row-major, rows x cols
    std::vector<double> bias;     // rows
  };

  explicit MlpQ(std::vector<Layer> layers);

  /// He-style random initialization; fully determined by the seed.
  static MlpQ random(const std::vector<int>& dims, std::uint64_t seed);

  int obs_dim() const override { return layers_.front().cols; }
  int num_actions() const override { return layers_.back().rows; }
  void eval_raw(std::span<const double> obs, std::span<double> out) const override;
  std::unique_ptr<QFunction> clone() const override;

  const std::vector<Layer>& layers() const { return layers_; }

  /// Gradient of dot(direction, Q(obs)) with respect to obs, by reverse
  /// accumulation through the raw (unclipped) network.
  std::vector<double> input_gradient(std::span<const double> obs,
                                     std::span<const double> direction) const;

 private:
  std::vector<Layer> layers_;
};

/// Spec'd gradient entry point: dispatches to MlpQ::input_gradient and throws
/// UnsupportedError for Q-functions without a usable input gradient
/// (piecewise-constant tables are flat almost everywhere).
std::vector<double> input_gradient(const QFunction& q, std::span<const double> obs,
                                   std::span<const double> direction);

}  // namespace rlcert
