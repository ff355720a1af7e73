#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gccrr/types.hpp"

namespace gccrr {

enum class Head : std::uint8_t {
  GccRegression,        // tanh output in [-1, 1], trained with MSE
  PhaseClassification,  // sigmoid output P(P_i = 1), trained with BCE
};

enum class Direction : std::uint8_t { Forward, Backward };

struct ModelConfig {
  std::size_t input_dim = kDefaultChannels;
  std::size_t hidden_dim = 32;  // per direction
  std::size_t num_layers = 2;
  std::size_t fc_hidden = 64;
  Head head = Head::GccRegression;
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct TensorSpec {
  std::string name;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::size_t offset = 0;

  std::size_t size() const { return static_cast<std::size_t>(rows * cols); }
};

// Flat, column-major placement of every trainable tensor. Per layer and
// direction: w_input (4H x in), w_recurrent (4H x H), bias (4H), gate order
// input, forget, cell, output. Then fc1 (F x 2H, F), fc2 (1 x F, 1).
class ParamLayout {
 public:
  struct Cell {
    std::size_t w_input = 0;
    std::size_t w_recurrent = 0;
    std::size_t bias = 0;
    Eigen::Index input_dim = 0;
  };

  explicit ParamLayout(const ModelConfig& cfg);

  const std::vector<TensorSpec>& tensors() const { return tensors_; }
  std::size_t total() const { return total_; }
  const Cell& cell(std::size_t layer, Direction dir) const {
    return cells_[2 * layer + (dir == Direction::Backward ? 1 : 0)];
  }
  std::size_t fc1_weight() const { return fc1_weight_; }
  std::size_t fc1_bias() const { return fc1_bias_; }
  std::size_t fc2_weight() const { return fc2_weight_; }
  std::size_t fc2_bias() const { return fc2_bias_; }

 private:
  std::size_t add(std::string name, Eigen::Index rows, Eigen::Index cols);

  std::vector<TensorSpec> tensors_;
  std::vector<Cell> cells_;
  std::size_t fc1_weight_ = 0, fc1_bias_ = 0, fc2_weight_ = 0, fc2_bias_ = 0;
  std::size_t total_ = 0;
};

// Per-channel standardization applied to raw samples before the first layer.
// Not trained; fitted on the training set.
struct InputScaling {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  static InputScaling identity(std::size_t channels);
  friend bool operator==(const InputScaling&, const InputScaling&) = default;
};

// Parameter-sized buffers. A fixed 64-byte base alignment keeps Eigen's
// vectorized reductions over them bit-reproducible from one allocation to the next.
using ParamVector = std::vector<double, Eigen::aligned_allocator<double>>;

struct ModelParams {
  ModelConfig config;
  ParamVector weights;  // ParamLayout(config).total() entries
  InputScaling scaling;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct Gradients {
  ParamVector values;
};

// Uniform in [-1/sqrt(H), 1/sqrt(H)], zero biases, forget-gate bias 1.
ModelParams init_params(const ModelConfig& cfg);
ModelParams zero_params(const ModelConfig& cfg);

struct CellCache {
  Eigen::MatrixXd gates;      // 4H x T, activated
  Eigen::MatrixXd cell;       // H x T
  Eigen::MatrixXd cell_tanh;  // H x T
};

struct ForwardCache {
  std::vector<Eigen::MatrixXd> layer_inputs;  // num_layers + 1 entries; last is the head input
  std::vector<CellCache> cells;               // 2 per layer
  Eigen::MatrixXd fc_hidden;                  // F x T, after tanh
  Eigen::RowVectorXd output;                  // 1 x T, after output activation
};

struct ForwardResult {
  std::vector<double> output;
  ForwardCache cache;
};

// Throws DataError when the channel count differs from input_dim.
ForwardResult forward(const ModelParams& params, const ImuSequence& imu);

// MSE for GccRegression, mean BCE (p clamped to [1e-7, 1 - 1e-7]) for
// PhaseClassification. Throws DataError on length mismatch.
double loss(Head head, std::span<const double> prediction, std::span<const double> target);
double mse(std::span<const double> prediction, std::span<const double> target);
double bce(std::span<const double> probability, std::span<const double> target);

// Exact gradient of loss(forward(params, imu), target) via BPTT.
Gradients backward(const ModelParams& params, const ForwardCache& cache,
                   std::span<const double> target);

GccCurve predict_curve(const ModelParams& params, const ImuSequence& imu);
// Probability thresholded at `threshold` (p >= threshold -> 1).
PhaseSequence predict_phases(const ModelParams& params, const ImuSequence& imu,
                             double threshold = 0.5);

}  // namespace gccrr
