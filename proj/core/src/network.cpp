#include "gccrr/network.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gccrr/error.hpp"

namespace gccrr {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

using ConstMatrixMap = Eigen::Map<const MatrixXd>;
using ConstVectorMap = Eigen::Map<const VectorXd>;
using MatrixMap = Eigen::Map<MatrixXd>;
using VectorMap = Eigen::Map<VectorXd>;

void ModelConfig::validate() const {
  if (input_dim < 1) throw ConfigError("model input_dim must be >= 1");
  if (hidden_dim < 1) throw ConfigError("model hidden_dim must be >= 1");
  if (num_layers < 1) throw ConfigError("model num_layers must be >= 1");
  if (fc_hidden < 1) throw ConfigError("model fc_hidden must be >= 1");
}

ParamLayout::ParamLayout(const ModelConfig& cfg) {
  cfg.validate();
  const auto hidden = static_cast<Index>(cfg.hidden_dim);
  const auto fc = static_cast<Index>(cfg.fc_hidden);
  for (std::size_t layer = 0; layer < cfg.num_layers; ++layer) {
    const Index in = layer == 0 ? static_cast<Index>(cfg.input_dim) : 2 * hidden;
    for (const char* dir : {"fwd", "bwd"}) {
      const std::string prefix = "lstm." + std::to_string(layer) + "." + dir + ".";
      Cell cell;
      cell.input_dim = in;
      cell.w_input = add(prefix + "w_input", 4 * hidden, in);
      cell.w_recurrent = add(prefix + "w_recurrent", 4 * hidden, hidden);
      cell.bias = add(prefix + "bias", 4 * hidden, 1);
      cells_.push_back(cell);
    }
  }
  fc1_weight_ = add("fc1.weight", fc, 2 * hidden);
  fc1_bias_ = add("fc1.bias", fc, 1);
  fc2_weight_ = add("fc2.weight", 1, fc);
  fc2_bias_ = add("fc2.bias", 1, 1);
}

std::size_t ParamLayout::add(std::string name, Index rows, Index cols) {
  const std::size_t offset = total_;
  tensors_.push_back({std::move(name), rows, cols, offset});
  total_ += static_cast<std::size_t>(rows * cols);
  return offset;
}

InputScaling InputScaling::identity(std::size_t channels) {
  const auto c = static_cast<Index>(channels);
  return {VectorXd::Zero(c), VectorXd::Ones(c)};
}

ModelParams init_params(const ModelConfig& cfg) {
  const ParamLayout layout(cfg);
  ModelParams params{cfg, ParamVector(layout.total(), 0.0),
                     InputScaling::identity(cfg.input_dim)};
  const double k = 1.0 / std::sqrt(static_cast<double>(cfg.hidden_dim));
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> uniform(-k, k);

  const auto is_bias = [](const std::string& name) {
    return name.size() >= 4 && name.compare(name.size() - 4, 4, "bias") == 0;
  };
  for (const auto& t : layout.tensors()) {
    if (is_bias(t.name)) continue;
    for (std::size_t i = 0; i < t.size(); ++i) params.weights[t.offset + i] = uniform(rng);
  }
  const auto hidden = cfg.hidden_dim;
  for (std::size_t layer = 0; layer < cfg.num_layers; ++layer) {
    for (auto dir : {Direction::Forward, Direction::Backward}) {
      const auto& cell = layout.cell(layer, dir);
      std::fill_n(params.weights.begin() + static_cast<std::ptrdiff_t>(cell.bias + hidden),
                  hidden, 1.0);
    }
  }
  return params;
}

ModelParams zero_params(const ModelConfig& cfg) {
  const ParamLayout layout(cfg);
  return {cfg, ParamVector(layout.total(), 0.0), InputScaling::identity(cfg.input_dim)};
}

namespace {

struct CellWeights {
  ConstMatrixMap w_input;
  ConstMatrixMap w_recurrent;
  ConstVectorMap bias;
};

CellWeights cell_weights(const ParamLayout& layout, const double* base, std::size_t layer,
                         Direction dir, Index hidden) {
  const auto& c = layout.cell(layer, dir);
  return {ConstMatrixMap(base + c.w_input, 4 * hidden, c.input_dim),
          ConstMatrixMap(base + c.w_recurrent, 4 * hidden, hidden),
          ConstVectorMap(base + c.bias, 4 * hidden)};
}

// Eigen vectorizes exp but not tanh for doubles.
template <typename Derived>
void sigmoid_inplace(Eigen::ArrayBase<Derived>&& x) {
  x = 1.0 / (1.0 + (-x).exp());
}

template <typename Derived>
void tanh_inplace(Eigen::ArrayBase<Derived>&& x) {
  x = 1.0 - 2.0 / ((2.0 * x).exp() + 1.0);
}

// Runs one direction over the whole sequence; writes hidden states into `hidden_out`.
void cell_forward(const CellWeights& w, const MatrixXd& input, Direction dir, CellCache& cache,
                  Eigen::Block<MatrixXd> hidden_out) {
  const Index hidden = w.w_recurrent.cols();
  const Index steps = input.cols();
  cache.gates.noalias() = w.w_input * input;
  cache.gates.colwise() += w.bias;
  cache.cell.resize(hidden, steps);
  cache.cell_tanh.resize(hidden, steps);

  VectorXd h = VectorXd::Zero(hidden);
  VectorXd c = VectorXd::Zero(hidden);
  for (Index s = 0; s < steps; ++s) {
    const Index t = dir == Direction::Forward ? s : steps - 1 - s;
    auto g = cache.gates.col(t);
    if (s > 0) g.noalias() += w.w_recurrent * h;
    sigmoid_inplace(g.head(2 * hidden).array());
    tanh_inplace(g.segment(2 * hidden, hidden).array());
    sigmoid_inplace(g.tail(hidden).array());

    c.array() = g.segment(hidden, hidden).array() * c.array() +
                g.head(hidden).array() * g.segment(2 * hidden, hidden).array();
    cache.cell.col(t) = c;
    cache.cell_tanh.col(t) = c;
    tanh_inplace(cache.cell_tanh.col(t).array());
    h.array() = g.tail(hidden).array() * cache.cell_tanh.col(t).array();
    hidden_out.col(t) = h;
  }
}

struct CellGradients {
  MatrixMap w_input;
  MatrixMap w_recurrent;
  VectorMap bias;
};

// Backpropagates `d_hidden` (H x T) through one direction. Accumulates weight
// gradients and, when `d_input` is non-null, the gradient w.r.t. the input.
void cell_backward(const CellWeights& w, const MatrixXd& input, Direction dir,
                   const CellCache& cache, const Eigen::Ref<const MatrixXd>& hidden,
                   const Eigen::Ref<const MatrixXd>& d_hidden, CellGradients grads,
                   MatrixXd* d_input) {
  const Index hidden_dim = w.w_recurrent.cols();
  const Index steps = input.cols();
  MatrixXd d_gates(4 * hidden_dim, steps);
  VectorXd dh_next = VectorXd::Zero(hidden_dim);
  VectorXd dc_next = VectorXd::Zero(hidden_dim);
  Eigen::ArrayXd dc(hidden_dim);
  Eigen::ArrayXd dh(hidden_dim);

  for (Index s = steps - 1; s >= 0; --s) {
    const Index t = dir == Direction::Forward ? s : steps - 1 - s;
    const Index prev = dir == Direction::Forward ? t - 1 : t + 1;
    const auto g = cache.gates.col(t).array();
    const auto in_gate = g.head(hidden_dim);
    const auto forget = g.segment(hidden_dim, hidden_dim);
    const auto candidate = g.segment(2 * hidden_dim, hidden_dim);
    const auto out_gate = g.tail(hidden_dim);
    const auto tc = cache.cell_tanh.col(t).array();

    dh = d_hidden.col(t).array() + dh_next.array();
    dc = dc_next.array() + dh * out_gate * (1.0 - tc.square());

    auto dg = d_gates.col(t).array();
    dg.head(hidden_dim) = dc * candidate * in_gate * (1.0 - in_gate);
    if (s > 0) {
      dg.segment(hidden_dim, hidden_dim) =
          dc * cache.cell.col(prev).array() * forget * (1.0 - forget);
    } else {
      dg.segment(hidden_dim, hidden_dim).setZero();
    }
    dg.segment(2 * hidden_dim, hidden_dim) = dc * in_gate * (1.0 - candidate.square());
    dg.tail(hidden_dim) = dh * tc * out_gate * (1.0 - out_gate);

    dc_next = (dc * forget).matrix();
    if (s > 0) dh_next.noalias() = w.w_recurrent.transpose() * d_gates.col(t);
  }

  grads.w_input.noalias() += d_gates * input.transpose();
  grads.bias += d_gates.rowwise().sum();
  if (steps > 1) {
    if (dir == Direction::Forward) {
      grads.w_recurrent.noalias() +=
          d_gates.rightCols(steps - 1) * hidden.leftCols(steps - 1).transpose();
    } else {
      grads.w_recurrent.noalias() +=
          d_gates.leftCols(steps - 1) * hidden.rightCols(steps - 1).transpose();
    }
  }
  if (d_input) d_input->noalias() += w.w_input.transpose() * d_gates;
}

constexpr double kProbabilityClamp = 1e-7;

}  // namespace

ForwardResult forward(const ModelParams& params, const ImuSequence& imu) {
  const auto& cfg = params.config;
  if (imu.channels() != cfg.input_dim) {
    throw DataError("input has " + std::to_string(imu.channels()) + " channels, model expects " +
                    std::to_string(cfg.input_dim));
  }
  const ParamLayout layout(cfg);
  if (params.weights.size() != layout.total()) {
    throw DataError("parameter vector size does not match model config");
  }
  const auto hidden = static_cast<Index>(cfg.hidden_dim);
  const auto steps = static_cast<Index>(imu.length());
  const double* base = params.weights.data();

  ForwardResult result;
  auto& cache = result.cache;
  cache.layer_inputs.resize(cfg.num_layers + 1);
  cache.cells.resize(2 * cfg.num_layers);

  cache.layer_inputs[0] =
      ((imu.samples.rowwise() - params.scaling.mean.transpose()).array().rowwise() /
       params.scaling.scale.transpose().array())
          .matrix()
          .transpose();

  for (std::size_t layer = 0; layer < cfg.num_layers; ++layer) {
    const MatrixXd& input = cache.layer_inputs[layer];
    MatrixXd& out = cache.layer_inputs[layer + 1];
    out.resize(2 * hidden, steps);
    cell_forward(cell_weights(layout, base, layer, Direction::Forward, hidden), input,
                 Direction::Forward, cache.cells[2 * layer], out.topRows(hidden));
    cell_forward(cell_weights(layout, base, layer, Direction::Backward, hidden), input,
                 Direction::Backward, cache.cells[2 * layer + 1], out.bottomRows(hidden));
  }

  const auto fc = static_cast<Index>(cfg.fc_hidden);
  ConstMatrixMap fc1_w(base + layout.fc1_weight(), fc, 2 * hidden);
  ConstVectorMap fc1_b(base + layout.fc1_bias(), fc);
  ConstMatrixMap fc2_w(base + layout.fc2_weight(), 1, fc);
  const double fc2_b = base[layout.fc2_bias()];

  cache.fc_hidden.noalias() = fc1_w * cache.layer_inputs.back();
  cache.fc_hidden.colwise() += fc1_b;
  tanh_inplace(cache.fc_hidden.array());
  cache.output.noalias() = fc2_w * cache.fc_hidden;
  cache.output.array() += fc2_b;
  if (cfg.head == Head::GccRegression) {
    tanh_inplace(cache.output.array());
  } else {
    sigmoid_inplace(cache.output.array());
  }
  result.output.assign(cache.output.data(), cache.output.data() + steps);
  return result;
}

double mse(std::span<const double> prediction, std::span<const double> target) {
  if (prediction.size() != target.size()) throw DataError("loss: length mismatch");
  if (prediction.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < prediction.size(); ++i) {
    const double d = prediction[i] - target[i];
    sum += d * d;
  }
  return sum / static_cast<double>(prediction.size());
}

double bce(std::span<const double> probability, std::span<const double> target) {
  if (probability.size() != target.size()) throw DataError("loss: length mismatch");
  if (probability.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < probability.size(); ++i) {
    const double p = std::clamp(probability[i], kProbabilityClamp, 1.0 - kProbabilityClamp);
    sum -= target[i] * std::log(p) + (1.0 - target[i]) * std::log(1.0 - p);
  }
  return sum / static_cast<double>(probability.size());
}

double loss(Head head, std::span<const double> prediction, std::span<const double> target) {
  return head == Head::GccRegression ? mse(prediction, target) : bce(prediction, target);
}

Gradients backward(const ModelParams& params, const ForwardCache& cache,
                   std::span<const double> target) {
  const auto& cfg = params.config;
  const ParamLayout layout(cfg);
  const auto hidden = static_cast<Index>(cfg.hidden_dim);
  const auto fc = static_cast<Index>(cfg.fc_hidden);
  const Index steps = cache.output.cols();
  if (static_cast<Index>(target.size()) != steps) throw DataError("backward: length mismatch");

  Gradients grads{ParamVector(layout.total(), 0.0)};
  const double* base = params.weights.data();
  double* gbase = grads.values.data();

  // d loss / d pre-activation of the output unit.
  Eigen::RowVectorXd d_out(steps);
  const double inv_t = 1.0 / static_cast<double>(steps);
  for (Index t = 0; t < steps; ++t) {
    const double y = cache.output(t);
    if (cfg.head == Head::GccRegression) {
      d_out(t) = 2.0 * (y - target[static_cast<std::size_t>(t)]) * inv_t * (1.0 - y * y);
    } else {
      const bool clamped = y < kProbabilityClamp || y > 1.0 - kProbabilityClamp;
      d_out(t) = clamped ? 0.0 : (y - target[static_cast<std::size_t>(t)]) * inv_t;
    }
  }

  ConstMatrixMap fc1_w(base + layout.fc1_weight(), fc, 2 * hidden);
  ConstMatrixMap fc2_w(base + layout.fc2_weight(), 1, fc);
  MatrixMap g_fc1_w(gbase + layout.fc1_weight(), fc, 2 * hidden);
  VectorMap g_fc1_b(gbase + layout.fc1_bias(), fc);
  MatrixMap g_fc2_w(gbase + layout.fc2_weight(), 1, fc);

  g_fc2_w.noalias() = d_out * cache.fc_hidden.transpose();
  gbase[layout.fc2_bias()] = d_out.sum();
  MatrixXd d_fc = (fc2_w.transpose() * d_out).array() * (1.0 - cache.fc_hidden.array().square());
  g_fc1_w.noalias() = d_fc * cache.layer_inputs.back().transpose();
  g_fc1_b = d_fc.rowwise().sum();
  MatrixXd d_layer = fc1_w.transpose() * d_fc;

  for (std::size_t layer = cfg.num_layers; layer-- > 0;) {
    const MatrixXd& input = cache.layer_inputs[layer];
    const MatrixXd& output = cache.layer_inputs[layer + 1];
    MatrixXd d_input;
    MatrixXd* d_input_ptr = nullptr;
    if (layer > 0) {
      d_input = MatrixXd::Zero(input.rows(), steps);
      d_input_ptr = &d_input;
    }
    for (auto dir : {Direction::Forward, Direction::Backward}) {
      const auto& c = layout.cell(layer, dir);
      const bool fwd = dir == Direction::Forward;
      CellGradients g{MatrixMap(gbase + c.w_input, 4 * hidden, c.input_dim),
                      MatrixMap(gbase + c.w_recurrent, 4 * hidden, hidden),
                      VectorMap(gbase + c.bias, 4 * hidden)};
      cell_backward(cell_weights(layout, base, layer, dir, hidden), input, dir,
                    cache.cells[2 * layer + (fwd ? 0 : 1)],
                    fwd ? output.topRows(hidden) : output.bottomRows(hidden),
                    fwd ? d_layer.topRows(hidden) : d_layer.bottomRows(hidden), g, d_input_ptr);
    }
    d_layer = std::move(d_input);
  }
  return grads;
}

GccCurve predict_curve(const ModelParams& params, const ImuSequence& imu) {
  if (params.config.head != Head::GccRegression) {
    throw ConfigError("predict_curve requires a GCC regression model");
  }
  return {forward(params, imu).output};
}

PhaseSequence predict_phases(const ModelParams& params, const ImuSequence& imu,
                             double threshold) {
  if (params.config.head != Head::PhaseClassification) {
    throw ConfigError("predict_phases requires a phase classification model");
  }
  const auto probs = forward(params, imu).output;
  PhaseSequence phases;
  phases.labels.reserve(probs.size());
  for (double p : probs) phases.labels.push_back(p >= threshold ? 1 : 0);
  return phases;
}

}  // namespace gccrr
