#include "gccrr/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "gccrr/error.hpp"
#include "gccrr/gcc_codec.hpp"

namespace gccrr {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning rate must be > 0");
  }
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ConfigError("Adam betas must lie in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw ConfigError("Adam epsilon must be > 0");
}

std::vector<TrainingExample> make_examples(std::span<const WalkRecord> records, Head head) {
  std::vector<TrainingExample> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    TrainingExample ex{r.imu, {}};
    if (head == Head::GccRegression) {
      ex.target = encode_gcc(r.events, r.length()).values;
    } else {
      const auto phases = label_phases(r.events, r.length());
      ex.target.assign(phases.labels.begin(), phases.labels.end());
    }
    out.push_back(std::move(ex));
  }
  return out;
}

InputScaling fit_input_scaling(std::span<const TrainingExample> examples) {
  if (examples.empty()) throw ConfigError("cannot fit input scaling on an empty set");
  const Eigen::Index channels = examples.front().input.samples.cols();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(channels);
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(channels);
  double count = 0.0;
  for (const auto& ex : examples) {
    sum += ex.input.samples.colwise().sum().transpose();
    count += static_cast<double>(ex.input.samples.rows());
  }
  const Eigen::VectorXd mean = sum / count;
  for (const auto& ex : examples) {
    sq += (ex.input.samples.rowwise() - mean.transpose()).array().square().colwise().sum().matrix().transpose();
  }
  Eigen::VectorXd scale = (sq / count).cwiseSqrt();
  for (Eigen::Index c = 0; c < channels; ++c) {
    if (!(scale(c) > 1e-12)) scale(c) = 1.0;
  }
  return {mean, scale};
}

double mean_loss(const ModelParams& params, std::span<const TrainingExample> examples) {
  if (examples.empty()) return 0.0;
  double total = 0.0;
  for (const auto& ex : examples) {
    total += loss(params.config.head, forward(params, ex.input).output, ex.target);
  }
  return total / static_cast<double>(examples.size());
}

namespace {

class OptimizerState {
 public:
  OptimizerState(const TrainConfig& cfg, std::size_t size)
      : cfg_(cfg), first_(size, 0.0), second_(size, 0.0) {}

  void step(ParamVector& weights, ParamVector& grads) {
    const auto n = static_cast<Eigen::Index>(weights.size());
    Eigen::Map<Eigen::ArrayXd> w(weights.data(), n);
    Eigen::Map<Eigen::ArrayXd> g(grads.data(), n);
    if (cfg_.clip_norm > 0.0) {
      const double norm = g.matrix().norm();
      if (norm > cfg_.clip_norm) g *= cfg_.clip_norm / norm;
    }
    if (cfg_.optimizer == Optimizer::Sgd) {
      w -= cfg_.learning_rate * g;
      return;
    }
    ++steps_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(steps_));
    const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(steps_));
    Eigen::Map<Eigen::ArrayXd> m(first_.data(), n);
    Eigen::Map<Eigen::ArrayXd> v(second_.data(), n);
    m = cfg_.beta1 * m + (1.0 - cfg_.beta1) * g;
    v = cfg_.beta2 * v + (1.0 - cfg_.beta2) * g.square();
    w -= cfg_.learning_rate * (m / c1) / ((v / c2).sqrt() + cfg_.epsilon);
  }

 private:
  TrainConfig cfg_;
  ParamVector first_;
  ParamVector second_;
  std::uint64_t steps_ = 0;
};

}  // namespace

TrainResult train(ModelParams initial, std::span<const TrainingExample> train_set,
                  std::span<const TrainingExample> val_set, const TrainConfig& cfg,
                  const std::function<void(const EpochLog&)>& on_epoch) {
  cfg.validate();
  if (train_set.empty()) throw ConfigError("training set is empty");

  ModelParams params = std::move(initial);
  TrainResult result{params, {}};
  result.log.best_val_loss = std::numeric_limits<double>::infinity();

  OptimizerState optimizer(cfg, params.weights.size());
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::size_t since_best = 0;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double train_total = 0.0;
    for (std::size_t idx : order) {
      const auto& ex = train_set[idx];
      auto fwd = forward(params, ex.input);
      train_total += loss(params.config.head, fwd.output, ex.target);
      auto grads = backward(params, fwd.cache, ex.target);
      optimizer.step(params.weights, grads.values);
    }
    EpochLog entry{epoch, train_total / static_cast<double>(train_set.size()), 0.0};
    entry.val_loss = val_set.empty() ? mean_loss(params, train_set) : mean_loss(params, val_set);
    if (!std::isfinite(entry.train_loss) || !std::isfinite(entry.val_loss)) {
      throw Error("non-finite loss at epoch " + std::to_string(epoch));
    }
    result.log.epochs.push_back(entry);
    if (on_epoch) on_epoch(entry);

    if (entry.val_loss < result.log.best_val_loss) {
      result.log.best_val_loss = entry.val_loss;
      result.log.best_epoch = epoch;
      result.params = params;
      since_best = 0;
    } else if (++since_best > cfg.patience) {
      result.log.stopped_early = true;
      break;
    }
  }
  return result;
}

}  // namespace gccrr
