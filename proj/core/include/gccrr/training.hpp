#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gccrr/network.hpp"
#include "gccrr/types.hpp"

namespace gccrr {

enum class Optimizer : std::uint8_t { Adam, Sgd };

struct TrainConfig {
  double learning_rate = 0.0008;
  std::size_t epochs = 60;
  std::size_t patience = 10;  // epochs without validation improvement before stopping
  Optimizer optimizer = Optimizer::Adam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double clip_norm = 5.0;  // global gradient L2 norm; <= 0 disables clipping
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct TrainingExample {
  ImuSequence input;
  std::vector<double> target;  // GCC values or 0/1 phase labels, one per sample
};

// Targets are re-encoded from each record's events for the given head.
std::vector<TrainingExample> make_examples(std::span<const WalkRecord> records, Head head);

InputScaling fit_input_scaling(std::span<const TrainingExample> examples);

struct EpochLog {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;

  friend bool operator==(const EpochLog&, const EpochLog&) = default;
};

struct TrainLog {
  std::vector<EpochLog> epochs;
  std::size_t best_epoch = 0;
  double best_val_loss = 0.0;
  bool stopped_early = false;

  friend bool operator==(const TrainLog&, const TrainLog&) = default;
};

struct TrainResult {
  ModelParams params;  // parameters of the best validation epoch
  TrainLog log;
};

double mean_loss(const ModelParams& params, std::span<const TrainingExample> examples);

// One optimizer step per record, records shuffled each epoch with the seeded
// generator. With an empty validation set the training loss selects the best
// epoch. Throws ConfigError on an empty training set and Error when a loss
// turns non-finite.
TrainResult train(ModelParams initial, std::span<const TrainingExample> train_set,
                  std::span<const TrainingExample> val_set, const TrainConfig& cfg,
                  const std::function<void(const EpochLog&)>& on_epoch = {});

}  // namespace gccrr
