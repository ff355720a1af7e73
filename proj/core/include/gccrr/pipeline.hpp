#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gccrr/augment.hpp"
#include "gccrr/gcc_codec.hpp"
#include "gccrr/metrics.hpp"
#include "gccrr/network.hpp"
#include "gccrr/training.hpp"

namespace gccrr {

struct PipelineConfig {
  ModelConfig model;
  TrainConfig train;
  AugmentConfig augment;
  PeakConfig peak;
  MatchConfig match;
  double train_ratio = 0.9;
  // Root of every per-fold seed (split, augmentation, init, shuffling).
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  // Replace predictions by the encoded ground truth (no training).
  bool oracle = false;
  double phase_threshold = 0.5;
  std::vector<Side> sides{Side::Left, Side::Right};
  std::optional<std::filesystem::path> checkpoint_dir;

  void validate() const;
};

void to_json(nlohmann::json& j, const PipelineConfig& cfg);
void from_json(const nlohmann::json& j, PipelineConfig& cfg);

struct FoldResult {
  std::string held_out;
  std::size_t train_records = 0;
  std::size_t train_records_augmented = 0;
  std::size_t val_records = 0;
  std::size_t test_records = 0;
  std::vector<std::string> train_subjects;  // audit trail for leakage checks
  std::optional<TrainLog> log;
  EvalReport report;
};

struct SideResult {
  Side side = Side::Left;
  std::vector<FoldResult> folds;
  EvalReport aggregate;
  std::optional<std::string> skipped;
};

struct LosoReport {
  Head head = Head::GccRegression;
  bool oracle = false;
  std::vector<SideResult> sides;
  std::vector<std::string> warnings;
};

struct FoldProgress {
  Side side;
  std::string held_out;
  std::size_t fold;
  std::size_t folds;
  const EvalReport* report;
};

// Per side: filter, leave one subject out, split the remainder, augment the
// training part only, train a model with cfg.model.head, predict and score
// the held-out subject. A side with fewer than two subjects is skipped with
// a warning. Folds run on cfg.jobs threads; results do not depend on it.
LosoReport run_loso(std::span<const WalkRecord> records, const PipelineConfig& cfg,
                    const std::function<void(const FoldProgress&)>& progress = {});

struct SideModel {
  ModelParams params;
  TrainLog log;
  std::size_t train_records = 0;
  std::size_t train_records_augmented = 0;
  std::size_t val_records = 0;
};

// One model on every record of a side, with the same split, augmentation and
// seeding recipe as a LOSO fold. Throws DataError when the side is empty; a
// single record is trained on without validation.
SideModel train_side_model(std::span<const WalkRecord> records, Side side, const PipelineConfig& cfg,
                           const std::function<void(const EpochLog&)>& on_epoch = {});

struct AblationReport {
  LosoReport gccrr;
  LosoReport baseline;
  // gccrr minus baseline aggregate accuracy, per evaluated side.
  std::vector<std::pair<Side, double>> accuracy_delta;
};

// run_loso with the regression head and with the phase-classification head,
// same seeds and therefore identical folds and augmented training sets.
AblationReport run_ablation(std::span<const WalkRecord> records, const PipelineConfig& cfg,
                            const std::function<void(const FoldProgress&)>& progress = {});

nlohmann::json loso_report_to_json(const LosoReport& report, bool detail = true);
nlohmann::json ablation_report_to_json(const AblationReport& report, bool detail = true);

}  // namespace gccrr
