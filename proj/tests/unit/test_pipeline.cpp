#include <gtest/gtest.h>

#include <filesystem>

#include <unistd.h>

#include "gccrr/datasets.hpp"
#include "gccrr/error.hpp"
#include "gccrr/pipeline.hpp"

using namespace gccrr;

namespace {

std::vector<WalkRecord> small_dataset(std::size_t subjects = 4, std::size_t per_subject = 6) {
  SynthConfig sc;
  sc.num_subjects = subjects;
  sc.records_per_subject = per_subject;
  sc.cycles_max = 2;
  sc.seed = 3;
  return generate_dataset(sc);
}

PipelineConfig tiny_pipeline() {
  PipelineConfig cfg;
  cfg.model.hidden_dim = 4;
  cfg.model.num_layers = 1;
  cfg.model.fc_hidden = 6;
  cfg.train.epochs = 2;
  cfg.augment.copies_per_record = 1;
  cfg.augment.factor_max = 1.5;
  cfg.seed = 21;
  return cfg;
}

}  // namespace

TEST(Pipeline, OracleModeIsPerfect) {
  PipelineConfig cfg;
  cfg.oracle = true;
  const auto rep = run_loso(small_dataset(), cfg);
  ASSERT_EQ(rep.sides.size(), 2u);
  for (const auto& s : rep.sides) {
    EXPECT_EQ(s.folds.size(), 2u);
    EXPECT_EQ(s.aggregate.accuracy, 1.0);
    EXPECT_EQ(*s.aggregate.false_peak_rate, 0.0);
    EXPECT_EQ(*s.aggregate.timestamp_error_s, 0.0);
    for (const auto& f : s.folds) EXPECT_FALSE(f.log.has_value());
  }
}

TEST(Pipeline, FoldCountsAndAugmentationScope) {
  PipelineConfig cfg;
  cfg.oracle = true;
  const auto recs = small_dataset(6, 10);
  const auto rep = run_loso(recs, cfg);
  for (const auto& s : rep.sides) {
    ASSERT_EQ(s.folds.size(), 3u);
    for (const auto& f : s.folds) {
      EXPECT_EQ(f.test_records, 10u);
      EXPECT_EQ(f.train_records + f.val_records, 20u);
      EXPECT_EQ(f.val_records, 2u);
      EXPECT_EQ(f.train_records_augmented, 5 * f.train_records);
      for (const auto& id : f.train_subjects) EXPECT_NE(id, f.held_out);
      EXPECT_EQ(f.train_subjects.size(), 2u);
    }
  }
}

TEST(Pipeline, LonelySideIsSkippedWithWarning) {
  auto recs = small_dataset(3, 4);  // S01, S03 left; S02 right
  PipelineConfig cfg;
  cfg.oracle = true;
  const auto rep = run_loso(recs, cfg);
  ASSERT_EQ(rep.sides.size(), 2u);
  EXPECT_FALSE(rep.sides[0].skipped.has_value());
  EXPECT_TRUE(rep.sides[1].skipped.has_value());
  EXPECT_EQ(rep.warnings.size(), 1u);
  EXPECT_TRUE(rep.sides[1].folds.empty());
}

TEST(Pipeline, ResultsIndependentOfJobs) {
  const auto recs = small_dataset();
  auto cfg = tiny_pipeline();
  cfg.sides = {Side::Left};
  const auto a = loso_report_to_json(run_loso(recs, cfg)).dump();
  cfg.jobs = 2;
  const auto b = loso_report_to_json(run_loso(recs, cfg)).dump();
  EXPECT_EQ(a, b);
  cfg.seed = 22;
  EXPECT_NE(loso_report_to_json(run_loso(recs, cfg)).dump(), a);
}

TEST(Pipeline, ProgressAndCheckpoints) {
  const auto dir = std::filesystem::temp_directory_path() / ("gccrr_pipe_" + std::to_string(::getpid()));
  auto cfg = tiny_pipeline();
  cfg.sides = {Side::Right};
  cfg.train.epochs = 1;
  cfg.checkpoint_dir = dir;
  std::vector<std::string> seen;
  run_loso(small_dataset(), cfg, [&](const FoldProgress& p) {
    EXPECT_EQ(p.folds, 2u);
    seen.push_back(p.held_out);
  });
  std::sort(seen.begin(), seen.end());
  EXPECT_EQ(seen, (std::vector<std::string>{"S02", "S04"}));
  EXPECT_TRUE(std::filesystem::exists(dir / "R_S02_regression.ckpt.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "R_S04_regression.ckpt.json"));
  std::filesystem::remove_all(dir);
}

TEST(Ablation, ArmsShareFoldsAndBaselineHasNoPeakMetrics) {
  auto cfg = tiny_pipeline();
  cfg.sides = {Side::Left};
  const auto rep = run_ablation(small_dataset(), cfg);
  ASSERT_EQ(rep.gccrr.sides.size(), 1u);
  ASSERT_EQ(rep.baseline.sides.size(), 1u);
  EXPECT_EQ(rep.gccrr.head, Head::GccRegression);
  EXPECT_EQ(rep.baseline.head, Head::PhaseClassification);
  const auto& g = rep.gccrr.sides[0];
  const auto& b = rep.baseline.sides[0];
  ASSERT_EQ(g.folds.size(), b.folds.size());
  for (std::size_t k = 0; k < g.folds.size(); ++k) {
    EXPECT_EQ(g.folds[k].held_out, b.folds[k].held_out);
    EXPECT_EQ(g.folds[k].train_records_augmented, b.folds[k].train_records_augmented);
    EXPECT_EQ(g.folds[k].val_records, b.folds[k].val_records);
  }
  EXPECT_FALSE(b.aggregate.false_peak_rate.has_value());
  EXPECT_FALSE(b.aggregate.timestamp_error_s.has_value());
  const auto j = ablation_report_to_json(rep, false);
  EXPECT_TRUE(j["baseline"]["sides"][0]["aggregate"]["false_peak_rate"].is_null() ||
              !j["baseline"]["sides"][0]["aggregate"].contains("false_peak_rate"));
  ASSERT_EQ(rep.accuracy_delta.size(), 1u);
  EXPECT_DOUBLE_EQ(rep.accuracy_delta[0].second, g.aggregate.accuracy - b.aggregate.accuracy);
}

TEST(Pipeline, InvalidConfig) {
  PipelineConfig cfg;
  cfg.train_ratio = 1.5;
  EXPECT_THROW(run_loso(small_dataset(), cfg), ConfigError);
  cfg = {};
  cfg.jobs = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}
