#include "gccrr/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <random>
#include <set>
#include <thread>
#include <tuple>

#include "gccrr/checkpoint.hpp"
#include "gccrr/config.hpp"
#include "gccrr/datasets.hpp"
#include "gccrr/error.hpp"

namespace gccrr {

using nlohmann::json;

void PipelineConfig::validate() const {
  model.validate();
  train.validate();
  augment.validate();
  peak.validate();
  match.validate();
  if (!(train_ratio > 0.0 && train_ratio < 1.0)) throw ConfigError("train_ratio must lie in (0, 1)");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (!(phase_threshold > 0.0 && phase_threshold < 1.0)) {
    throw ConfigError("phase_threshold must lie in (0, 1)");
  }
}

void to_json(json& j, const PipelineConfig& c) {
  json sides = json::array();
  for (auto s : c.sides) sides.push_back(side_code(s));
  j = json{{"model", c.model},       {"train", c.train},
           {"augment", c.augment},   {"peak", c.peak},
           {"match", c.match},       {"train_ratio", c.train_ratio},
           {"seed", c.seed},         {"oracle", c.oracle},
           {"phase_threshold", c.phase_threshold},
           {"sides", std::move(sides)}};
}

void from_json(const json& j, PipelineConfig& c) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "model") {
      value.get_to(c.model);
    } else if (key == "train") {
      value.get_to(c.train);
    } else if (key == "augment") {
      value.get_to(c.augment);
    } else if (key == "peak") {
      value.get_to(c.peak);
    } else if (key == "match") {
      value.get_to(c.match);
    } else if (key == "train_ratio" && value.is_number()) {
      c.train_ratio = value.get<double>();
    } else if (key == "seed" && value.is_number_unsigned()) {
      c.seed = value.get<std::uint64_t>();
    } else if (key == "jobs" && value.is_number_unsigned()) {
      c.jobs = value.get<std::size_t>();
    } else if (key == "oracle" && value.is_boolean()) {
      c.oracle = value.get<bool>();
    } else if (key == "phase_threshold" && value.is_number()) {
      c.phase_threshold = value.get<double>();
    } else if (key == "sides" && value.is_array()) {
      c.sides.clear();
      for (const auto& s : value) {
        auto side = s.is_string() ? parse_side(s.get<std::string>()) : std::nullopt;
        if (!side) throw ConfigError("sides: expected \"L\" or \"R\"");
        c.sides.push_back(*side);
      }
    } else if (key == "synth") {
      // Dataset generation settings share the config file; ignored here.
    } else {
      throw ConfigError("config: unknown or mistyped key '" + key + "'");
    }
  }
}

namespace {

std::uint64_t fold_seed(std::uint64_t root, std::size_t side, std::size_t fold, std::uint32_t purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(root), static_cast<std::uint32_t>(root >> 32),
                    static_cast<std::uint32_t>(side), static_cast<std::uint32_t>(fold), purpose};
  std::mt19937_64 rng(seq);
  return rng();
}

enum SeedPurpose : std::uint32_t { kSplitSeed = 1, kAugmentSeed = 2, kInitSeed = 3, kShuffleSeed = 4 };

// Fold slot used when a model is trained on a whole side.
constexpr std::size_t kWholeSideFold = 0xffffffffu;

struct FoldTask {
  std::size_t side_slot;
  std::size_t side_index;  // 0 = Left, 1 = Right; part of the seed derivation
  std::size_t fold;
  const LosoSplit* split;
};

struct Prepared {
  std::vector<WalkRecord> train_part;
  std::vector<WalkRecord> val_part;
  std::vector<WalkRecord> augmented;
};

Prepared prepare(std::span<const WalkRecord> pool, const PipelineConfig& cfg, std::size_t side_index,
                 std::size_t fold) {
  Prepared p;
  std::tie(p.train_part, p.val_part) =
      train_val_split(pool, cfg.train_ratio, fold_seed(cfg.seed, side_index, fold, kSplitSeed));
  AugmentConfig aug = cfg.augment;
  aug.seed = fold_seed(cfg.seed, side_index, fold, kAugmentSeed);
  p.augmented = augment_dataset(p.train_part, aug);
  return p;
}

TrainResult fit(const Prepared& p, const PipelineConfig& cfg, std::size_t side_index, std::size_t fold,
                const std::function<void(const EpochLog&)>& on_epoch) {
  const Head head = cfg.model.head;
  const auto train_examples = make_examples(p.augmented, head);
  const auto val_examples = make_examples(p.val_part, head);

  ModelConfig model_cfg = cfg.model;
  model_cfg.seed = fold_seed(cfg.seed, side_index, fold, kInitSeed);
  ModelParams params = init_params(model_cfg);
  params.scaling = fit_input_scaling(train_examples);
  TrainConfig train_cfg = cfg.train;
  train_cfg.seed = fold_seed(cfg.seed, side_index, fold, kShuffleSeed);
  return train(std::move(params), train_examples, val_examples, train_cfg, on_epoch);
}

FoldResult run_fold(const FoldTask& task, Side side, const PipelineConfig& cfg) {
  const auto& split = *task.split;
  FoldResult result;
  result.held_out = split.held_out;
  result.test_records = split.test.size();

  const Prepared prepared = prepare(split.remaining, cfg, task.side_index, task.fold);

  std::set<std::string> subjects;
  for (const auto& r : prepared.augmented) subjects.insert(r.subject_id);
  if (subjects.count(split.held_out) != 0) {
    throw Error("held-out subject " + split.held_out + " leaked into the training set");
  }
  result.train_subjects.assign(subjects.begin(), subjects.end());
  result.train_records = prepared.train_part.size();
  result.train_records_augmented = prepared.augmented.size();
  result.val_records = prepared.val_part.size();

  if (cfg.oracle) {
    std::vector<GccCurve> curves;
    for (const auto& r : split.test) curves.push_back(encode_gcc(r.events, r.length()));
    result.report = evaluate(split.test, curves, cfg.peak, cfg.match);
    return result;
  }

  const Head head = cfg.model.head;
  auto trained = fit(prepared, cfg, task.side_index, task.fold, {});
  result.log = trained.log;

  if (cfg.checkpoint_dir) {
    std::filesystem::create_directories(*cfg.checkpoint_dir);
    const std::string name = std::string(side_code(side)) + "_" + split.held_out + "_" +
                             std::string(head_name(head)) + ".ckpt.json";
    save_checkpoint(trained.params, *cfg.checkpoint_dir / name);
  }

  if (head == Head::GccRegression) {
    std::vector<GccCurve> curves;
    for (const auto& r : split.test) curves.push_back(predict_curve(trained.params, r.imu));
    result.report = evaluate(split.test, curves, cfg.peak, cfg.match);
  } else {
    std::vector<PhaseSequence> phases;
    for (const auto& r : split.test) {
      phases.push_back(predict_phases(trained.params, r.imu, cfg.phase_threshold));
    }
    result.report = evaluate_phases(split.test, phases);
  }
  return result;
}

}  // namespace

SideModel train_side_model(std::span<const WalkRecord> records, Side side, const PipelineConfig& cfg,
                           const std::function<void(const EpochLog&)>& on_epoch) {
  cfg.validate();
  const auto pool = filter_by_side(records, side);
  if (pool.empty()) throw DataError("no records for side " + std::string(side_code(side)));
  const std::size_t side_index = side == Side::Left ? 0 : 1;
  Prepared prepared;
  if (pool.size() >= 2) {
    prepared = prepare(pool, cfg, side_index, kWholeSideFold);
  } else {
    prepared.train_part = pool;
    AugmentConfig aug = cfg.augment;
    aug.seed = fold_seed(cfg.seed, side_index, kWholeSideFold, kAugmentSeed);
    prepared.augmented = augment_dataset(prepared.train_part, aug);
  }
  auto trained = fit(prepared, cfg, side_index, kWholeSideFold, on_epoch);
  SideModel out;
  out.params = std::move(trained.params);
  out.log = std::move(trained.log);
  out.train_records = prepared.train_part.size();
  out.train_records_augmented = prepared.augmented.size();
  out.val_records = prepared.val_part.size();
  return out;
}

LosoReport run_loso(std::span<const WalkRecord> records, const PipelineConfig& cfg,
                    const std::function<void(const FoldProgress&)>& progress) {
  cfg.validate();
  LosoReport report;
  report.head = cfg.model.head;
  report.oracle = cfg.oracle;

  std::vector<std::vector<LosoSplit>> splits_per_side;
  std::vector<FoldTask> tasks;
  for (Side side : cfg.sides) {
    SideResult side_result;
    side_result.side = side;
    const auto group = filter_by_side(records, side);
    const auto subjects = distinct_subjects(group);
    splits_per_side.emplace_back();
    if (subjects.size() < 2) {
      const std::string why = "side " + std::string(side_code(side)) + " skipped: " +
                              std::to_string(subjects.size()) + " subject(s), LOSO needs 2";
      side_result.skipped = why;
      report.warnings.push_back(why);
    } else {
      splits_per_side.back() = loso_splits(group);
    }
    report.sides.push_back(std::move(side_result));
  }
  for (std::size_t slot = 0; slot < report.sides.size(); ++slot) {
    const std::size_t side_index = report.sides[slot].side == Side::Left ? 0 : 1;
    auto& splits = splits_per_side[slot];
    report.sides[slot].folds.resize(splits.size());
    for (std::size_t f = 0; f < splits.size(); ++f) tasks.push_back({slot, side_index, f, &splits[f]});
  }

  std::mutex progress_mutex;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      const auto& task = tasks[k];
      auto& side_result = report.sides[task.side_slot];
      try {
        side_result.folds[task.fold] = run_fold(task, side_result.side, cfg);
      } catch (...) {
        std::lock_guard lock(progress_mutex);
        if (!failure) failure = std::current_exception();
        next = tasks.size();
        return;
      }
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress({side_result.side, task.split->held_out, task.fold, side_result.folds.size(),
                  &side_result.folds[task.fold].report});
      }
    }
  };
  const std::size_t threads = std::min(cfg.jobs, std::max<std::size_t>(tasks.size(), 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (auto& side_result : report.sides) {
    std::vector<EvalReport> fold_reports;
    for (const auto& f : side_result.folds) fold_reports.push_back(f.report);
    side_result.aggregate = merge_reports(fold_reports);
    if (cfg.model.head == Head::PhaseClassification && !cfg.oracle) {
      side_result.aggregate.has_peak_metrics = false;
    }
  }
  return report;
}

AblationReport run_ablation(std::span<const WalkRecord> records, const PipelineConfig& cfg,
                            const std::function<void(const FoldProgress&)>& progress) {
  PipelineConfig gcc_cfg = cfg;
  gcc_cfg.model.head = Head::GccRegression;
  PipelineConfig base_cfg = cfg;
  base_cfg.model.head = Head::PhaseClassification;
  base_cfg.oracle = false;

  AblationReport out;
  out.gccrr = run_loso(records, gcc_cfg, progress);
  out.baseline = run_loso(records, base_cfg, progress);
  for (std::size_t k = 0; k < out.gccrr.sides.size(); ++k) {
    const auto& a = out.gccrr.sides[k];
    const auto& b = out.baseline.sides[k];
    if (a.skipped || b.skipped) continue;
    out.accuracy_delta.emplace_back(a.side, a.aggregate.accuracy - b.aggregate.accuracy);
  }
  return out;
}

json loso_report_to_json(const LosoReport& report, bool detail) {
  json sides = json::array();
  for (const auto& s : report.sides) {
    json folds = json::array();
    for (const auto& f : s.folds) {
      json fj{{"held_out", f.held_out},
              {"train_records", f.train_records},
              {"train_records_augmented", f.train_records_augmented},
              {"val_records", f.val_records},
              {"test_records", f.test_records},
              {"train_subjects", f.train_subjects},
              {"report", report_to_json(f.report, detail)}};
      if (f.log) fj["train_log"] = *f.log;
      folds.push_back(std::move(fj));
    }
    json sj{{"side", side_code(s.side)}, {"folds", std::move(folds)}};
    if (s.skipped) {
      sj["skipped"] = *s.skipped;
    } else {
      sj["aggregate"] = report_to_json(s.aggregate, false);
    }
    sides.push_back(std::move(sj));
  }
  return json{{"head", head_name(report.head)},
              {"oracle", report.oracle},
              {"sides", std::move(sides)},
              {"warnings", report.warnings}};
}

json ablation_report_to_json(const AblationReport& report, bool detail) {
  json delta = json::array();
  for (const auto& [side, d] : report.accuracy_delta) {
    delta.push_back({{"side", side_code(side)}, {"accuracy_delta", d}});
  }
  return json{{"gccrr", loso_report_to_json(report.gccrr, detail)},
              {"baseline", loso_report_to_json(report.baseline, detail)},
              {"accuracy_delta", std::move(delta)}};
}

}  // namespace gccrr
