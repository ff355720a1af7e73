#include "gccrr/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gccrr/checkpoint.hpp"
#include "gccrr/config.hpp"
#include "gccrr/datasets.hpp"
#include "gccrr/error.hpp"
#include "gccrr/gcc_codec.hpp"
#include "gccrr/gradcheck.hpp"
#include "gccrr/io.hpp"
#include "gccrr/metrics.hpp"
#include "gccrr/network.hpp"
#include "gccrr/pipeline.hpp"

namespace gccrr {
namespace {

using nlohmann::json;

template <class... Args>
std::string format(const char* fmt, Args... args) {
  const int n = std::snprintf(nullptr, 0, fmt, args...);
  std::string s(static_cast<std::size_t>(n), '\0');
  std::snprintf(s.data(), s.size() + 1, fmt, args...);
  return s;
}

// Options bound to a copy of the default value; the copy is written into the
// real configuration only when the flag was given on the command line, so a
// --config file can sit between the built-in defaults and explicit flags.
class Overrides {
 public:
  template <class T>
  CLI::Option* value(CLI::App* app, const std::string& name, T& dest, const std::string& help) {
    auto holder = std::make_shared<T>(dest);
    auto* opt = app->add_option(name, *holder, help)->capture_default_str();
    items_.push_back({opt, [holder, &dest] { dest = *holder; }});
    return opt;
  }

  template <class T>
  CLI::Option* choice(CLI::App* app, const std::string& name, T& dest, const std::string& help,
                      std::string default_text, std::function<T(const std::string&)> parse) {
    auto holder = std::make_shared<std::string>(std::move(default_text));
    auto* opt = app->add_option(name, *holder, help)->capture_default_str();
    items_.push_back({opt, [holder, &dest, parse] { dest = parse(*holder); }});
    return opt;
  }

  CLI::Option* flag(CLI::App* app, const std::string& name, bool& dest, bool when_set,
                    const std::string& help) {
    auto* opt = app->add_flag(name, help);
    items_.push_back({opt, [&dest, when_set] { dest = when_set; }});
    return opt;
  }

  void apply() const {
    for (const auto& [opt, assign] : items_) {
      if (opt->count() > 0) assign();
    }
  }

 private:
  std::vector<std::pair<CLI::Option*, std::function<void()>>> items_;
};

struct Settings {
  PipelineConfig pipeline;
  SynthConfig synth;
  std::string config_path;
  std::string out;
};

void load_config(const std::string& path, Settings& s) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file " + path + ": expected a JSON object");
  if (auto it = j.find("synth"); it != j.end()) {
    from_json(*it, s.synth);
    j.erase(it);
  }
  from_json(j, s.pipeline);
}

Side side_arg(const std::string& text) {
  auto side = parse_side(text);
  if (!side) throw ConfigError("side must be L or R, got '" + text + "'");
  return *side;
}

void add_model_flags(CLI::App* app, Overrides& o, PipelineConfig& cfg) {
  o.value(app, "--hidden", cfg.model.hidden_dim, "LSTM units per direction");
  o.value(app, "--layers", cfg.model.num_layers, "stacked Bi-LSTM layers");
  o.value(app, "--fc", cfg.model.fc_hidden, "width of the fully-connected layer");
  o.choice<Head>(app, "--head", cfg.model.head, "regression or classification",
                 std::string(head_name(cfg.model.head)),
                 [](const std::string& t) { return parse_head(t); });
  o.value(app, "--lr", cfg.train.learning_rate, "learning rate");
  o.value(app, "--epochs", cfg.train.epochs, "maximum training epochs");
  o.value(app, "--patience", cfg.train.patience, "early-stopping patience in epochs");
  o.choice<Optimizer>(app, "--optimizer", cfg.train.optimizer, "adam or sgd",
                      std::string(optimizer_name(cfg.train.optimizer)),
                      [](const std::string& t) { return parse_optimizer(t); });
  o.value(app, "--clip", cfg.train.clip_norm, "global gradient norm clip (<= 0 disables)");
  o.value(app, "--copies", cfg.augment.copies_per_record, "stretched copies per training record");
  o.value(app, "--factor-min", cfg.augment.factor_min, "smallest stretch factor");
  o.value(app, "--factor-max", cfg.augment.factor_max, "largest stretch factor");
  o.flag(app, "--integer-factors", cfg.augment.integer_factors, true,
         "draw whole stretch factors only");
  o.value(app, "--train-ratio", cfg.train_ratio, "training share of the train/validation split");
}

void add_peak_flags(CLI::App* app, Overrides& o, PipelineConfig& cfg) {
  o.value(app, "--peak-threshold", cfg.peak.threshold, "minimum |GCC| of a heel-strike peak");
  o.value(app, "--min-separation", cfg.peak.min_separation, "samples between same-side peaks");
  o.value(app, "--prominence", cfg.peak.prominence, "minimum peak prominence");
  o.flag(app, "--no-boundary-peaks", cfg.peak.allow_boundary_peaks, false,
         "ignore extrema on the first and last sample");
  o.value(app, "--window", cfg.match.window_s, "heel-strike matching window in seconds");
  o.value(app, "--phase-threshold", cfg.phase_threshold, "classification-head decision threshold");
}

json events_json(std::span<const GaitEvent> events) {
  json a = json::array();
  for (const auto& e : events) a.push_back({{"i", e.index}, {"k", event_kind_code(e.kind)}});
  return a;
}

// Writes to the -o path, or to `out` when none (or "-") was given.
void emit_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw DataError("cannot write " + path);
  f << text;
  if (!f) throw DataError("failed writing " + path);
}

std::string pct(const std::optional<double>& v, const char* fmt) {
  return v ? format(fmt, *v * 100.0) : std::string("-");
}

std::string metrics_row(const std::string& side, const std::string& fold, std::size_t records,
                        const EvalReport& r) {
  return format("%-5s %-8s %7zu  %11.1f %9s %9s\n", side.c_str(), fold.c_str(), records,
                r.accuracy * 100.0, pct(r.false_peak_rate, "%.2f").c_str(),
                r.timestamp_error_s ? format("%.4f", *r.timestamp_error_s).c_str() : "-");
}

const char* kMetricsHeader = "side  fold     records  Accuracy(%)    FPR(%)     TE(s)\n";

std::string loso_table(const LosoReport& report) {
  std::string s = kMetricsHeader;
  for (const auto& side : report.sides) {
    const std::string code(side_code(side.side));
    if (side.skipped) {
      s += format("%-5s skipped: %s\n", code.c_str(), side.skipped->c_str());
      continue;
    }
    std::size_t total = 0;
    for (const auto& f : side.folds) {
      s += metrics_row(code, f.held_out, f.test_records, f.report);
      total += f.test_records;
    }
    s += metrics_row(code, "all", total, side.aggregate);
  }
  return s;
}

std::string ablation_table(const AblationReport& report) {
  std::string s = "side  GCCRR(%)  baseline(%)  delta(pp)    FPR(%)     TE(s)\n";
  for (std::size_t i = 0; i < report.gccrr.sides.size(); ++i) {
    const auto& g = report.gccrr.sides[i];
    const auto& b = report.baseline.sides[i];
    const std::string code(side_code(g.side));
    if (g.skipped) {
      s += format("%-5s skipped: %s\n", code.c_str(), g.skipped->c_str());
      continue;
    }
    const double delta = g.aggregate.accuracy - b.aggregate.accuracy;
    s += format("%-5s %8.1f %12.1f %+10.1f %9s %9s\n", code.c_str(), g.aggregate.accuracy * 100.0,
                b.aggregate.accuracy * 100.0, delta * 100.0,
                pct(g.aggregate.false_peak_rate, "%.2f").c_str(),
                g.aggregate.timestamp_error_s
                    ? format("%.4f", *g.aggregate.timestamp_error_s).c_str()
                    : "-");
  }
  return s;
}

int cmd_synth(Settings& s, std::ostream& out, std::ostream& err) {
  s.synth.validate();
  const auto records = generate_dataset(s.synth);
  const std::string msg = format("wrote %zu records for %zu subjects", records.size(),
                                 s.synth.num_subjects);
  if (s.out.empty() || s.out == "-") {
    emit_records(records, out);
    err << msg << '\n';
  } else {
    write_records(records, s.out);
    out << msg << " to " << s.out << '\n';
  }
  return kExitOk;
}

struct TrainArgs {
  std::string data;
  std::string side;
  std::string log;
  bool zero_init = false;
};

int cmd_train(Settings& s, const TrainArgs& a, std::ostream& out, std::ostream& err) {
  if (s.out.empty() || s.out == "-") throw ConfigError("train needs -o/--out for the checkpoint");
  const Side side = side_arg(a.side);
  s.pipeline.validate();
  const auto records = read_records(a.data);

  std::filesystem::path ckpt = s.out;
  std::filesystem::path log_path = a.log;
  if (log_path.empty()) log_path = std::filesystem::path(ckpt).replace_extension(".log.json");

  if (a.zero_init) {
    ModelConfig mc = s.pipeline.model;
    if (!records.empty()) mc.input_dim = static_cast<std::size_t>(records.front().imu.channels());
    save_checkpoint(zero_params(mc), ckpt);
    out << "zero model written to " << ckpt.string() << '\n';
    return kExitOk;
  }

  const std::size_t epochs = s.pipeline.train.epochs;
  auto model = train_side_model(records, side, s.pipeline, [&](const EpochLog& e) {
    err << format("epoch %zu/%zu train %.6f val %.6f\n", e.epoch, epochs, e.train_loss,
                  e.val_loss);
  });
  save_checkpoint(model.params, ckpt);
  json log;
  to_json(log, model.log);
  log["train_records"] = model.train_records;
  log["train_records_augmented"] = model.train_records_augmented;
  log["val_records"] = model.val_records;
  emit_text(log_path.string(), log.dump(2) + "\n", out);

  const double final_val = model.log.epochs.empty() ? 0.0 : model.log.epochs.back().val_loss;
  out << format("trained on %zu records (%zu after augmentation), validated on %zu\n",
                model.train_records, model.train_records_augmented, model.val_records);
  out << format("best epoch %zu val_loss %.6f, final val_loss %.6f\n", model.log.best_epoch,
                model.log.best_val_loss, final_val);
  out << "checkpoint " << ckpt.string() << ", log " << log_path.string() << '\n';
  return kExitOk;
}

struct EvalArgs {
  std::string data;
  std::string model;
  std::string side;
  bool loso = false;
  bool ablation = false;
  bool oracle = false;
  bool no_detail = false;
  std::string checkpoint_dir;
};

int cmd_eval(Settings& s, const EvalArgs& a, std::ostream& out, std::ostream& err) {
  auto& cfg = s.pipeline;
  if (!a.side.empty()) cfg.sides = {side_arg(a.side)};
  if (!a.checkpoint_dir.empty()) cfg.checkpoint_dir = a.checkpoint_dir;
  cfg.oracle = cfg.oracle || a.oracle;
  const int modes = int(a.loso) + int(a.ablation) + int(!a.model.empty());
  if (modes > 1) throw ConfigError("choose one of --loso, --ablation and --model");
  if (modes == 0 && !cfg.oracle) {
    throw ConfigError("eval needs --loso, --ablation, --model or --oracle");
  }
  cfg.validate();
  const auto records = read_records(a.data);
  const bool detail = !a.no_detail;

  auto progress = [&](const FoldProgress& p) {
    err << format("[%s %zu/%zu] %s accuracy %.1f%%\n", std::string(side_code(p.side)).c_str(),
                  p.fold + 1, p.folds, p.held_out.c_str(), p.report->accuracy * 100.0);
  };

  json report;
  if (a.ablation) {
    const auto r = run_ablation(records, cfg, progress);
    for (const auto& w : r.gccrr.warnings) err << "warning: " << w << '\n';
    out << ablation_table(r);
    report = ablation_report_to_json(r, detail);
  } else if (a.loso) {
    const auto r = run_loso(records, cfg, progress);
    for (const auto& w : r.warnings) err << "warning: " << w << '\n';
    out << loso_table(r);
    report = loso_report_to_json(r, detail);
  } else {
    std::vector<WalkRecord> selected;
    for (const auto& r : records) {
      if (std::find(cfg.sides.begin(), cfg.sides.end(), r.side) != cfg.sides.end()) {
        selected.push_back(r);
      }
    }
    if (selected.empty()) throw DataError("no records to evaluate");
    EvalReport r;
    if (!a.model.empty()) {
      const auto params = load_checkpoint(a.model);
      if (params.config.head == Head::GccRegression) {
        std::vector<GccCurve> curves;
        for (const auto& rec : selected) curves.push_back(predict_curve(params, rec.imu));
        r = evaluate(selected, curves, cfg.peak, cfg.match);
      } else {
        std::vector<PhaseSequence> phases;
        for (const auto& rec : selected) {
          phases.push_back(predict_phases(params, rec.imu, cfg.phase_threshold));
        }
        r = evaluate_phases(selected, phases);
      }
    } else {
      std::vector<GccCurve> curves;
      for (const auto& rec : selected) curves.push_back(encode_gcc(rec.events, rec.length()));
      r = evaluate(selected, curves, cfg.peak, cfg.match);
    }
    out << kMetricsHeader << metrics_row("-", "all", selected.size(), r);
    report = report_to_json(r, detail);
  }
  if (!s.out.empty()) emit_text(s.out, report.dump(2) + "\n", out);
  return kExitOk;
}

struct SegmentArgs {
  std::string model;
  std::string data;
  std::optional<std::size_t> record;
  bool emit_gcc = false;
};

int cmd_segment(Settings& s, const SegmentArgs& a, std::ostream& out) {
  s.pipeline.peak.validate();
  const auto params = load_checkpoint(a.model);
  if (params.config.head != Head::GccRegression) {
    throw ConfigError("segment needs a regression-head model");
  }
  const auto records = read_records(a.data);
  std::vector<std::size_t> which;
  if (a.record) {
    if (*a.record >= records.size()) {
      throw ConfigError(format("--record %zu out of range (%zu records)", *a.record,
                               records.size()));
    }
    which.push_back(*a.record);
  } else {
    for (std::size_t k = 0; k < records.size(); ++k) which.push_back(k);
  }

  std::string text;
  for (const std::size_t k : which) {
    const auto& rec = records[k];
    const GccCurve curve = predict_curve(params, rec.imu);
    const auto events = restore_cycle(curve, s.pipeline.peak);
    if (heel_strikes(events).empty()) {
      throw DataError(format("record %zu: no heel strikes restored", k));
    }
    json j{{"record", k},
           {"subject", rec.subject_id},
           {"side", side_code(rec.side)},
           {"length", rec.length()},
           {"events", events_json(events)},
           {"phases", label_phases(events, rec.length()).labels}};
    if (a.emit_gcc) j["gcc"] = curve.values;
    text += j.dump() + "\n";
  }
  emit_text(s.out, text, out);
  return kExitOk;
}

struct GradcheckArgs {
  ModelConfig model;
  GradcheckOptions options;
  std::string head = "regression";
};

int cmd_gradcheck(GradcheckArgs a, std::optional<std::uint64_t> seed, std::ostream& out) {
  a.model.head = parse_head(a.head);
  if (seed) a.options.seed = *seed;
  a.model.validate();
  const auto r = gradcheck(a.model, a.options);
  if (r.pass) {
    out << format("PASS max_rel_err<%.0e (max_rel_err=%.3e over %zu parameters)\n", r.tolerance,
                  r.max_rel_error, r.parameters_checked);
    return kExitOk;
  }
  out << format("FAIL max_rel_err=%.3e exceeds %.0e at %s[%zu] (analytic %.6e, numeric %.6e)\n",
                r.max_rel_error, r.tolerance, r.worst_tensor.c_str(), r.worst_offset,
                r.worst_analytic, r.worst_numeric);
  return kExitRuntime;
}

int cmd_encode(const Settings& s, const std::string& data, std::ostream& out) {
  const auto records = read_records(data);
  std::string text;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& rec = records[k];
    json j{{"record", k},
           {"subject", rec.subject_id},
           {"side", side_code(rec.side)},
           {"length", rec.length()},
           {"events", events_json(rec.events)},
           {"gcc", encode_gcc(rec.events, rec.length()).values},
           {"phases", label_phases(rec.events, rec.length()).labels}};
    text += j.dump() + "\n";
  }
  emit_text(s.out, text, out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  Overrides o;
  CLI::App app{"Gait-cycle segmentation from ear-worn IMU sequences", "gccrr"};
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--config", s.config_path, "JSON configuration overlaid on the defaults");
  std::optional<std::uint64_t> seed;
  auto* seed_opt = app.add_option("--seed", seed, "root seed for data, splits and training")
                       ->default_str("0");
  o.value(&app, "--jobs", s.pipeline.jobs, "worker threads for LOSO folds");
  app.add_option("-o,--out", s.out, "output file (standard output when omitted)");

  auto* synth = app.add_subcommand("synth", "write a synthetic JSONL dataset");
  o.value(synth, "--subjects", s.synth.num_subjects, "number of subjects");
  o.value(synth, "--records", s.synth.records_per_subject, "records per subject");
  o.value(synth, "--cycles-min", s.synth.cycles_min, "fewest gait cycles per record");
  o.value(synth, "--cycles-max", s.synth.cycles_max, "most gait cycles per record");
  o.value(synth, "--cadence-min", s.synth.cadence_min_hz, "slowest cadence (Hz)");
  o.value(synth, "--cadence-max", s.synth.cadence_max_hz, "fastest cadence (Hz)");
  o.value(synth, "--noise", s.synth.noise_sigma, "accelerometer noise sigma (g)");
  o.value(synth, "--impulse-scale", s.synth.impulse_scale, "heel-strike transient strength");
  o.value(synth, "--artifact-rate", s.synth.artifact_rate_hz,
          "spurious head-motion transients per second");
  o.value(synth, "--rate", s.synth.rate_hz, "sampling rate (Hz)");

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "train one model on the records of one side");
  train->add_option("--data", train_args.data, "JSONL records")->required();
  train->add_option("--side", train_args.side, "L or R")->required();
  train->add_option("--log", train_args.log, "training log path (default <out>.log.json)");
  train->add_flag("--zero-init", train_args.zero_init, "write an all-zero model without training");
  add_model_flags(train, o, s.pipeline);

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "score predictions against ground truth");
  eval->add_option("--data", eval_args.data, "JSONL records")->required();
  eval->add_option("--model", eval_args.model, "checkpoint to evaluate");
  eval->add_option("--side", eval_args.side, "restrict to L or R (default both)");
  eval->add_flag("--loso", eval_args.loso, "leave-one-subject-out training and evaluation");
  eval->add_flag("--ablation", eval_args.ablation, "LOSO with the GCC head and the phase baseline");
  eval->add_flag("--oracle", eval_args.oracle, "use the encoded ground truth as prediction");
  eval->add_flag("--no-detail", eval_args.no_detail, "omit per-sequence detail from the report");
  eval->add_option("--checkpoint-dir", eval_args.checkpoint_dir, "save every fold model here");
  add_model_flags(eval, o, s.pipeline);
  add_peak_flags(eval, o, s.pipeline);

  SegmentArgs seg_args;
  std::size_t seg_record = 0;
  auto* segment = app.add_subcommand("segment", "restore gait events and phases with a model");
  segment->add_option("--model", seg_args.model, "regression-head checkpoint")->required();
  segment->add_option("--data", seg_args.data, "JSONL records")->required();
  auto* record_opt =
      segment->add_option("--record", seg_record, "segment only this record (0-based)");
  segment->add_flag("--emit-gcc", seg_args.emit_gcc, "include the predicted curve");
  add_peak_flags(segment, o, s.pipeline);

  GradcheckArgs gc;
  gc.model.hidden_dim = 8;
  gc.model.fc_hidden = 16;
  auto* grad = app.add_subcommand("gradcheck", "compare backprop with finite differences");
  grad->add_option("--hidden", gc.model.hidden_dim, "LSTM units per direction")
      ->capture_default_str();
  grad->add_option("--layers", gc.model.num_layers, "stacked layers")->capture_default_str();
  grad->add_option("--fc", gc.model.fc_hidden, "fully-connected width")->capture_default_str();
  grad->add_option("--channels", gc.model.input_dim, "input channels")->capture_default_str();
  grad->add_option("--length", gc.options.length, "sequence length")->capture_default_str();
  grad->add_option("--tol", gc.options.tolerance, "relative error tolerance")
      ->capture_default_str();
  grad->add_option("--step", gc.options.step, "central-difference step")->capture_default_str();
  grad->add_option("--head", gc.head, "regression or classification")->capture_default_str();

  std::string encode_data;
  auto* encode = app.add_subcommand("encode-gcc", "write ground-truth curves and phases");
  encode->add_option("--data", encode_data, "JSONL records")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (!s.config_path.empty()) load_config(s.config_path, s);
    o.apply();
    if (seed_opt->count() > 0) {
      s.pipeline.seed = *seed;
      s.synth.seed = *seed;
    }
    if (record_opt->count() > 0) seg_args.record = seg_record;

    if (synth->parsed()) return cmd_synth(s, out, err);
    if (train->parsed()) return cmd_train(s, train_args, out, err);
    if (eval->parsed()) return cmd_eval(s, eval_args, out, err);
    if (segment->parsed()) return cmd_segment(s, seg_args, out);
    if (grad->parsed()) return cmd_gradcheck(gc, seed, out);
    if (encode->parsed()) return cmd_encode(s, encode_data, out);
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace gccrr
