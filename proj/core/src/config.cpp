#include "gccrr/config.hpp"

#include <initializer_list>
#include <string>

#include "gccrr/error.hpp"

namespace gccrr {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::string_view section, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(std::string(section) + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw ConfigError(std::string(section) + ": unknown key '" + key + "'");
  }
}

template <typename T>
void overlay(const json& j, const char* key, T& dst, std::string_view section) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    dst = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(section) + "." + key + ": wrong type");
  }
}

}  // namespace

std::string_view head_name(Head head) {
  return head == Head::GccRegression ? "regression" : "classification";
}

Head parse_head(std::string_view text) {
  if (text == "regression" || text == "gcc") return Head::GccRegression;
  if (text == "classification" || text == "phase") return Head::PhaseClassification;
  throw ConfigError("unknown head '" + std::string(text) + "'");
}

std::string_view optimizer_name(Optimizer opt) { return opt == Optimizer::Adam ? "adam" : "sgd"; }

Optimizer parse_optimizer(std::string_view text) {
  if (text == "adam") return Optimizer::Adam;
  if (text == "sgd") return Optimizer::Sgd;
  throw ConfigError("unknown optimizer '" + std::string(text) + "'");
}

void to_json(json& j, const ModelConfig& c) {
  j = json{{"input_dim", c.input_dim}, {"hidden_dim", c.hidden_dim},
           {"num_layers", c.num_layers}, {"fc_hidden", c.fc_hidden},
           {"head", head_name(c.head)},  {"seed", c.seed}};
}

void from_json(const json& j, ModelConfig& c) {
  check_keys(j, "model", {"input_dim", "hidden_dim", "num_layers", "fc_hidden", "head", "seed"});
  overlay(j, "input_dim", c.input_dim, "model");
  overlay(j, "hidden_dim", c.hidden_dim, "model");
  overlay(j, "num_layers", c.num_layers, "model");
  overlay(j, "fc_hidden", c.fc_hidden, "model");
  overlay(j, "seed", c.seed, "model");
  if (auto it = j.find("head"); it != j.end()) {
    if (!it->is_string()) throw ConfigError("model.head: wrong type");
    c.head = parse_head(it->get<std::string>());
  }
}

void to_json(json& j, const TrainConfig& c) {
  j = json{{"learning_rate", c.learning_rate}, {"epochs", c.epochs},
           {"patience", c.patience},           {"optimizer", optimizer_name(c.optimizer)},
           {"beta1", c.beta1},                 {"beta2", c.beta2},
           {"epsilon", c.epsilon},             {"clip_norm", c.clip_norm},
           {"seed", c.seed}};
}

void from_json(const json& j, TrainConfig& c) {
  check_keys(j, "train", {"learning_rate", "epochs", "patience", "optimizer", "beta1", "beta2",
                          "epsilon", "clip_norm", "seed"});
  overlay(j, "learning_rate", c.learning_rate, "train");
  overlay(j, "epochs", c.epochs, "train");
  overlay(j, "patience", c.patience, "train");
  overlay(j, "beta1", c.beta1, "train");
  overlay(j, "beta2", c.beta2, "train");
  overlay(j, "epsilon", c.epsilon, "train");
  overlay(j, "clip_norm", c.clip_norm, "train");
  overlay(j, "seed", c.seed, "train");
  if (auto it = j.find("optimizer"); it != j.end()) {
    if (!it->is_string()) throw ConfigError("train.optimizer: wrong type");
    c.optimizer = parse_optimizer(it->get<std::string>());
  }
}

void to_json(json& j, const AugmentConfig& c) {
  j = json{{"factor_min", c.factor_min},
           {"factor_max", c.factor_max},
           {"copies_per_record", c.copies_per_record},
           {"integer_factors", c.integer_factors},
           {"seed", c.seed}};
}

void from_json(const json& j, AugmentConfig& c) {
  check_keys(j, "augment", {"factor_min", "factor_max", "copies_per_record", "integer_factors", "seed"});
  overlay(j, "factor_min", c.factor_min, "augment");
  overlay(j, "factor_max", c.factor_max, "augment");
  overlay(j, "copies_per_record", c.copies_per_record, "augment");
  overlay(j, "integer_factors", c.integer_factors, "augment");
  overlay(j, "seed", c.seed, "augment");
}

void to_json(json& j, const PeakConfig& c) {
  j = json{{"threshold", c.threshold},
           {"min_separation", c.min_separation},
           {"prominence", c.prominence},
           {"allow_boundary_peaks", c.allow_boundary_peaks}};
}

void from_json(const json& j, PeakConfig& c) {
  check_keys(j, "peak", {"threshold", "min_separation", "prominence", "allow_boundary_peaks"});
  overlay(j, "threshold", c.threshold, "peak");
  overlay(j, "min_separation", c.min_separation, "peak");
  overlay(j, "prominence", c.prominence, "peak");
  overlay(j, "allow_boundary_peaks", c.allow_boundary_peaks, "peak");
}

void to_json(json& j, const MatchConfig& c) { j = json{{"window_s", c.window_s}}; }

void from_json(const json& j, MatchConfig& c) {
  check_keys(j, "match", {"window_s"});
  overlay(j, "window_s", c.window_s, "match");
}

void to_json(json& j, const SynthConfig& c) {
  j = json{{"num_subjects", c.num_subjects},
           {"records_per_subject", c.records_per_subject},
           {"cycles_min", c.cycles_min},
           {"cycles_max", c.cycles_max},
           {"cadence_min_hz", c.cadence_min_hz},
           {"cadence_max_hz", c.cadence_max_hz},
           {"noise_sigma", c.noise_sigma},
           {"impulse_scale", c.impulse_scale},
           {"artifact_rate_hz", c.artifact_rate_hz},
           {"rate_hz", c.rate_hz},
           {"seed", c.seed}};
}

void from_json(const json& j, SynthConfig& c) {
  check_keys(j, "synth", {"num_subjects", "records_per_subject", "cycles_min", "cycles_max",
                          "cadence_min_hz", "cadence_max_hz", "noise_sigma", "impulse_scale", "artifact_rate_hz",
                          "rate_hz", "seed"});
  overlay(j, "num_subjects", c.num_subjects, "synth");
  overlay(j, "records_per_subject", c.records_per_subject, "synth");
  overlay(j, "cycles_min", c.cycles_min, "synth");
  overlay(j, "cycles_max", c.cycles_max, "synth");
  overlay(j, "cadence_min_hz", c.cadence_min_hz, "synth");
  overlay(j, "cadence_max_hz", c.cadence_max_hz, "synth");
  overlay(j, "noise_sigma", c.noise_sigma, "synth");
  overlay(j, "impulse_scale", c.impulse_scale, "synth");
  overlay(j, "artifact_rate_hz", c.artifact_rate_hz, "synth");
  overlay(j, "rate_hz", c.rate_hz, "synth");
  overlay(j, "seed", c.seed, "synth");
}

void to_json(json& j, const TrainLog& log) {
  json epochs = json::array();
  for (const auto& e : log.epochs) {
    epochs.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"val_loss", e.val_loss}});
  }
  j = json{{"best_epoch", log.best_epoch},
           {"best_val_loss", log.best_val_loss},
           {"stopped_early", log.stopped_early},
           {"epochs", std::move(epochs)}};
}

json report_to_json(const EvalReport& r, bool detail) {
  json j{{"accuracy", r.accuracy},
         {"sequences", r.sequences},
         {"total_timestamps", r.total_timestamps},
         {"correct_timestamps", r.correct_timestamps}};
  if (r.has_peak_metrics) {
    j["false_peak_sequences"] = r.false_peak_sequences;
    j["matched_events"] = r.matched_events;
    j["false_peak_rate"] = r.false_peak_rate ? json(*r.false_peak_rate) : json(nullptr);
    j["timestamp_error_s"] = r.timestamp_error_s ? json(*r.timestamp_error_s) : json(nullptr);
  }
  if (detail) {
    json seqs = json::array();
    for (const auto& s : r.per_sequence) {
      json e{{"subject", s.subject_id}, {"length", s.length}, {"correct", s.correct}};
      if (r.has_peak_metrics) {
        e["restored"] = s.restored;
        e["truth_lhs"] = s.counts.truth_left;
        e["truth_rhs"] = s.counts.truth_right;
        e["pred_lhs"] = s.counts.pred_left;
        e["pred_rhs"] = s.counts.pred_right;
        e["matched"] = s.matched;
        e["abs_error_samples"] = s.abs_error_samples;
      }
      seqs.push_back(std::move(e));
    }
    j["per_sequence"] = std::move(seqs);
  }
  return j;
}

}  // namespace gccrr
