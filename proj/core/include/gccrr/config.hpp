#pragma once

#include <string_view>

#include <nlohmann/json.hpp>

#include "gccrr/augment.hpp"
#include "gccrr/datasets.hpp"
#include "gccrr/gcc_codec.hpp"
#include "gccrr/metrics.hpp"
#include "gccrr/network.hpp"
#include "gccrr/training.hpp"

namespace gccrr {

// JSON form of the configuration types. from_json overlays only the keys
// present on top of the target's current values and throws ConfigError on
// unknown keys or wrongly typed values.

std::string_view head_name(Head head);  // "regression" / "classification"
Head parse_head(std::string_view text);
std::string_view optimizer_name(Optimizer opt);  // "adam" / "sgd"
Optimizer parse_optimizer(std::string_view text);

void to_json(nlohmann::json& j, const ModelConfig& cfg);
void from_json(const nlohmann::json& j, ModelConfig& cfg);
void to_json(nlohmann::json& j, const TrainConfig& cfg);
void from_json(const nlohmann::json& j, TrainConfig& cfg);
void to_json(nlohmann::json& j, const AugmentConfig& cfg);
void from_json(const nlohmann::json& j, AugmentConfig& cfg);
void to_json(nlohmann::json& j, const PeakConfig& cfg);
void from_json(const nlohmann::json& j, PeakConfig& cfg);
void to_json(nlohmann::json& j, const MatchConfig& cfg);
void from_json(const nlohmann::json& j, MatchConfig& cfg);
void to_json(nlohmann::json& j, const SynthConfig& cfg);
void from_json(const nlohmann::json& j, SynthConfig& cfg);

void to_json(nlohmann::json& j, const TrainLog& log);
// Summary fields plus per-sequence detail when `detail` is set.
nlohmann::json report_to_json(const EvalReport& report, bool detail = true);

}  // namespace gccrr
