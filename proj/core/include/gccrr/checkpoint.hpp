#pragma once

#include <filesystem>
#include <string_view>

#include <nlohmann/json.hpp>

#include "gccrr/network.hpp"

namespace gccrr {

inline constexpr std::string_view kCheckpointFormat = "gccrr-checkpoint/1";

// {"format": ..., "model": ModelConfig, "input_mean": [...], "input_scale": [...],
//  "tensors": [{"name", "rows", "cols", "values": [column-major]}]}
nlohmann::json checkpoint_to_json(const ModelParams& params);
// Throws DataError on format tag, shape or name mismatch.
ModelParams checkpoint_from_json(const nlohmann::json& j);

void save_checkpoint(const ModelParams& params, const std::filesystem::path& path);
ModelParams load_checkpoint(const std::filesystem::path& path);

}  // namespace gccrr
