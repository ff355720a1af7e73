#include "gccrr/checkpoint.hpp"

#include <fstream>
#include <string>

#include "gccrr/config.hpp"
#include "gccrr/error.hpp"

namespace gccrr {

using nlohmann::json;

json checkpoint_to_json(const ModelParams& params) {
  const ParamLayout layout(params.config);
  json tensors = json::array();
  for (const auto& t : layout.tensors()) {
    json values = json::array();
    for (std::size_t k = 0; k < t.size(); ++k) values.push_back(params.weights[t.offset + k]);
    tensors.push_back({{"name", t.name}, {"rows", t.rows}, {"cols", t.cols}, {"values", std::move(values)}});
  }
  const auto& s = params.scaling;
  return json{{"format", kCheckpointFormat},
              {"model", params.config},
              {"input_mean", std::vector<double>(s.mean.data(), s.mean.data() + s.mean.size())},
              {"input_scale", std::vector<double>(s.scale.data(), s.scale.data() + s.scale.size())},
              {"tensors", std::move(tensors)}};
}

ModelParams checkpoint_from_json(const json& j) {
  try {
    if (!j.is_object() || j.value("format", "") != kCheckpointFormat) {
      throw DataError("checkpoint: missing or unsupported format tag");
    }
    ModelConfig cfg;
    j.at("model").get_to(cfg);
    const ParamLayout layout(cfg);
    ModelParams params{cfg, ParamVector(layout.total(), 0.0), {}};

    const auto mean = j.at("input_mean").get<std::vector<double>>();
    const auto scale = j.at("input_scale").get<std::vector<double>>();
    if (mean.size() != cfg.input_dim || scale.size() != cfg.input_dim) {
      throw DataError("checkpoint: input scaling size mismatch");
    }
    params.scaling.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
    params.scaling.scale = Eigen::Map<const Eigen::VectorXd>(scale.data(), static_cast<Eigen::Index>(scale.size()));

    const auto& tensors = j.at("tensors");
    if (!tensors.is_array() || tensors.size() != layout.tensors().size()) {
      throw DataError("checkpoint: tensor count mismatch");
    }
    for (std::size_t k = 0; k < tensors.size(); ++k) {
      const auto& spec = layout.tensors()[k];
      const auto& t = tensors[k];
      if (t.at("name").get<std::string>() != spec.name || t.at("rows").get<Eigen::Index>() != spec.rows ||
          t.at("cols").get<Eigen::Index>() != spec.cols) {
        throw DataError("checkpoint: tensor '" + spec.name + "' does not match the model config");
      }
      const auto values = t.at("values").get<std::vector<double>>();
      if (values.size() != spec.size()) throw DataError("checkpoint: tensor '" + spec.name + "' has wrong size");
      std::copy(values.begin(), values.end(), params.weights.begin() + static_cast<std::ptrdiff_t>(spec.offset));
    }
    return params;
  } catch (const json::exception& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  } catch (const ConfigError& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  }
}

void save_checkpoint(const ModelParams& params, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  out << checkpoint_to_json(params).dump() << '\n';
  if (!out) throw DataError("write failed for " + path.string());
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("checkpoint " + path.string() + ": " + e.what());
  }
  return checkpoint_from_json(j);
}

}  // namespace gccrr
