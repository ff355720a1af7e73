#include "gccrr/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "gccrr/error.hpp"

namespace gccrr {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(std::string_view field, std::string_view what) {
  throw DataError("field '" + std::string(field) + "': " + std::string(what));
}

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) field_error(key, "missing");
  return *it;
}

}  // namespace

json record_to_json(const WalkRecord& record) {
  json imu = json::array();
  const auto& samples = record.imu.samples;
  for (Eigen::Index t = 0; t < samples.rows(); ++t) {
    json row = json::array();
    for (Eigen::Index c = 0; c < samples.cols(); ++c) row.push_back(samples(t, c));
    imu.push_back(std::move(row));
  }
  json events = json::array();
  for (const auto& e : record.events) {
    events.push_back({{"i", e.index}, {"k", event_kind_code(e.kind)}});
  }
  return json{{"subject", record.subject_id},
              {"side", side_code(record.side)},
              {"modality", record.modality},
              {"rate_hz", record.imu.rate_hz},
              {"imu", std::move(imu)},
              {"events", std::move(events)}};
}

WalkRecord record_from_json(const json& line) {
  if (!line.is_object()) throw DataError("record is not a JSON object");
  WalkRecord record;

  const auto& subject = require(line, "subject");
  if (!subject.is_string()) field_error("subject", "expected string");
  record.subject_id = subject.get<std::string>();

  const auto& side = require(line, "side");
  if (!side.is_string()) field_error("side", "expected \"L\" or \"R\"");
  auto parsed_side = parse_side(side.get<std::string>());
  if (!parsed_side) field_error("side", "expected \"L\" or \"R\"");
  record.side = *parsed_side;

  if (auto it = line.find("modality"); it != line.end()) {
    if (!it->is_string()) field_error("modality", "expected string");
    record.modality = it->get<std::string>();
  }

  const auto& rate = require(line, "rate_hz");
  if (!rate.is_number()) field_error("rate_hz", "expected number");
  record.imu.rate_hz = rate.get<double>();

  const auto& imu = require(line, "imu");
  if (!imu.is_array() || imu.empty()) field_error("imu", "expected non-empty array of rows");
  const std::size_t length = imu.size();
  if (!imu.front().is_array() || imu.front().empty()) {
    field_error("imu", "row 0 is not a non-empty array");
  }
  const std::size_t channels = imu.front().size();
  record.imu.samples.resize(static_cast<Eigen::Index>(length),
                            static_cast<Eigen::Index>(channels));
  for (std::size_t t = 0; t < length; ++t) {
    const auto& row = imu[t];
    if (!row.is_array() || row.size() != channels) {
      field_error("imu", "row " + std::to_string(t) + " has wrong channel count");
    }
    for (std::size_t c = 0; c < channels; ++c) {
      if (!row[c].is_number()) {
        field_error("imu", "non-numeric sample at row " + std::to_string(t) +
                               ", channel " + std::to_string(c));
      }
      record.imu.samples(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c)) =
          row[c].get<double>();
    }
  }

  const auto& events = require(line, "events");
  if (!events.is_array()) field_error("events", "expected array");
  for (std::size_t k = 0; k < events.size(); ++k) {
    const auto& e = events[k];
    const std::string where = "events[" + std::to_string(k) + "]";
    if (!e.is_object()) field_error(where, "expected object");
    auto idx = e.find("i");
    if (idx == e.end() || !idx->is_number_integer() || idx->get<long long>() < 0) {
      field_error(where + ".i", "expected non-negative integer");
    }
    auto kind = e.find("k");
    if (kind == e.end() || !kind->is_string()) field_error(where + ".k", "expected string");
    auto parsed = parse_event_kind(kind->get<std::string>());
    if (!parsed) {
      field_error(where + ".k", "unknown event kind \"" + kind->get<std::string>() + "\"");
    }
    record.events.push_back({static_cast<std::size_t>(idx->get<long long>()), *parsed});
  }
  return record;
}

std::vector<WalkRecord> parse_records(std::istream& in) {
  std::vector<WalkRecord> records;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(record_from_json(json::parse(text)));
    } catch (const json::exception& e) {
      throw DataError("line " + std::to_string(line_no) + ": invalid JSON: " + e.what());
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

void emit_records(std::span<const WalkRecord> records, std::ostream& out) {
  for (const auto& r : records) out << record_to_json(r).dump() << '\n';
}

std::vector<WalkRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset " + path.string());
  return parse_records(in);
}

void write_records(std::span<const WalkRecord> records,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write dataset " + path.string());
  emit_records(records, out);
  if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace gccrr
