#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "gccrr/types.hpp"

namespace gccrr {

// JSONL dataset format, one record per line:
//   {"subject": "S01", "side": "L", "modality": "normal", "rate_hz": 30,
//    "imu": [[ax, ay, az, gx, gy, gz], ...],
//    "events": [{"i": 12, "k": "LHS"}, ...]}
nlohmann::json record_to_json(const WalkRecord& record);

// Throws DataError naming the offending field.
WalkRecord record_from_json(const nlohmann::json& line);

// Throws DataError("line N: ...") on the first malformed line. Blank lines
// are skipped.
std::vector<WalkRecord> parse_records(std::istream& in);
void emit_records(std::span<const WalkRecord> records, std::ostream& out);

std::vector<WalkRecord> read_records(const std::filesystem::path& path);
void write_records(std::span<const WalkRecord> records,
                   const std::filesystem::path& path);

}  // namespace gccrr
