#include "gccrr/types.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <utility>

namespace gccrr {

namespace {

std::string upper(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

}  // namespace

std::string_view side_code(Side side) {
  return side == Side::Left ? "L" : "R";
}

std::optional<Side> parse_side(std::string_view text) {
  const std::string key = upper(text);
  if (key == "L" || key == "LEFT") return Side::Left;
  if (key == "R" || key == "RIGHT") return Side::Right;
  return std::nullopt;
}

std::string_view event_kind_code(EventKind kind) {
  switch (kind) {
    case EventKind::LeftHeelStrike:
      return "LHS";
    case EventKind::RightHeelStrike:
      return "RHS";
    case EventKind::ToeOff:
      return "TO";
  }
  return "TO";
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
  static const std::array<std::pair<std::string_view, EventKind>, 14> kAliases{{
      {"LHS", EventKind::LeftHeelStrike},
      {"HS_L", EventKind::LeftHeelStrike},
      {"LEFT_HEEL_STRIKE", EventKind::LeftHeelStrike},
      {"LEFTHEELSTRIKE", EventKind::LeftHeelStrike},
      {"RHS", EventKind::RightHeelStrike},
      {"HS_R", EventKind::RightHeelStrike},
      {"RIGHT_HEEL_STRIKE", EventKind::RightHeelStrike},
      {"RIGHTHEELSTRIKE", EventKind::RightHeelStrike},
      {"TO", EventKind::ToeOff},
      {"LTO", EventKind::ToeOff},
      {"RTO", EventKind::ToeOff},
      {"TOE_OFF", EventKind::ToeOff},
      {"LEFT_TOE_OFF", EventKind::ToeOff},
      {"RIGHT_TOE_OFF", EventKind::ToeOff},
  }};
  const std::string key = upper(text);
  for (const auto& [alias, kind] : kAliases) {
    if (key == alias) return kind;
  }
  return std::nullopt;
}

std::vector<GaitEvent> heel_strikes(std::span<const GaitEvent> events) {
  std::vector<GaitEvent> out;
  std::copy_if(events.begin(), events.end(), std::back_inserter(out),
               [](const GaitEvent& e) { return is_heel_strike(e.kind); });
  return out;
}

ValidationResult validate_record(const WalkRecord& record,
                                 const ValidationOptions& options) {
  ValidationResult result;
  auto& v = result.violations;
  const auto& imu = record.imu;
  const std::size_t length = imu.length();

  if (length < 2) v.emplace_back("sequence shorter than 2 samples");
  if (imu.channels() < 1) v.emplace_back("sequence has no channels");
  if (!(imu.rate_hz > 0.0) || !std::isfinite(imu.rate_hz)) {
    v.emplace_back("sampling rate must be positive");
  }
  if (imu.samples.size() > 0 && !imu.samples.allFinite()) {
    v.emplace_back("non-finite sample value");
  }

  bool out_of_bounds = false;
  bool unordered = false;
  for (std::size_t k = 0; k < record.events.size(); ++k) {
    if (record.events[k].index >= length) out_of_bounds = true;
    if (k > 0 && record.events[k].index <= record.events[k - 1].index) {
      unordered = true;
    }
  }
  if (out_of_bounds) v.emplace_back("event out of bounds");
  if (unordered) v.emplace_back("events not strictly increasing");

  const auto strikes = heel_strikes(record.events);
  for (std::size_t k = 1; k < strikes.size(); ++k) {
    if (strikes[k].kind == strikes[k - 1].kind) {
      v.emplace_back("heel strikes do not alternate");
      break;
    }
  }

  if (options.require_both_sides) {
    const bool has_left = std::any_of(strikes.begin(), strikes.end(), [](const GaitEvent& e) {
      return e.kind == EventKind::LeftHeelStrike;
    });
    const bool has_right = std::any_of(strikes.begin(), strikes.end(), [](const GaitEvent& e) {
      return e.kind == EventKind::RightHeelStrike;
    });
    if (!has_left || !has_right) {
      v.emplace_back("record lacks a heel strike of each side");
    }
  }
  return result;
}

}  // namespace gccrr
