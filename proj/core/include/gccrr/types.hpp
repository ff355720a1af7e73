#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace gccrr {

enum class Side : std::uint8_t { Left, Right };

enum class EventKind : std::uint8_t { LeftHeelStrike, RightHeelStrike, ToeOff };

inline constexpr std::size_t kDefaultChannels = 6;
inline constexpr double kDefaultRateHz = 30.0;

// "L" / "R"
std::string_view side_code(Side side);
std::optional<Side> parse_side(std::string_view text);

// "LHS" / "RHS" / "TO"; parse_event_kind also accepts the alias table
// (case-insensitive long names, LTO/RTO collapsed to TO).
std::string_view event_kind_code(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view text);

constexpr bool is_heel_strike(EventKind kind) {
  return kind != EventKind::ToeOff;
}

constexpr EventKind heel_strike_of(Side foot) {
  return foot == Side::Left ? EventKind::LeftHeelStrike
                            : EventKind::RightHeelStrike;
}

struct GaitEvent {
  std::size_t index = 0;
  EventKind kind = EventKind::ToeOff;

  friend bool operator==(const GaitEvent&, const GaitEvent&) = default;
};

// T x C samples, one row per timestamp. Accelerometer channels in g,
// gyroscope channels in deg/s for the default six-channel layout.
struct ImuSequence {
  Eigen::MatrixXd samples;
  double rate_hz = kDefaultRateHz;

  std::size_t length() const { return static_cast<std::size_t>(samples.rows()); }
  std::size_t channels() const { return static_cast<std::size_t>(samples.cols()); }

  friend bool operator==(const ImuSequence& a, const ImuSequence& b) {
    return a.rate_hz == b.rate_hz && a.samples.rows() == b.samples.rows() &&
           a.samples.cols() == b.samples.cols() && a.samples == b.samples;
  }
};

struct WalkRecord {
  std::string subject_id;
  Side side = Side::Left;
  std::string modality = "normal";
  ImuSequence imu;
  std::vector<GaitEvent> events;

  std::size_t length() const { return imu.length(); }

  friend bool operator==(const WalkRecord&, const WalkRecord&) = default;
};

struct GccCurve {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  friend bool operator==(const GccCurve&, const GccCurve&) = default;
};

struct PhaseSequence {
  std::vector<std::uint8_t> labels;

  std::size_t size() const { return labels.size(); }
  friend bool operator==(const PhaseSequence&, const PhaseSequence&) = default;
};

std::vector<GaitEvent> heel_strikes(std::span<const GaitEvent> events);

struct ValidationResult {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

struct ValidationOptions {
  // Training targets need at least one heel strike of each side.
  bool require_both_sides = false;
};

ValidationResult validate_record(const WalkRecord& record,
                                 const ValidationOptions& options = {});

}  // namespace gccrr
