#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gccrr/types.hpp"

namespace gccrr {

// Anchor values of the Gait Characteristic Curve.
inline constexpr double kLeftHeelStrikeValue = 1.0;
inline constexpr double kRightHeelStrikeValue = -1.0;
inline constexpr double kToeOffValue = 0.0;

double anchor_value(EventKind kind);

struct PeakConfig {
  double threshold = 0.5;         // minimum |value| of a candidate extremum, in (0, 1]
  std::size_t min_separation = 10;  // samples between kept extrema of one sign
  double prominence = 0.5;
  bool allow_boundary_peaks = true;

  // Throws ConfigError.
  void validate() const;
};

struct PeakSet {
  std::vector<std::size_t> maxima;
  std::vector<std::size_t> minima;

  friend bool operator==(const PeakSet&, const PeakSet&) = default;
};

// Piecewise-linear curve through the event anchors (LHS = 1, RHS = -1,
// TO = 0). Outside the first/last anchor the nearest two anchors are
// extrapolated and clamped to [-1, 1]; when that anchor is a heel strike the
// extrapolation is mirrored so the curve falls away from it, towards zero
// but not past it. A single anchor
// extends as a constant.
// Throws DataError on empty, unsorted or out-of-range events.
GccCurve encode_gcc(std::span<const GaitEvent> events, std::size_t length);

// P_i = 0 from a left heel strike up to the next right heel strike, 1 from a
// right heel strike up to the next left one. Samples before the first heel
// strike take the phase preceding it. Throws DataError without heel strikes.
PhaseSequence label_phases(std::span<const GaitEvent> events, std::size_t length);

// Thresholded, prominence- and separation-filtered extrema. Interior plateaus
// report their leftmost index; a plateau clamped against the left boundary
// reports its innermost index (where the extremum ends).
PeakSet detect_peaks(const GccCurve& curve, const PeakConfig& cfg);

// Maxima become left heel strikes, minima right heel strikes. Runs of
// same-side events keep only the most extreme one, so the output alternates.
std::vector<GaitEvent> restore_cycle(const GccCurve& curve, const PeakConfig& cfg);

// label_phases(restore_cycle(curve), length); throws DataError
// "no heel strikes restored" when restoration finds nothing.
PhaseSequence events_to_phase_via_restoration(const GccCurve& curve,
                                              const PeakConfig& cfg,
                                              std::size_t length);

}  // namespace gccrr
