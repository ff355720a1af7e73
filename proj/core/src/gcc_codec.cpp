#include "gccrr/gcc_codec.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "gccrr/error.hpp"

namespace gccrr {

double anchor_value(EventKind kind) {
  switch (kind) {
    case EventKind::LeftHeelStrike:
      return kLeftHeelStrikeValue;
    case EventKind::RightHeelStrike:
      return kRightHeelStrikeValue;
    case EventKind::ToeOff:
      return kToeOffValue;
  }
  return kToeOffValue;
}

void PeakConfig::validate() const {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ConfigError("peak threshold must lie in (0, 1]");
  }
  if (min_separation < 1) throw ConfigError("peak min_separation must be >= 1");
  if (!(prominence >= 0.0)) throw ConfigError("peak prominence must be >= 0");
}

GccCurve encode_gcc(std::span<const GaitEvent> events, std::size_t length) {
  if (events.empty()) throw DataError("encode_gcc: empty event list");
  for (std::size_t k = 0; k < events.size(); ++k) {
    if (events[k].index >= length) throw DataError("encode_gcc: event out of bounds");
    if (k > 0 && events[k].index <= events[k - 1].index) {
      throw DataError("encode_gcc: events not strictly increasing");
    }
  }

  GccCurve curve;
  curve.values.assign(length, anchor_value(events.front().kind));
  if (events.size() == 1) return curve;

  auto line = [](const GaitEvent& a, const GaitEvent& b, double i) {
    const double va = anchor_value(a.kind);
    const double vb = anchor_value(b.kind);
    const double span = static_cast<double>(b.index) - static_cast<double>(a.index);
    return va + (vb - va) * (i - static_cast<double>(a.index)) / span;
  };

  for (std::size_t k = 0; k + 1 < events.size(); ++k) {
    for (std::size_t i = events[k].index; i <= events[k + 1].index; ++i) {
      curve.values[i] = line(events[k], events[k + 1], static_cast<double>(i));
    }
  }
  // Past a heel-strike end anchor the adjacent segment is mirrored, so the
  // strike stays a strict extremum instead of saturating into a plateau. The
  // mirrored part stops at zero and never forms an opposite-side extremum.
  auto edge = [&](const GaitEvent& anchor, double value) {
    if (!is_heel_strike(anchor.kind)) return std::clamp(value, -1.0, 1.0);
    return anchor_value(anchor.kind) > 0 ? std::clamp(value, 0.0, 1.0) : std::clamp(value, -1.0, 0.0);
  };
  const auto& first = events[0];
  const auto& second = events[1];
  const bool mirror_first = is_heel_strike(first.kind);
  for (std::size_t i = 0; i < first.index; ++i) {
    const double at = static_cast<double>(i);
    const double x = mirror_first ? 2.0 * static_cast<double>(first.index) - at : at;
    curve.values[i] = edge(first, line(first, second, x));
  }
  const auto& last = events[events.size() - 1];
  const auto& before_last = events[events.size() - 2];
  const bool mirror_last = is_heel_strike(last.kind);
  for (std::size_t i = last.index + 1; i < length; ++i) {
    const double at = static_cast<double>(i);
    const double x = mirror_last ? 2.0 * static_cast<double>(last.index) - at : at;
    curve.values[i] = edge(last, line(before_last, last, x));
  }
  return curve;
}

PhaseSequence label_phases(std::span<const GaitEvent> events, std::size_t length) {
  const auto strikes = heel_strikes(events);
  if (strikes.empty()) throw DataError("label_phases: no heel-strike events");

  auto phase_after = [](EventKind kind) -> std::uint8_t {
    return kind == EventKind::LeftHeelStrike ? 0 : 1;
  };

  PhaseSequence phases;
  phases.labels.assign(length, static_cast<std::uint8_t>(1 - phase_after(strikes.front().kind)));
  for (std::size_t k = 0; k < strikes.size(); ++k) {
    const std::size_t begin = std::min(strikes[k].index, length);
    const std::size_t end = k + 1 < strikes.size() ? std::min(strikes[k + 1].index, length) : length;
    std::fill(phases.labels.begin() + static_cast<std::ptrdiff_t>(begin),
              phases.labels.begin() + static_cast<std::ptrdiff_t>(end),
              phase_after(strikes[k].kind));
  }
  return phases;
}

namespace {

struct BaseScan {
  std::optional<double> low;
  bool closed = false;
};

struct Candidate {
  std::size_t index;
  double value;
};

// Local maxima of `values` satisfying threshold, prominence and separation.
std::vector<std::size_t> find_maxima(std::span<const double> values, const PeakConfig& cfg) {
  const std::size_t n = values.size();
  std::vector<Candidate> candidates;

  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start;
    while (end + 1 < n && values[end + 1] == values[start]) ++end;
    const double v = values[start];
    const bool has_left = start > 0;
    const bool has_right = end + 1 < n;

    std::optional<std::size_t> reported;
    if (has_left && has_right) {
      if (values[start - 1] < v && values[end + 1] < v) reported = start;
    } else if (has_right) {
      if (cfg.allow_boundary_peaks && values[end + 1] < v) reported = end;
    } else if (has_left) {
      if (cfg.allow_boundary_peaks && values[start - 1] < v) reported = start;
    }

    if (reported && v >= cfg.threshold) {
      // Each side: minimum over the stretch until a strictly higher sample.
      // A side that runs into the record edge is open; what lies past the
      // edge is unknown, so a closed side decides the base when there is one.
      auto side = [&](auto first, auto last, auto step) {
        BaseScan out;
        for (auto i = first; i != last; i = step(i)) {
          if (values[i] > v) {
            out.closed = true;
            break;
          }
          out.low = out.low ? std::min(*out.low, values[i]) : values[i];
        }
        return out;
      };
      const BaseScan left = has_left ? side(start - 1, std::size_t(-1), [](std::size_t i) { return i - 1; })
                                  : BaseScan{};
      const BaseScan right = side(end + 1, n, [](std::size_t i) { return i + 1; });
      double base = v;
      if (left.closed && right.closed) {
        base = std::max(*left.low, *right.low);
      } else if (left.closed || right.closed) {
        base = left.closed ? *left.low : *right.low;
      } else if (left.low || right.low) {
        base = std::min(left.low.value_or(v), right.low.value_or(v));
      }
      if (v - base >= cfg.prominence) candidates.push_back({*reported, v});
    }
    start = end + 1;
  }

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.index < b.index;
  });
  std::vector<std::size_t> kept;
  for (const auto& c : candidates) {
    const bool clear = std::all_of(kept.begin(), kept.end(), [&](std::size_t k) {
      const std::size_t gap = k > c.index ? k - c.index : c.index - k;
      return gap >= cfg.min_separation;
    });
    if (clear) kept.push_back(c.index);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace

PeakSet detect_peaks(const GccCurve& curve, const PeakConfig& cfg) {
  cfg.validate();
  PeakSet peaks;
  if (curve.values.size() < 2) return peaks;
  peaks.maxima = find_maxima(curve.values, cfg);
  std::vector<double> negated(curve.values.size());
  std::transform(curve.values.begin(), curve.values.end(), negated.begin(),
                 [](double x) { return -x; });
  peaks.minima = find_maxima(negated, cfg);
  return peaks;
}

std::vector<GaitEvent> restore_cycle(const GccCurve& curve, const PeakConfig& cfg) {
  const PeakSet peaks = detect_peaks(curve, cfg);
  std::vector<GaitEvent> merged;
  merged.reserve(peaks.maxima.size() + peaks.minima.size());
  for (auto i : peaks.maxima) merged.push_back({i, EventKind::LeftHeelStrike});
  for (auto i : peaks.minima) merged.push_back({i, EventKind::RightHeelStrike});
  std::sort(merged.begin(), merged.end(),
            [](const GaitEvent& a, const GaitEvent& b) { return a.index < b.index; });

  std::vector<GaitEvent> out;
  for (std::size_t k = 0; k < merged.size();) {
    std::size_t best = k;
    std::size_t j = k + 1;
    for (; j < merged.size() && merged[j].kind == merged[k].kind; ++j) {
      if (std::abs(curve.values[merged[j].index]) > std::abs(curve.values[merged[best].index])) {
        best = j;
      }
    }
    out.push_back(merged[best]);
    k = j;
  }
  return out;
}

PhaseSequence events_to_phase_via_restoration(const GccCurve& curve,
                                              const PeakConfig& cfg,
                                              std::size_t length) {
  const auto events = restore_cycle(curve, cfg);
  if (events.empty()) throw DataError("no heel strikes restored");
  return label_phases(events, length);
}

}  // namespace gccrr
