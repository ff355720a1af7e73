#pragma once

// Test-only recomputation of the evaluation metrics straight from their
// definitions, sharing nothing with the library beyond restore_cycle (the
// events being scored) and the record types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "gccrr/gcc_codec.hpp"
#include "gccrr/types.hpp"

namespace gccrr::oracle {

// Phase at i: decided by the last heel strike at or before i; before the
// first heel strike, the opposite of what the first one starts.
inline std::vector<int> brute_phases(std::span<const GaitEvent> events, std::size_t length) {
  std::vector<int> out(length, -1);
  for (std::size_t i = 0; i < length; ++i) {
    int phase = -1;
    int first = -1;
    for (const auto& e : events) {
      if (e.kind == EventKind::ToeOff) continue;
      const int starts = e.kind == EventKind::LeftHeelStrike ? 0 : 1;
      if (first < 0) first = starts;
      if (e.index <= i) phase = starts;
    }
    out[i] = phase >= 0 ? phase : (first >= 0 ? 1 - first : -1);
  }
  return out;
}

struct BrutePair {
  std::size_t truth;
  std::size_t pred;
};

inline std::size_t gap(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

// Repeatedly take the globally closest admissible unmatched pair.
inline std::vector<BrutePair> brute_greedy(std::span<const GaitEvent> pred,
                                           std::span<const GaitEvent> truth, double rate_hz,
                                           double window_s) {
  std::vector<bool> tu(truth.size()), pu(pred.size());
  std::vector<BrutePair> out;
  while (true) {
    std::size_t best_a = truth.size(), best_b = pred.size();
    std::size_t best_gap = std::numeric_limits<std::size_t>::max();
    for (std::size_t a = 0; a < truth.size(); ++a) {
      if (tu[a] || truth[a].kind == EventKind::ToeOff) continue;
      for (std::size_t b = 0; b < pred.size(); ++b) {
        if (pu[b] || pred[b].kind != truth[a].kind) continue;
        const std::size_t g = gap(truth[a].index, pred[b].index);
        if (static_cast<double>(g) / rate_hz > window_s) continue;
        const bool better = g < best_gap ||
                            (g == best_gap && (truth[a].index < truth[best_a].index ||
                                               (truth[a].index == truth[best_a].index &&
                                                pred[b].index < pred[best_b].index)));
        if (better) {
          best_gap = g;
          best_a = a;
          best_b = b;
        }
      }
    }
    if (best_a == truth.size()) break;
    tu[best_a] = pu[best_b] = true;
    out.push_back({truth[best_a].index, pred[best_b].index});
  }
  return out;
}

// Exhaustive search: maximum number of admissible pairs, then minimum total gap.
inline std::pair<std::size_t, std::size_t> brute_optimal(std::span<const GaitEvent> pred,
                                                         std::span<const GaitEvent> truth,
                                                         double rate_hz, double window_s) {
  std::vector<GaitEvent> t, p;
  for (const auto& e : truth) if (e.kind != EventKind::ToeOff) t.push_back(e);
  for (const auto& e : pred) if (e.kind != EventKind::ToeOff) p.push_back(e);
  std::pair<std::size_t, std::size_t> best{0, 0};
  std::vector<bool> used(p.size());
  auto recurse = [&](auto&& self, std::size_t a, std::size_t count, std::size_t total) -> void {
    if (a == t.size()) {
      if (count > best.first || (count == best.first && total < best.second)) best = {count, total};
      return;
    }
    self(self, a + 1, count, total);
    for (std::size_t b = 0; b < p.size(); ++b) {
      if (used[b] || p[b].kind != t[a].kind) continue;
      const std::size_t g = gap(t[a].index, p[b].index);
      if (static_cast<double>(g) / rate_hz > window_s) continue;
      used[b] = true;
      self(self, a + 1, count + 1, total + g);
      used[b] = false;
    }
  };
  recurse(recurse, 0, 0, 0);
  return best;
}

struct BruteReport {
  std::size_t correct = 0;
  std::size_t total = 0;
  std::size_t sequences = 0;
  std::size_t false_peak_sequences = 0;
  std::size_t matched = 0;
  double abs_error_sum_s = 0.0;
  std::size_t optimal_matched = 0;
  std::size_t greedy_gap_samples = 0;
  std::size_t optimal_gap_samples = 0;

  double accuracy() const { return static_cast<double>(correct) / static_cast<double>(total); }
  double false_peak_rate() const {
    return static_cast<double>(false_peak_sequences) / static_cast<double>(sequences);
  }
  std::optional<double> timestamp_error() const {
    if (matched == 0) return std::nullopt;
    return abs_error_sum_s / static_cast<double>(matched);
  }
};

// Scores restored events against the annotations one timestamp and one
// heel strike at a time. Per-sequence errors are summed in whole samples and
// converted to seconds once per sequence.
inline BruteReport brute_evaluate(std::span<const WalkRecord> records, std::span<const GccCurve> curves,
                                  const PeakConfig& peak, double window_s) {
  BruteReport out;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& r = records[k];
    const auto pred = restore_cycle(curves[k], peak);
    const std::size_t t = r.length();
    const auto truth_phase = brute_phases(r.events, t);
    const auto pred_phase = brute_phases(pred, t);
    for (std::size_t i = 0; i < t; ++i) {
      if (pred_phase[i] >= 0 && pred_phase[i] == truth_phase[i]) ++out.correct;
    }
    out.total += t;
    ++out.sequences;

    auto count = [](std::span<const GaitEvent> ev, EventKind kind) {
      return std::count_if(ev.begin(), ev.end(), [&](const GaitEvent& e) { return e.kind == kind; });
    };
    const bool wrong = count(pred, EventKind::LeftHeelStrike) != count(r.events, EventKind::LeftHeelStrike) ||
                       count(pred, EventKind::RightHeelStrike) != count(r.events, EventKind::RightHeelStrike);
    out.false_peak_sequences += wrong ? 1 : 0;

    const auto greedy = brute_greedy(pred, r.events, r.imu.rate_hz, window_s);
    std::size_t samples = 0;
    for (const auto& m : greedy) samples += gap(m.truth, m.pred);
    out.matched += greedy.size();
    out.greedy_gap_samples += samples;
    out.abs_error_sum_s += static_cast<double>(samples) / r.imu.rate_hz;

    const auto optimal = brute_optimal(pred, r.events, r.imu.rate_hz, window_s);
    out.optimal_matched += optimal.first;
    out.optimal_gap_samples += optimal.second;
  }
  return out;
}

}  // namespace gccrr::oracle
