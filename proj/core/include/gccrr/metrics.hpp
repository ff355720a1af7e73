#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gccrr/gcc_codec.hpp"
#include "gccrr/types.hpp"

namespace gccrr {

struct MatchConfig {
  double window_s = 0.25;  // max |dt| between same-side heel strikes

  void validate() const;
  friend bool operator==(const MatchConfig&, const MatchConfig&) = default;
};

// Sample indices of a matched ground-truth / predicted heel-strike pair.
struct EventMatch {
  std::size_t truth_index = 0;
  std::size_t pred_index = 0;

  friend bool operator==(const EventMatch&, const EventMatch&) = default;
};

struct HeelStrikeCounts {
  std::size_t truth_left = 0;
  std::size_t truth_right = 0;
  std::size_t pred_left = 0;
  std::size_t pred_right = 0;

  bool mismatched() const { return truth_left != pred_left || truth_right != pred_right; }
};

HeelStrikeCounts count_heel_strikes(std::span<const GaitEvent> truth,
                                    std::span<const GaitEvent> pred);

// Fraction of equal labels. Throws DataError on length mismatch.
double phase_accuracy(const PhaseSequence& pred, const PhaseSequence& truth);

// Greedy one-to-one matching per side: same-side candidate pairs within the
// window, accepted in order of |dt| (ties: earlier truth, then earlier
// prediction). Toe-off events are ignored. Result sorted by truth index.
std::vector<EventMatch> match_events(std::span<const GaitEvent> pred,
                                     std::span<const GaitEvent> truth, double rate_hz,
                                     const MatchConfig& cfg);

// Throws DataError on empty input.
double false_peak_rate(std::span<const HeelStrikeCounts> sequences);

// Mean |t_pred - t_truth| in seconds; nullopt without matches.
std::optional<double> timestamp_error(std::span<const EventMatch> matches, double rate_hz);

struct SequenceResult {
  std::string subject_id;
  std::size_t length = 0;
  std::size_t correct = 0;
  bool restored = false;  // at least one heel strike recovered
  HeelStrikeCounts counts;
  std::size_t matched = 0;
  std::size_t abs_error_samples = 0;  // summed |pred - truth| over matches
  double abs_error_sum_s = 0.0;
};

// Accuracy is timestamp-weighted over all sequences; the false peak rate and
// timestamp error are absent for reports built from direct phase predictions.
struct EvalReport {
  double accuracy = 0.0;
  std::optional<double> false_peak_rate;
  std::optional<double> timestamp_error_s;

  std::size_t total_timestamps = 0;
  std::size_t correct_timestamps = 0;
  std::size_t sequences = 0;
  std::size_t false_peak_sequences = 0;
  std::size_t matched_events = 0;
  double abs_error_sum_s = 0.0;
  bool has_peak_metrics = true;

  std::vector<SequenceResult> per_sequence;
};

// Restores events from each predicted curve and scores them against the
// records' annotations. A sequence with no restored heel strike contributes
// no correct timestamps. Throws DataError on count or length mismatch.
EvalReport evaluate(std::span<const WalkRecord> records, std::span<const GccCurve> predictions,
                    const PeakConfig& peak_cfg, const MatchConfig& match_cfg);

// Accuracy-only report for direct phase predictions.
EvalReport evaluate_phases(std::span<const WalkRecord> records,
                           std::span<const PhaseSequence> predictions);

// Pools the underlying counts (timestamp-weighted accuracy, sequence-weighted
// false peak rate, event-weighted timestamp error).
EvalReport merge_reports(std::span<const EvalReport> reports);

}  // namespace gccrr
