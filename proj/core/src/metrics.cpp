#include "gccrr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <tuple>

#include "gccrr/error.hpp"

namespace gccrr {

void MatchConfig::validate() const {
  if (!(window_s > 0.0)) throw ConfigError("match window_s must be > 0");
}

HeelStrikeCounts count_heel_strikes(std::span<const GaitEvent> truth,
                                    std::span<const GaitEvent> pred) {
  HeelStrikeCounts c;
  for (const auto& e : truth) {
    if (e.kind == EventKind::LeftHeelStrike) ++c.truth_left;
    if (e.kind == EventKind::RightHeelStrike) ++c.truth_right;
  }
  for (const auto& e : pred) {
    if (e.kind == EventKind::LeftHeelStrike) ++c.pred_left;
    if (e.kind == EventKind::RightHeelStrike) ++c.pred_right;
  }
  return c;
}

double phase_accuracy(const PhaseSequence& pred, const PhaseSequence& truth) {
  if (pred.size() != truth.size()) throw DataError("phase_accuracy: length mismatch");
  if (truth.size() == 0) return 1.0;
  std::size_t equal = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) equal += pred.labels[i] == truth.labels[i];
  return static_cast<double>(equal) / static_cast<double>(truth.size());
}

std::vector<EventMatch> match_events(std::span<const GaitEvent> pred,
                                     std::span<const GaitEvent> truth, double rate_hz,
                                     const MatchConfig& cfg) {
  cfg.validate();
  struct Candidate {
    std::size_t gap;
    std::size_t truth_pos;
    std::size_t pred_pos;
  };
  std::vector<Candidate> candidates;
  for (std::size_t a = 0; a < truth.size(); ++a) {
    if (!is_heel_strike(truth[a].kind)) continue;
    for (std::size_t b = 0; b < pred.size(); ++b) {
      if (pred[b].kind != truth[a].kind) continue;
      const std::size_t gap = truth[a].index > pred[b].index ? truth[a].index - pred[b].index
                                                             : pred[b].index - truth[a].index;
      if (static_cast<double>(gap) / rate_hz <= cfg.window_s) candidates.push_back({gap, a, b});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& x, const Candidate& y) {
    return std::tie(x.gap, truth[x.truth_pos].index, pred[x.pred_pos].index) <
           std::tie(y.gap, truth[y.truth_pos].index, pred[y.pred_pos].index);
  });
  std::vector<bool> truth_used(truth.size(), false);
  std::vector<bool> pred_used(pred.size(), false);
  std::vector<EventMatch> matches;
  for (const auto& c : candidates) {
    if (truth_used[c.truth_pos] || pred_used[c.pred_pos]) continue;
    truth_used[c.truth_pos] = pred_used[c.pred_pos] = true;
    matches.push_back({truth[c.truth_pos].index, pred[c.pred_pos].index});
  }
  std::sort(matches.begin(), matches.end(), [](const EventMatch& x, const EventMatch& y) {
    return x.truth_index < y.truth_index;
  });
  return matches;
}

double false_peak_rate(std::span<const HeelStrikeCounts> sequences) {
  if (sequences.empty()) throw DataError("false_peak_rate: no sequences");
  const auto bad = std::count_if(sequences.begin(), sequences.end(),
                                 [](const HeelStrikeCounts& c) { return c.mismatched(); });
  return static_cast<double>(bad) / static_cast<double>(sequences.size());
}

std::optional<double> timestamp_error(std::span<const EventMatch> matches, double rate_hz) {
  if (matches.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& m : matches) {
    sum += std::abs(static_cast<double>(m.pred_index) - static_cast<double>(m.truth_index)) / rate_hz;
  }
  return sum / static_cast<double>(matches.size());
}

namespace {

void finalize(EvalReport& report) {
  report.accuracy = report.total_timestamps == 0
                        ? 0.0
                        : static_cast<double>(report.correct_timestamps) /
                              static_cast<double>(report.total_timestamps);
  if (report.has_peak_metrics && report.sequences > 0) {
    report.false_peak_rate = static_cast<double>(report.false_peak_sequences) /
                             static_cast<double>(report.sequences);
  } else {
    report.false_peak_rate.reset();
  }
  if (report.has_peak_metrics && report.matched_events > 0) {
    report.timestamp_error_s = report.abs_error_sum_s / static_cast<double>(report.matched_events);
  } else {
    report.timestamp_error_s.reset();
  }
}

}  // namespace

EvalReport evaluate(std::span<const WalkRecord> records, std::span<const GccCurve> predictions,
                    const PeakConfig& peak_cfg, const MatchConfig& match_cfg) {
  if (records.size() != predictions.size()) {
    throw DataError("evaluate: one predicted curve per record required");
  }
  peak_cfg.validate();
  match_cfg.validate();
  EvalReport report;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& record = records[k];
    const std::size_t length = record.length();
    if (predictions[k].size() != length) throw DataError("evaluate: curve length mismatch");

    SequenceResult seq;
    seq.subject_id = record.subject_id;
    seq.length = length;
    const auto truth_phase = label_phases(record.events, length);
    const auto restored = restore_cycle(predictions[k], peak_cfg);
    seq.restored = !restored.empty();
    if (seq.restored) {
      const auto pred_phase = label_phases(restored, length);
      for (std::size_t i = 0; i < length; ++i) {
        seq.correct += pred_phase.labels[i] == truth_phase.labels[i];
      }
    }
    seq.counts = count_heel_strikes(record.events, restored);
    const auto matches = match_events(restored, record.events, record.imu.rate_hz, match_cfg);
    seq.matched = matches.size();
    for (const auto& m : matches) {
      seq.abs_error_samples += m.pred_index > m.truth_index ? m.pred_index - m.truth_index
                                                            : m.truth_index - m.pred_index;
    }
    seq.abs_error_sum_s = static_cast<double>(seq.abs_error_samples) / record.imu.rate_hz;

    report.total_timestamps += length;
    report.correct_timestamps += seq.correct;
    ++report.sequences;
    report.false_peak_sequences += seq.counts.mismatched() ? 1 : 0;
    report.matched_events += seq.matched;
    report.abs_error_sum_s += seq.abs_error_sum_s;
    report.per_sequence.push_back(std::move(seq));
  }
  finalize(report);
  return report;
}

EvalReport evaluate_phases(std::span<const WalkRecord> records,
                           std::span<const PhaseSequence> predictions) {
  if (records.size() != predictions.size()) {
    throw DataError("evaluate_phases: one phase sequence per record required");
  }
  EvalReport report;
  report.has_peak_metrics = false;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& record = records[k];
    const auto truth = label_phases(record.events, record.length());
    if (predictions[k].size() != truth.size()) throw DataError("evaluate_phases: length mismatch");
    SequenceResult seq;
    seq.subject_id = record.subject_id;
    seq.length = truth.size();
    for (std::size_t i = 0; i < truth.size(); ++i) {
      seq.correct += predictions[k].labels[i] == truth.labels[i];
    }
    report.total_timestamps += seq.length;
    report.correct_timestamps += seq.correct;
    ++report.sequences;
    report.per_sequence.push_back(std::move(seq));
  }
  finalize(report);
  return report;
}

EvalReport merge_reports(std::span<const EvalReport> reports) {
  EvalReport merged;
  merged.has_peak_metrics = std::all_of(reports.begin(), reports.end(),
                                        [](const EvalReport& r) { return r.has_peak_metrics; });
  for (const auto& r : reports) {
    merged.total_timestamps += r.total_timestamps;
    merged.correct_timestamps += r.correct_timestamps;
    merged.sequences += r.sequences;
    merged.false_peak_sequences += r.false_peak_sequences;
    merged.matched_events += r.matched_events;
    merged.abs_error_sum_s += r.abs_error_sum_s;
    merged.per_sequence.insert(merged.per_sequence.end(), r.per_sequence.begin(),
                               r.per_sequence.end());
  }
  finalize(merged);
  return merged;
}

}  // namespace gccrr
