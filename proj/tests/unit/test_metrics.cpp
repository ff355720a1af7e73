#include <gtest/gtest.h>

#include <algorithm>

#include "gccrr/error.hpp"
#include "gccrr/gcc_codec.hpp"
#include "gccrr/metrics.hpp"
#include "oracles/eval_instances.hpp"
#include "oracles/metrics_bruteforce.hpp"
#include "oracles/property.hpp"

using namespace gccrr;

namespace {

constexpr auto LHS = EventKind::LeftHeelStrike;
constexpr auto RHS = EventKind::RightHeelStrike;

PhaseSequence phases(std::vector<std::uint8_t> v) { return PhaseSequence{std::move(v)}; }

WalkRecord blank(std::size_t length, std::vector<GaitEvent> events) {
  WalkRecord r;
  r.subject_id = "S01";
  r.imu.samples = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(length), 1);
  r.events = std::move(events);
  return r;
}

}  // namespace

TEST(PhaseAccuracy, Examples) {
  EXPECT_DOUBLE_EQ(phase_accuracy(phases({0, 1, 1, 1}), phases({0, 0, 1, 1})), 0.75);
  EXPECT_DOUBLE_EQ(phase_accuracy(phases({0, 1, 0}), phases({0, 1, 0})), 1.0);
  EXPECT_DOUBLE_EQ(phase_accuracy(phases({1, 0, 1}), phases({0, 1, 0})), 0.0);
  EXPECT_THROW(phase_accuracy(phases({1, 0}), phases({0})), DataError);
}

TEST(Match, WindowExamples) {
  const MatchConfig cfg;
  const std::vector<GaitEvent> truth{{10, LHS}};
  EXPECT_EQ(match_events(std::vector<GaitEvent>{{11, LHS}}, truth, 30.0, cfg).size(), 1u);
  EXPECT_TRUE(match_events(std::vector<GaitEvent>{{30, LHS}}, truth, 30.0, cfg).empty());
  const auto m = match_events(std::vector<GaitEvent>{{9, LHS}, {12, LHS}}, truth, 30.0, cfg);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0], (EventMatch{10, 9}));
}

TEST(Match, SideMustAgree) {
  EXPECT_TRUE(match_events(std::vector<GaitEvent>{{10, RHS}}, std::vector<GaitEvent>{{10, LHS}}, 30.0, {}).empty());
}

TEST(Match, TiesPreferEarlierTruthThenPrediction) {
  // Pred 15 is 2 samples from truth 13 and from truth 17: earlier truth wins.
  const auto m = match_events(std::vector<GaitEvent>{{15, LHS}},
                              std::vector<GaitEvent>{{13, LHS}, {17, LHS}}, 30.0, {});
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0], (EventMatch{13, 15}));
  const auto n = match_events(std::vector<GaitEvent>{{8, LHS}, {12, LHS}},
                              std::vector<GaitEvent>{{10, LHS}}, 30.0, {});
  ASSERT_EQ(n.size(), 1u);
  EXPECT_EQ(n[0], (EventMatch{10, 8}));
}

TEST(Match, InvalidWindow) {
  MatchConfig cfg;
  cfg.window_s = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(FalsePeakRate, Examples) {
  HeelStrikeCounts ok{2, 2, 2, 2};
  HeelStrikeCounts extra{2, 2, 2, 3};
  EXPECT_DOUBLE_EQ(false_peak_rate(std::vector<HeelStrikeCounts>{ok, extra, ok, ok}), 0.25);
  EXPECT_DOUBLE_EQ(false_peak_rate(std::vector<HeelStrikeCounts>{ok, ok}), 0.0);
  EXPECT_DOUBLE_EQ(false_peak_rate(std::vector<HeelStrikeCounts>{extra, extra, extra}), 1.0);
  EXPECT_THROW(false_peak_rate(std::vector<HeelStrikeCounts>{}), DataError);
}

TEST(TimestampError, Examples) {
  EXPECT_NEAR(*timestamp_error(std::vector<EventMatch>{{10, 11}}, 30.0), 1.0 / 30.0, 1e-15);
  EXPECT_EQ(*timestamp_error(std::vector<EventMatch>{{10, 10}, {20, 20}}, 30.0), 0.0);
  EXPECT_NEAR(*timestamp_error(std::vector<EventMatch>{{10, 10}, {20, 21}, {30, 28}}, 30.0), 1.0 / 30.0, 1e-15);
  EXPECT_FALSE(timestamp_error(std::vector<EventMatch>{}, 30.0).has_value());
}

TEST(Evaluate, OracleCurvesArePerfect) {
  std::vector<WalkRecord> recs{blank(40, {{3, LHS}, {8, EventKind::ToeOff}, {15, RHS}, {27, LHS}}),
                               blank(30, {{5, RHS}, {18, LHS}})};
  std::vector<GccCurve> curves;
  for (const auto& r : recs) curves.push_back(encode_gcc(r.events, r.length()));
  const auto rep = evaluate(recs, curves, {}, {});
  EXPECT_EQ(rep.accuracy, 1.0);
  EXPECT_EQ(*rep.false_peak_rate, 0.0);
  EXPECT_EQ(*rep.timestamp_error_s, 0.0);
  EXPECT_EQ(rep.per_sequence.size(), 2u);
}

TEST(Evaluate, FlatPredictionsAreAllFalsePeaks) {
  std::vector<WalkRecord> recs{blank(40, {{3, LHS}, {15, RHS}}), blank(30, {{5, RHS}, {18, LHS}})};
  std::vector<GccCurve> curves{GccCurve{std::vector<double>(40, 0.0)}, GccCurve{std::vector<double>(30, 0.0)}};
  const auto rep = evaluate(recs, curves, {}, {});
  EXPECT_EQ(*rep.false_peak_rate, 1.0);
  EXPECT_EQ(rep.accuracy, 0.0);
  EXPECT_FALSE(rep.timestamp_error_s.has_value());
  EXPECT_FALSE(rep.per_sequence[0].restored);
}

TEST(Evaluate, AccuracyIsTimestampWeighted) {
  // Short record fully right, long record half right: pooled 60/100, not the
  // per-record mean 0.75.
  std::vector<WalkRecord> recs{blank(20, {{2, LHS}, {12, RHS}}), blank(80, {{0, LHS}, {40, RHS}})};
  std::vector<PhaseSequence> preds{label_phases(recs[0].events, 20), PhaseSequence{std::vector<std::uint8_t>(80, 1)}};
  const auto rep = evaluate_phases(recs, preds);
  EXPECT_DOUBLE_EQ(rep.accuracy, 0.6);
  EXPECT_EQ(rep.correct_timestamps, 60u);
  EXPECT_FALSE(rep.false_peak_rate.has_value());
  EXPECT_FALSE(rep.timestamp_error_s.has_value());
  EXPECT_FALSE(rep.has_peak_metrics);
}

TEST(Evaluate, MismatchedInputsAreErrors) {
  std::vector<WalkRecord> recs{blank(20, {{2, LHS}, {12, RHS}})};
  EXPECT_THROW(evaluate(recs, std::vector<GccCurve>{}, {}, {}), DataError);
  EXPECT_THROW(evaluate(recs, std::vector<GccCurve>{GccCurve{std::vector<double>(19, 0.0)}}, {}, {}), DataError);
  EXPECT_THROW(evaluate_phases(recs, std::vector<PhaseSequence>{phases({0})}), DataError);
}

TEST(Merge, PoolsCounts) {
  std::mt19937_64 rng(12);
  const auto a = oracle::random_eval_instance(rng);
  const auto b = oracle::random_eval_instance(rng);
  std::vector<EvalReport> parts{evaluate(a.records, a.curves, {}, {}), evaluate(b.records, b.curves, {}, {})};
  auto recs = a.records;
  recs.insert(recs.end(), b.records.begin(), b.records.end());
  auto curves = a.curves;
  curves.insert(curves.end(), b.curves.begin(), b.curves.end());
  const auto whole = evaluate(recs, curves, {}, {});
  const auto merged = merge_reports(parts);
  EXPECT_EQ(merged.accuracy, whole.accuracy);
  EXPECT_EQ(merged.false_peak_rate, whole.false_peak_rate);
  EXPECT_EQ(merged.correct_timestamps, whole.correct_timestamps);
  EXPECT_EQ(merged.matched_events, whole.matched_events);
  EXPECT_EQ(merged.per_sequence.size(), whole.per_sequence.size());
}

TEST(MetricsProperty, EvaluateEqualsBruteForce) {
  oracle::for_all(200, 61, [](std::mt19937_64& rng) {
    const auto inst = oracle::random_eval_instance(rng);
    const auto rep = evaluate(inst.records, inst.curves, {}, {});
    const auto ref = oracle::brute_evaluate(inst.records, inst.curves, {}, MatchConfig{}.window_s);
    EXPECT_EQ(rep.correct_timestamps, ref.correct);
    EXPECT_EQ(rep.total_timestamps, ref.total);
    EXPECT_EQ(rep.accuracy, ref.accuracy());
    EXPECT_EQ(*rep.false_peak_rate, ref.false_peak_rate());
    EXPECT_EQ(rep.matched_events, ref.matched);
    EXPECT_EQ(rep.timestamp_error_s, ref.timestamp_error());
    EXPECT_LE(ref.matched, ref.optimal_matched);
    EXPECT_GE(rep.accuracy, 0.0);
    EXPECT_LE(rep.accuracy, 1.0);
  });
}

TEST(MatchProperty, OneToOneWithinWindowAndOrderFree) {
  oracle::for_all(200, 62, [](std::mt19937_64& rng) {
    const auto truth = oracle::random_event_train(rng);
    const auto pred = oracle::random_event_train(rng);
    const double window = std::uniform_real_distribution<double>(0.05, 0.8)(rng);
    const MatchConfig cfg{window};
    const auto m = match_events(pred.events, truth.events, 30.0, cfg);
    std::vector<std::size_t> seen_t, seen_p;
    for (const auto& e : m) {
      ASSERT_LE(static_cast<double>(oracle::gap(e.truth_index, e.pred_index)) / 30.0, window);
      seen_t.push_back(e.truth_index);
      seen_p.push_back(e.pred_index);
    }
    std::sort(seen_p.begin(), seen_p.end());
    EXPECT_TRUE(std::is_sorted(seen_t.begin(), seen_t.end()));
    EXPECT_EQ(std::adjacent_find(seen_t.begin(), seen_t.end()), seen_t.end());
    EXPECT_EQ(std::adjacent_find(seen_p.begin(), seen_p.end()), seen_p.end());

    auto shuffled_pred = pred.events;
    auto shuffled_truth = truth.events;
    std::shuffle(shuffled_pred.begin(), shuffled_pred.end(), rng);
    std::shuffle(shuffled_truth.begin(), shuffled_truth.end(), rng);
    EXPECT_EQ(match_events(shuffled_pred, shuffled_truth, 30.0, cfg), m);

    const auto greedy = oracle::brute_greedy(pred.events, truth.events, 30.0, window);
    ASSERT_EQ(greedy.size(), m.size());
    std::vector<EventMatch> as_matches;
    for (const auto& g : greedy) as_matches.push_back({g.truth, g.pred});
    std::sort(as_matches.begin(), as_matches.end(),
              [](const EventMatch& a, const EventMatch& b) { return a.truth_index < b.truth_index; });
    EXPECT_EQ(as_matches, m);
  });
}
