#include <gtest/gtest.h>

#include "gccrr/augment.hpp"
#include "gccrr/datasets.hpp"
#include "gccrr/error.hpp"
#include "gccrr/gcc_codec.hpp"
#include "oracles/property.hpp"
#include "oracles/records.hpp"

using namespace gccrr;

namespace {

WalkRecord ramp_record(std::size_t length) {
  WalkRecord r;
  r.subject_id = "S01";
  r.imu.samples.resize(static_cast<Eigen::Index>(length), 2);
  for (std::size_t i = 0; i < length; ++i) {
    r.imu.samples(static_cast<Eigen::Index>(i), 0) = static_cast<double>(i);
    r.imu.samples(static_cast<Eigen::Index>(i), 1) = 3.5;
  }
  r.events = {{2, EventKind::LeftHeelStrike}};
  return r;
}

// round-half-up(a / b) for non-negative integers, computed in long double.
std::size_t round_ratio(std::size_t num, std::size_t den) {
  return static_cast<std::size_t>(std::floor(static_cast<long double>(num) / den + 0.5L));
}

}  // namespace

TEST(Stretch, DoublingMapsIndexWithHalfUp) {
  const auto out = stretch_record(ramp_record(5), 2.0);
  EXPECT_EQ(out.length(), 10u);
  ASSERT_EQ(out.events.size(), 1u);
  EXPECT_EQ(out.events[0], (GaitEvent{5, EventKind::LeftHeelStrike}));
  EXPECT_EQ(map_event_index(2, 5, 10), 5u);
  EXPECT_EQ(stretched_length(5, 2.0), 10u);
  EXPECT_EQ(stretched_length(5, 1.1), 6u);  // 5.5 rounds up
}

TEST(Stretch, ResamplesLinearly) {
  const auto out = stretch_record(ramp_record(5), 2.0);
  for (Eigen::Index j = 0; j < 10; ++j) {
    EXPECT_NEAR(out.imu.samples(j, 0), static_cast<double>(j) * 4.0 / 9.0, 1e-12);
    EXPECT_EQ(out.imu.samples(j, 1), 3.5);
  }
  EXPECT_EQ(out.imu.samples(9, 0), 4.0);
}

TEST(Stretch, UnitFactorIsIdentity) {
  std::mt19937_64 rng(8);
  const auto r = oracle::random_record(rng);
  EXPECT_EQ(stretch_record(r, 1.0), r);
}

TEST(Stretch, ConstantChannelsStayConstant) {
  for (double f : {1.3, 2.0, 3.7, 4.0}) {
    const auto out = stretch_record(ramp_record(9), f);
    for (Eigen::Index j = 0; j < out.imu.samples.rows(); ++j) EXPECT_EQ(out.imu.samples(j, 1), 3.5);
  }
}

TEST(Stretch, Errors) {
  EXPECT_THROW(stretch_record(ramp_record(5), 0.9), ConfigError);
  EXPECT_THROW(stretch_record(ramp_record(1), 2.0), DataError);
}

TEST(Augment, DefaultsGiveFiveTimesInput) {
  SynthConfig sc;
  sc.num_subjects = 2;
  sc.records_per_subject = 5;
  const auto recs = generate_dataset(sc);
  const auto out = augment_dataset(recs, AugmentConfig{});
  ASSERT_EQ(out.size(), 50u);
  for (std::size_t k = 0; k < recs.size(); ++k) EXPECT_EQ(out[k], recs[k]);
  for (const auto& r : out) EXPECT_TRUE(validate_record(r).ok());
}

TEST(Augment, ZeroCopiesIsIdentity) {
  std::mt19937_64 rng(1);
  std::vector<WalkRecord> recs{oracle::random_record(rng), oracle::random_record(rng)};
  AugmentConfig cfg;
  cfg.copies_per_record = 0;
  EXPECT_EQ(augment_dataset(recs, cfg), recs);
}

TEST(Augment, SeededDraws) {
  AugmentConfig cfg;
  cfg.seed = 99;
  const auto a = draw_stretch_factors(6, cfg);
  EXPECT_EQ(a, draw_stretch_factors(6, cfg));
  ASSERT_EQ(a.size(), 6u);
  for (const auto& row : a) {
    ASSERT_EQ(row.size(), 4u);
    for (double f : row) EXPECT_TRUE(f >= 1.0 && f <= 4.0);
  }
  cfg.seed = 100;
  EXPECT_NE(a, draw_stretch_factors(6, cfg));

  std::mt19937_64 rng(2);
  std::vector<WalkRecord> recs{oracle::random_record(rng), oracle::random_record(rng)};
  cfg.seed = 99;
  const auto out = augment_dataset(recs, cfg);
  EXPECT_EQ(out, augment_dataset(recs, cfg));
  // Copy j of record k uses factors[k][j].
  EXPECT_EQ(out[2], stretch_record(recs[0], a[0][0]));
  EXPECT_EQ(out[2 + 4 + 3], stretch_record(recs[1], a[1][3]));
}

TEST(Augment, IntegerFactors) {
  AugmentConfig cfg;
  cfg.integer_factors = true;
  for (const auto& row : draw_stretch_factors(20, cfg)) {
    for (double f : row) EXPECT_EQ(f, std::round(f));
  }
  cfg.factor_min = 1.2;
  cfg.factor_max = 1.8;
  EXPECT_THROW(cfg.validate(), ConfigError);
  AugmentConfig bad;
  bad.factor_min = 0.5;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(AugmentProperty, StretchPreservesEventStructure) {
  oracle::for_all(200, 41, [](std::mt19937_64& rng) {
    const auto r = oracle::random_record(rng, 2);
    const double f = std::uniform_real_distribution<double>(1.0, 4.0)(rng);
    const auto out = stretch_record(r, f);
    ASSERT_TRUE(validate_record(out).ok());
    ASSERT_EQ(out.events.size(), r.events.size());
    EXPECT_EQ(out.length(), static_cast<std::size_t>(std::floor(r.length() * f + 0.5)));
    const std::size_t t = r.length(), tp = out.length();
    for (std::size_t k = 0; k < r.events.size(); ++k) {
      ASSERT_EQ(out.events[k].kind, r.events[k].kind);
      ASSERT_EQ(out.events[k].index, round_ratio(r.events[k].index * (tp - 1), t - 1));
    }
    EXPECT_EQ(out.subject_id, r.subject_id);
    EXPECT_EQ(out.side, r.side);
    EXPECT_EQ(out.modality, r.modality);
    EXPECT_EQ(out.imu.rate_hz, r.imu.rate_hz);
    EXPECT_EQ(heel_strikes(out.events).size(), heel_strikes(r.events).size());
    // Targets come from the stretched events.
    EXPECT_NO_THROW(encode_gcc(out.events, out.length()));
  });
}
