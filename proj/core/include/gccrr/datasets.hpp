#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gccrr/types.hpp"

namespace gccrr {

// Synthetic stand-in for a labeled ear-worn IMU gait dataset. Six channels:
// accel x/y/z (g, y lateral, z vertical) and gyro x/y/z (deg/s).
struct SynthConfig {
  std::size_t num_subjects = 12;
  std::size_t records_per_subject = 40;
  std::size_t cycles_min = 1;
  std::size_t cycles_max = 3;
  double cadence_min_hz = 0.7;  // steps per second per foot
  double cadence_max_hz = 1.2;
  double noise_sigma = 0.05;  // g; gyro channels use noise_sigma * kGyroNoiseScale
  double impulse_scale = 1.0;  // heel-strike transient strength
  // Mean rate of spurious transients (head motion) shaped like a heel-strike
  // impulse with a random lateral sign, placed uniformly in the record.
  double artifact_rate_hz = 0.0;
  double rate_hz = kDefaultRateHz;
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const SynthConfig&, const SynthConfig&) = default;
};

inline constexpr std::size_t kSynthChannels = 6;
inline constexpr double kGyroNoiseScale = 20.0;
inline constexpr double kToeOffFraction = 0.6;

// Per-subject signal signature. Wear side alternates with the subject index
// (even -> Left, odd -> Right).
struct SubjectProfile {
  std::string id;
  Side side = Side::Left;
  double phase_offset = 0.3;  // first heel strike, in half-cycles after record start
  std::array<double, kSynthChannels> step_amplitude{};
  std::array<double, kSynthChannels> step_phase{};
  std::array<double, kSynthChannels> stride_amplitude{};
  std::array<double, kSynthChannels> stride_phase{};
  std::array<double, kSynthChannels> impulse_amplitude{};
  double impulse_decay_s = 0.05;
};

SubjectProfile make_subject(const SynthConfig& cfg, std::size_t subject_index);

// Deterministic in (cfg, profile, record_seed).
WalkRecord generate_record(const SynthConfig& cfg, const SubjectProfile& profile,
                           std::uint64_t record_seed);

// Subjects "S01".. in order, records_per_subject each; record j of subject k
// uses a seed derived from (cfg.seed, k, j).
std::vector<WalkRecord> generate_dataset(const SynthConfig& cfg);

struct LosoSplit {
  std::string held_out;
  std::vector<WalkRecord> test;
  std::vector<WalkRecord> remaining;
};

// One split per distinct subject, in sorted subject order. Throws ConfigError
// with fewer than two subjects.
std::vector<LosoSplit> loso_splits(std::span<const WalkRecord> records);

// Seeded shuffle; the first ceil(ratio * N) records (capped so validation
// keeps at least one) go to training. Throws ConfigError for N < 2.
std::pair<std::vector<WalkRecord>, std::vector<WalkRecord>> train_val_split(
    std::span<const WalkRecord> records, double ratio = 0.9, std::uint64_t seed = 0);

std::vector<WalkRecord> filter_by_side(std::span<const WalkRecord> records, Side side);

std::vector<std::string> distinct_subjects(std::span<const WalkRecord> records);

}  // namespace gccrr
