#include "gccrr/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include "gccrr/error.hpp"

namespace gccrr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Channel roles: lateral channels flip sign with the foot and with wear side.
constexpr std::array<bool, kSynthChannels> kLateral{false, true, false, true, false, true};
constexpr std::array<double, kSynthChannels> kBaseline{0.0, 0.0, 1.0, 0.0, 0.0, 0.0};
constexpr std::array<double, kSynthChannels> kStepAmplitude{0.10, 0.04, 0.20, 4.0, 3.0, 2.0};
constexpr std::array<double, kSynthChannels> kStrideAmplitude{0.03, 0.10, 0.03, 6.0, 2.0, 5.0};
constexpr std::array<double, kSynthChannels> kImpulseAmplitude{0.15, 0.12, 0.35, 8.0, 6.0, 6.0};
constexpr std::array<const char*, 5> kModalities{"normal", "toe-in", "toe-out", "supination",
                                                 "pronation"};

std::mt19937_64 derived_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
  return std::mt19937_64(seq);
}

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  auto rng = derived_rng(seed, a, b);
  return rng();
}

std::string subject_name(std::size_t index) {
  std::string digits = std::to_string(index + 1);
  if (digits.size() < 2) digits.insert(0, "0");
  return "S" + digits;
}

}  // namespace

void SynthConfig::validate() const {
  if (num_subjects < 1) throw ConfigError("synth num_subjects must be >= 1");
  if (records_per_subject < 1) throw ConfigError("synth records_per_subject must be >= 1");
  if (cycles_min < 1 || cycles_max < cycles_min) {
    throw ConfigError("synth cycle range must satisfy 1 <= min <= max");
  }
  if (!(cadence_min_hz > 0.0) || !(cadence_max_hz >= cadence_min_hz)) {
    throw ConfigError("synth cadence range must be positive and non-empty");
  }
  if (!(noise_sigma >= 0.0)) throw ConfigError("synth noise_sigma must be >= 0");
  if (!(artifact_rate_hz >= 0.0)) throw ConfigError("synth artifact_rate_hz must be >= 0");
  if (!(impulse_scale >= 0.0)) throw ConfigError("synth impulse_scale must be >= 0");
  if (!(rate_hz > 0.0)) throw ConfigError("synth rate_hz must be > 0");
}

SubjectProfile make_subject(const SynthConfig& cfg, std::size_t subject_index) {
  auto rng = derived_rng(cfg.seed, subject_index, 0x5eedu);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto between = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  SubjectProfile p;
  p.id = subject_name(subject_index);
  p.side = subject_index % 2 == 0 ? Side::Left : Side::Right;
  p.phase_offset = between(0.15, 0.45);
  for (std::size_t c = 0; c < kSynthChannels; ++c) {
    p.step_amplitude[c] = kStepAmplitude[c] * between(0.6, 1.4);
    p.step_phase[c] = between(-0.6, 0.6);
    p.stride_amplitude[c] = kStrideAmplitude[c] * between(0.6, 1.4);
    p.stride_phase[c] = between(-0.6, 0.6);
    p.impulse_amplitude[c] = kImpulseAmplitude[c] * between(0.7, 1.3);
  }
  p.impulse_decay_s = between(0.04, 0.07);
  return p;
}

WalkRecord generate_record(const SynthConfig& cfg, const SubjectProfile& profile,
                           std::uint64_t record_seed) {
  cfg.validate();
  std::mt19937_64 rng(record_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto between = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  const auto cycles = std::uniform_int_distribution<std::size_t>(cfg.cycles_min, cfg.cycles_max)(rng);
  const double cadence = between(cfg.cadence_min_hz, cfg.cadence_max_hz);
  const double half = cfg.rate_hz / (2.0 * cadence);
  const auto nominal_gap = static_cast<long>(std::lround(half));
  const Side first_foot = unit(rng) < 0.5 ? Side::Left : Side::Right;
  const std::size_t modality_index = std::uniform_int_distribution<std::size_t>(0, kModalities.size() - 1)(rng);
  // Lead-in and tail stay short enough that the clamped edge extrapolation of
  // the encoded curve never reaches the default peak threshold.
  const double lead_fraction = std::clamp(profile.phase_offset + between(-0.1, 0.1), 0.1, 0.55);
  const double tail_fraction = between(0.2, 0.8);

  // Heel strikes: 2 per cycle, consecutive gaps within +-1 sample of nominal.
  const std::size_t strikes = 2 * cycles;
  std::vector<long> strike_at(strikes);
  std::vector<long> gap(strikes);
  std::uniform_int_distribution<int> jitter(-1, 1);
  for (auto& g : gap) g = std::max(2L, nominal_gap + jitter(rng));
  strike_at[0] = std::max(0L, std::lround(lead_fraction * half));
  for (std::size_t k = 1; k < strikes; ++k) strike_at[k] = strike_at[k - 1] + gap[k - 1];
  const long tail = std::max(2L, std::lround(tail_fraction * half));
  const long length = strike_at.back() + tail + 1;

  WalkRecord record;
  record.subject_id = profile.id;
  record.side = profile.side;
  record.modality = kModalities[modality_index];
  record.imu.rate_hz = cfg.rate_hz;

  const auto to_offset = [](long g) { return std::lround(kToeOffFraction * static_cast<double>(g)); };
  const long lead_toe_off = strike_at[0] - (nominal_gap - to_offset(nominal_gap));
  if (lead_toe_off >= 0 && lead_toe_off < strike_at[0]) {
    record.events.push_back({static_cast<std::size_t>(lead_toe_off), EventKind::ToeOff});
  }
  for (std::size_t k = 0; k < strikes; ++k) {
    const Side foot = (k % 2 == 0) == (first_foot == Side::Left) ? Side::Left : Side::Right;
    record.events.push_back({static_cast<std::size_t>(strike_at[k]), heel_strike_of(foot)});
    const long next = k + 1 < strikes ? strike_at[k + 1] : length;
    const long toe_off = strike_at[k] + to_offset(k + 1 < strikes ? gap[k] : nominal_gap);
    if (toe_off > strike_at[k] && toe_off < next && toe_off < length) {
      record.events.push_back({static_cast<std::size_t>(toe_off), EventKind::ToeOff});
    }
  }

  // Continuous half-cycle phase: integer k at the k-th heel strike.
  auto phase_at = [&](double t) {
    if (t <= static_cast<double>(strike_at[0])) {
      return (t - static_cast<double>(strike_at[0])) / static_cast<double>(nominal_gap);
    }
    for (std::size_t k = 0; k + 1 < strikes; ++k) {
      if (t <= static_cast<double>(strike_at[k + 1])) {
        return static_cast<double>(k) + (t - static_cast<double>(strike_at[k])) /
                                            static_cast<double>(strike_at[k + 1] - strike_at[k]);
      }
    }
    return static_cast<double>(strikes - 1) +
           (t - static_cast<double>(strike_at.back())) / static_cast<double>(nominal_gap);
  };
  const double foot_shift = first_foot == Side::Left ? 0.0 : 1.0;
  const double lateral_mod = record.modality == "toe-in" ? 1.2 : record.modality == "toe-out" ? 0.8 : 1.0;
  const double vertical_mod =
      record.modality == "supination" ? 0.85 : record.modality == "pronation" ? 1.15 : 1.0;
  const double wear_sign = profile.side == Side::Left ? 1.0 : -1.0;
  const double decay_samples = profile.impulse_decay_s * cfg.rate_hz;

  // Drawn from a separate stream so the rest of the record does not depend on
  // the artifact rate.
  struct Transient {
    long at;
    double sign;
    double gain;
  };
  std::vector<Transient> transients;
  if (cfg.artifact_rate_hz > 0.0) {
    std::mt19937_64 art(record_seed ^ 0x9e3779b97f4a7c15ull);
    const double expected = cfg.artifact_rate_hz * static_cast<double>(length) / cfg.rate_hz;
    const auto n = std::poisson_distribution<int>(expected)(art);
    for (int k = 0; k < n; ++k) {
      const long at = std::uniform_int_distribution<long>(0, length - 1)(art);
      const double sign = std::uniform_int_distribution<int>(0, 1)(art) == 0 ? -1.0 : 1.0;
      transients.push_back({at, sign, std::uniform_real_distribution<double>(0.5, 1.0)(art)});
    }
  }

  std::normal_distribution<double> noise(0.0, 1.0);
  auto& samples = record.imu.samples;
  samples.resize(length, static_cast<Eigen::Index>(kSynthChannels));
  for (long t = 0; t < length; ++t) {
    const double phi = phase_at(static_cast<double>(t));
    for (std::size_t c = 0; c < kSynthChannels; ++c) {
      const double mod = kLateral[c] ? lateral_mod : vertical_mod;
      double v = kBaseline[c];
      v += profile.step_amplitude[c] * std::sin(kTwoPi * phi + profile.step_phase[c]);
      v += mod * profile.stride_amplitude[c] *
           std::sin(std::numbers::pi * (phi + foot_shift) + profile.stride_phase[c]);
      for (std::size_t k = 0; k < strikes; ++k) {
        const long dt = t - strike_at[k];
        if (dt < 0) continue;
        const Side foot = (k % 2 == 0) == (first_foot == Side::Left) ? Side::Left : Side::Right;
        const double sign = kLateral[c] && foot == Side::Right ? -1.0 : 1.0;
        v += sign * mod * cfg.impulse_scale * profile.impulse_amplitude[c] *
             std::exp(-static_cast<double>(dt) / decay_samples);
      }
      for (const auto& tr : transients) {
        const long dt = t - tr.at;
        if (dt < 0) continue;
        const double sign = kLateral[c] ? tr.sign : 1.0;
        v += sign * mod * tr.gain * cfg.impulse_scale * profile.impulse_amplitude[c] *
             std::exp(-static_cast<double>(dt) / decay_samples);
      }
      if (kLateral[c]) v *= wear_sign;
      const double sigma = c < 3 ? cfg.noise_sigma : cfg.noise_sigma * kGyroNoiseScale;
      if (sigma > 0.0) v += sigma * noise(rng);
      samples(t, static_cast<Eigen::Index>(c)) = v;
    }
  }
  return record;
}

std::vector<WalkRecord> generate_dataset(const SynthConfig& cfg) {
  cfg.validate();
  std::vector<WalkRecord> records;
  records.reserve(cfg.num_subjects * cfg.records_per_subject);
  for (std::size_t s = 0; s < cfg.num_subjects; ++s) {
    const auto profile = make_subject(cfg, s);
    for (std::size_t r = 0; r < cfg.records_per_subject; ++r) {
      records.push_back(generate_record(cfg, profile, derived_seed(cfg.seed, s, r + 1)));
    }
  }
  return records;
}

std::vector<std::string> distinct_subjects(std::span<const WalkRecord> records) {
  std::set<std::string> ids;
  for (const auto& r : records) ids.insert(r.subject_id);
  return {ids.begin(), ids.end()};
}

std::vector<LosoSplit> loso_splits(std::span<const WalkRecord> records) {
  const auto subjects = distinct_subjects(records);
  if (subjects.size() < 2) throw ConfigError("LOSO needs at least two subjects");
  std::vector<LosoSplit> splits;
  splits.reserve(subjects.size());
  for (const auto& id : subjects) {
    LosoSplit split{id, {}, {}};
    for (const auto& r : records) {
      (r.subject_id == id ? split.test : split.remaining).push_back(r);
    }
    splits.push_back(std::move(split));
  }
  return splits;
}

std::pair<std::vector<WalkRecord>, std::vector<WalkRecord>> train_val_split(
    std::span<const WalkRecord> records, double ratio, std::uint64_t seed) {
  const std::size_t n = records.size();
  if (n < 2) throw ConfigError("train/validation split needs at least two records");
  if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("split ratio must lie in (0, 1)");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  auto n_train = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(n) - 1e-9));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  std::pair<std::vector<WalkRecord>, std::vector<WalkRecord>> out;
  for (std::size_t k = 0; k < n; ++k) {
    (k < n_train ? out.first : out.second).push_back(records[order[k]]);
  }
  return out;
}

std::vector<WalkRecord> filter_by_side(std::span<const WalkRecord> records, Side side) {
  std::vector<WalkRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [side](const WalkRecord& r) { return r.side == side; });
  return out;
}

}  // namespace gccrr
