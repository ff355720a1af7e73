#include "gccrr/augment.hpp"

#include <cmath>
#include <random>

#include "gccrr/error.hpp"

namespace gccrr {

void AugmentConfig::validate() const {
  if (!(factor_min >= 1.0) || !(factor_max >= factor_min) || !std::isfinite(factor_max)) {
    throw ConfigError("augment factors must satisfy 1 <= factor_min <= factor_max");
  }
  if (integer_factors && std::ceil(factor_min) > std::floor(factor_max)) {
    throw ConfigError("augment factor range contains no whole factor");
  }
}

std::size_t stretched_length(std::size_t length, double factor) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(length) * factor + 0.5));
}

std::size_t map_event_index(std::size_t index, std::size_t length, std::size_t stretched) {
  if (length < 2) return index;
  const std::size_t num = 2 * index * (stretched - 1) + (length - 1);
  return num / (2 * (length - 1));
}

WalkRecord stretch_record(const WalkRecord& record, double factor) {
  if (!(factor >= 1.0)) throw ConfigError("stretch factor must be >= 1");
  const std::size_t length = record.length();
  if (length < 2) throw DataError("cannot stretch a sequence shorter than 2 samples");
  const std::size_t stretched = stretched_length(length, factor);

  WalkRecord out;
  out.subject_id = record.subject_id;
  out.side = record.side;
  out.modality = record.modality;
  out.imu.rate_hz = record.imu.rate_hz;

  const auto& src = record.imu.samples;
  auto& dst = out.imu.samples;
  dst.resize(static_cast<Eigen::Index>(stretched), src.cols());
  for (std::size_t j = 0; j < stretched; ++j) {
    const double pos = static_cast<double>(j) * static_cast<double>(length - 1) /
                       static_cast<double>(stretched - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    if (lo >= length - 1) lo = length - 2;
    const double frac = pos - static_cast<double>(lo);
    const auto r = static_cast<Eigen::Index>(j);
    const auto a = static_cast<Eigen::Index>(lo);
    if (frac == 0.0) {
      dst.row(r) = src.row(a);
    } else if (frac == 1.0) {
      dst.row(r) = src.row(a + 1);
    } else {
      dst.row(r) = src.row(a) + frac * (src.row(a + 1) - src.row(a));
    }
  }

  for (const auto& e : record.events) {
    const std::size_t mapped = map_event_index(e.index, length, stretched);
    if (!out.events.empty() && out.events.back().index >= mapped) continue;
    out.events.push_back({mapped, e.kind});
  }
  return out;
}

std::vector<std::vector<double>> draw_stretch_factors(std::size_t records,
                                                      const AugmentConfig& cfg) {
  cfg.validate();
  std::vector<std::vector<double>> factors(records);
  for (std::size_t k = 0; k < records; ++k) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed),
                      static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(seq);
    auto& row = factors[k];
    row.reserve(cfg.copies_per_record);
    for (std::size_t j = 0; j < cfg.copies_per_record; ++j) {
      if (cfg.integer_factors) {
        std::uniform_int_distribution<long> dist(static_cast<long>(std::ceil(cfg.factor_min)),
                                                 static_cast<long>(std::floor(cfg.factor_max)));
        row.push_back(static_cast<double>(dist(rng)));
      } else if (cfg.factor_max == cfg.factor_min) {
        row.push_back(cfg.factor_min);
      } else {
        std::uniform_real_distribution<double> dist(cfg.factor_min, cfg.factor_max);
        row.push_back(dist(rng));
      }
    }
  }
  return factors;
}

std::vector<WalkRecord> augment_dataset(std::span<const WalkRecord> records,
                                        const AugmentConfig& cfg) {
  const auto factors = draw_stretch_factors(records.size(), cfg);
  std::vector<WalkRecord> out(records.begin(), records.end());
  out.reserve(records.size() * (1 + cfg.copies_per_record));
  for (std::size_t k = 0; k < records.size(); ++k) {
    for (double f : factors[k]) out.push_back(stretch_record(records[k], f));
  }
  return out;
}

}  // namespace gccrr
