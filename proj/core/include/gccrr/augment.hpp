#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gccrr/types.hpp"

namespace gccrr {

struct AugmentConfig {
  double factor_min = 1.0;
  double factor_max = 4.0;
  std::size_t copies_per_record = 4;
  bool integer_factors = false;  // draw whole factors from [ceil(min), floor(max)]
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const AugmentConfig&, const AugmentConfig&) = default;
};

// round-half-up(length * factor)
std::size_t stretched_length(std::size_t length, double factor);

// round-half-up(index * (stretched - 1) / (length - 1)), in exact integer arithmetic.
std::size_t map_event_index(std::size_t index, std::size_t length, std::size_t stretched);

// Slows the walk down by `factor` >= 1: every channel is linearly resampled on
// the stretched grid, events are remapped, metadata and rate_hz are kept.
// Throws ConfigError for factor < 1 and DataError for sequences shorter than 2.
WalkRecord stretch_record(const WalkRecord& record, double factor);

// factors[k][j] is the j-th stretch factor drawn for record k.
std::vector<std::vector<double>> draw_stretch_factors(std::size_t records,
                                                      const AugmentConfig& cfg);

// Originals first (input order), then copies_per_record stretched copies of
// each record in input order.
std::vector<WalkRecord> augment_dataset(std::span<const WalkRecord> records,
                                        const AugmentConfig& cfg);

}  // namespace gccrr
