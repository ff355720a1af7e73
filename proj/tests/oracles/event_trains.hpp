#pragma once

// Test-only generator of random valid event trains for codec round-trips.

#include <algorithm>
#include <cstddef>
#include <random>
#include <vector>

#include "gccrr/types.hpp"

namespace gccrr::oracle {

struct EventTrain {
  std::vector<GaitEvent> events;
  std::size_t length = 0;
};

// Alternating heel strikes (1-3 cycles, optionally one extra strike) with
// gaps in [min_gap, 3 * min_gap], toe-offs at 30-70% of most half-cycles.
// A leading/trailing toe-off sits close enough to the record edge that the
// clamped extrapolation stays below 0.4 in magnitude.
inline EventTrain random_event_train(std::mt19937_64& rng, std::size_t min_gap = 10) {
  auto uniform_int = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto coin = [&](double p) { return uniform(0.0, 1.0) < p; };

  const long gap_lo = static_cast<long>(min_gap);
  const long cycles = uniform_int(1, 3);
  const long strikes = 2 * cycles + (coin(0.3) ? 1 : 0);
  const bool left_first = coin(0.5);

  std::vector<long> at(static_cast<std::size_t>(strikes));
  std::vector<long> gaps(static_cast<std::size_t>(strikes));
  for (auto& g : gaps) g = uniform_int(gap_lo, 3 * gap_lo);

  EventTrain train;
  long start = 0;
  if (coin(0.5)) {
    // Leading toe-off at p with p < 0.4 * (s0 - p).
    const long to_gap = uniform_int(3, std::max(3L, gap_lo));
    const long p = uniform_int(0, std::max(0L, static_cast<long>(0.39 * static_cast<double>(to_gap))));
    train.events.push_back({static_cast<std::size_t>(p), EventKind::ToeOff});
    start = p + to_gap;
  } else {
    start = uniform_int(0, 2 * gap_lo);
  }
  at[0] = start;
  for (std::size_t k = 1; k < at.size(); ++k) at[k] = at[k - 1] + gaps[k - 1];

  for (std::size_t k = 0; k < at.size(); ++k) {
    const bool left = (k % 2 == 0) == left_first;
    train.events.push_back({static_cast<std::size_t>(at[k]),
                            left ? EventKind::LeftHeelStrike : EventKind::RightHeelStrike});
    if (k + 1 < at.size() && coin(0.8)) {
      const long off = std::clamp(static_cast<long>(uniform(0.3, 0.7) * static_cast<double>(gaps[k])), 1L,
                                  gaps[k] - 1);
      train.events.push_back({static_cast<std::size_t>(at[k] + off), EventKind::ToeOff});
    }
  }

  long last = at.back();
  long tail = 0;
  if (coin(0.5)) {
    const long d = uniform_int(3, std::max(3L, gap_lo));
    train.events.push_back({static_cast<std::size_t>(last + d), EventKind::ToeOff});
    last += d;
    tail = uniform_int(0, static_cast<long>(0.39 * static_cast<double>(d)));
  } else {
    tail = uniform_int(0, 2 * gap_lo);
  }
  train.length = static_cast<std::size_t>(last + tail + 1);
  return train;
}

}  // namespace gccrr::oracle
