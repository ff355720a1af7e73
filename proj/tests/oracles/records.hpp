#pragma once

#include <cmath>
#include <random>
#include <string>

#include "gccrr/types.hpp"
#include "oracles/event_trains.hpp"

namespace gccrr::oracle {

// Valid record around a random event train, with samples spread over many
// magnitudes so serialization sees awkward decimals.
inline WalkRecord random_record(std::mt19937_64& rng, std::size_t channels = kDefaultChannels) {
  const EventTrain train = random_event_train(rng);
  WalkRecord r;
  r.subject_id = "S" + std::to_string(std::uniform_int_distribution<int>(1, 99)(rng));
  r.side = rng() % 2 ? Side::Left : Side::Right;
  r.modality = rng() % 2 ? "normal" : "toe-in";
  r.imu.rate_hz = rng() % 2 ? 30.0 : 100.0 / 3.0;
  r.imu.samples.resize(static_cast<Eigen::Index>(train.length), static_cast<Eigen::Index>(channels));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> exponent(-12, 6);
  for (Eigen::Index i = 0; i < r.imu.samples.size(); ++i) {
    r.imu.samples.data()[i] = normal(rng) * std::pow(10.0, exponent(rng));
  }
  r.events = train.events;
  return r;
}

}  // namespace gccrr::oracle
