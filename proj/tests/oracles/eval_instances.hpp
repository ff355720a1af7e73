#pragma once

// Small random evaluation instances: annotated records plus predicted curves
// that are perturbed, thinned, padded or flat, so every metric path runs.

#include <algorithm>
#include <random>
#include <vector>

#include "gccrr/gcc_codec.hpp"
#include "gccrr/types.hpp"
#include "oracles/event_trains.hpp"

namespace gccrr::oracle {

struct EvalInstance {
  std::vector<WalkRecord> records;
  std::vector<GccCurve> curves;
};

inline GccCurve perturbed_curve(std::mt19937_64& rng, const EventTrain& train) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double mode = unit(rng);
  if (mode < 0.05) return GccCurve{std::vector<double>(train.length, 0.0)};

  std::vector<GaitEvent> ev;
  std::uniform_int_distribution<int> shift(-9, 9);
  for (const auto& e : train.events) {
    if (e.kind != EventKind::ToeOff && unit(rng) < 0.1) continue;  // missed strike
    const long at = std::clamp<long>(static_cast<long>(e.index) + (unit(rng) < 0.6 ? shift(rng) : 0), 0,
                                     static_cast<long>(train.length) - 1);
    ev.push_back({static_cast<std::size_t>(at), e.kind});
  }
  if (unit(rng) < 0.2) {
    ev.push_back({static_cast<std::size_t>(rng() % train.length),
                  unit(rng) < 0.5 ? EventKind::LeftHeelStrike : EventKind::RightHeelStrike});
  }
  std::sort(ev.begin(), ev.end(), [](const GaitEvent& a, const GaitEvent& b) { return a.index < b.index; });
  ev.erase(std::unique(ev.begin(), ev.end(), [](const GaitEvent& a, const GaitEvent& b) { return a.index == b.index; }),
           ev.end());
  if (ev.empty()) return GccCurve{std::vector<double>(train.length, 0.0)};
  GccCurve c = encode_gcc(ev, train.length);
  std::normal_distribution<double> noise(0.0, mode < 0.5 ? 0.05 : 0.3);
  for (double& v : c.values) v = std::clamp(v + noise(rng), -1.0, 1.0);
  return c;
}

inline EvalInstance random_eval_instance(std::mt19937_64& rng) {
  EvalInstance inst;
  const std::size_t n = 1 + rng() % 4;
  for (std::size_t k = 0; k < n; ++k) {
    const auto train = random_event_train(rng);
    WalkRecord r;
    r.subject_id = "S01";
    r.imu.samples = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(train.length), 1);
    r.imu.rate_hz = 30.0;
    r.events = train.events;
    inst.curves.push_back(perturbed_curve(rng, train));
    inst.records.push_back(std::move(r));
  }
  return inst;
}

}  // namespace gccrr::oracle
