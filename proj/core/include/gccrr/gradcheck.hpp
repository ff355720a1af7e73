#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "gccrr/network.hpp"

namespace gccrr {

struct GradcheckOptions {
  std::size_t length = 12;
  double tolerance = 1e-4;
  double step = 1e-5;  // central-difference half width
  // Relative errors use max(|analytic|, |numeric|, floor) as denominator.
  double denominator_floor = 1e-6;
  std::uint64_t seed = 1234;
  // Test hook: applied to the analytic gradient before comparison.
  std::function<void(Gradients&)> corrupt;
};

struct GradcheckReport {
  double max_rel_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::size_t parameters_checked = 0;
  std::string worst_tensor;
  std::size_t worst_offset = 0;  // within worst_tensor
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

// Compares backward() against central finite differences over every
// parameter, using random input and targets drawn from `options.seed`.
GradcheckReport gradcheck(const ModelConfig& cfg, const GradcheckOptions& options = {});

}  // namespace gccrr
