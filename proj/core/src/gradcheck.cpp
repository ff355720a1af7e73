#include "gccrr/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gccrr {

GradcheckReport gradcheck(const ModelConfig& cfg, const GradcheckOptions& options) {
  ModelParams params = init_params(cfg);
  const ParamLayout layout(cfg);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);

  // Non-zero biases so that every gate path carries gradient signal.
  for (auto& w : params.weights) w += 0.1 * uniform(rng);

  ImuSequence imu;
  imu.samples.resize(static_cast<Eigen::Index>(options.length),
                     static_cast<Eigen::Index>(cfg.input_dim));
  for (Eigen::Index i = 0; i < imu.samples.size(); ++i) imu.samples.data()[i] = normal(rng);

  std::vector<double> target(options.length);
  for (auto& y : target) {
    y = cfg.head == Head::GccRegression ? uniform(rng) : (uniform(rng) > 0.0 ? 1.0 : 0.0);
  }

  const auto fwd = forward(params, imu);
  Gradients analytic = backward(params, fwd.cache, target);
  if (options.corrupt) options.corrupt(analytic);

  GradcheckReport report;
  report.tolerance = options.tolerance;
  for (const auto& tensor : layout.tensors()) {
    for (std::size_t k = 0; k < tensor.size(); ++k) {
      const std::size_t i = tensor.offset + k;
      const double saved = params.weights[i];
      params.weights[i] = saved + options.step;
      const double up = loss(cfg.head, forward(params, imu).output, target);
      params.weights[i] = saved - options.step;
      const double down = loss(cfg.head, forward(params, imu).output, target);
      params.weights[i] = saved;

      const double numeric = (up - down) / (2.0 * options.step);
      const double a = analytic.values[i];
      const double denom =
          std::max({std::abs(a), std::abs(numeric), options.denominator_floor});
      const double rel = std::abs(a - numeric) / denom;
      ++report.parameters_checked;
      if (rel > report.max_rel_error || report.parameters_checked == 1) {
        report.max_rel_error = rel;
        report.worst_tensor = tensor.name;
        report.worst_offset = k;
        report.worst_analytic = a;
        report.worst_numeric = numeric;
      }
    }
  }
  report.pass = std::isfinite(report.max_rel_error) && report.max_rel_error <= options.tolerance;
  return report;
}

}  // namespace gccrr
