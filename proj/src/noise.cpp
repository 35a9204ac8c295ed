#include "npct/noise.hpp"

#include <cmath>
#include <random>
#include <string>

#include "npct/error.hpp"

namespace npct {

double phase_variance(double epsilon, double photons_total) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw InvalidArgument("interferometer efficiency must lie in (0, 1]");
  }
  if (!(photons_total > 0.0)) throw InvalidArgument("photon count must be positive");
  return 2.0 / (epsilon * epsilon * photons_total);
}

NoiseModel::NoiseModel(double epsilon, std::size_t phase_steps,
                       std::vector<double> photons_per_step)
    : epsilon_(epsilon), phase_steps_(phase_steps), photons_(std::move(photons_per_step)) {
  if (!(epsilon_ > 0.0 && epsilon_ <= 1.0)) {
    throw InvalidArgument("interferometer efficiency must lie in (0, 1]");
  }
  if (phase_steps_ == 0) throw InvalidArgument("at least one phase step is required");
  if (photons_.empty()) throw InvalidArgument("noise model needs photon counts");
  for (double p : photons_) {
    if (!(p > 0.0)) throw InvalidArgument("photon counts must be positive");
  }
}

NoiseModel NoiseModel::uniform(double epsilon, double photons_total, std::size_t phase_steps) {
  if (phase_steps == 0) throw InvalidArgument("at least one phase step is required");
  return NoiseModel(epsilon, phase_steps, {photons_total / static_cast<double>(phase_steps)});
}

double NoiseModel::photons_total(std::size_t element) const {
  const double per_step = photons_.size() == 1 ? photons_[0] : photons_.at(element);
  return per_step * static_cast<double>(phase_steps_);
}

double NoiseModel::variance(std::size_t element) const {
  return phase_variance(epsilon_, photons_total(element));
}

std::vector<double> NoiseModel::variances(std::size_t m) const {
  if (photons_.size() != 1 && photons_.size() != m) {
    throw ShapeMismatch("noise model has " + std::to_string(photons_.size()) +
                        " elements, detector has " + std::to_string(m));
  }
  std::vector<double> out(m);
  for (std::size_t q = 0; q < m; ++q) out[q] = variance(q);
  return out;
}

DiagonalMatrix DiagonalMatrix::inverse() const {
  DiagonalMatrix out{diag};
  for (double& d : out.diag) {
    if (d == 0.0) throw InvalidArgument("cannot invert a diagonal matrix with a zero entry");
    d = 1.0 / d;
  }
  return out;
}

double DiagonalMatrix::mean() const {
  double s = 0.0;
  for (double d : diag) s += d;
  return diag.empty() ? 0.0 : s / static_cast<double>(diag.size());
}

DiagonalMatrix build_weight_matrix(const NoiseModel& model, std::size_t m) {
  DiagonalMatrix lambda{model.variances(m)};
  for (double v : lambda.diag) {
    if (!(v > 0.0)) {
      throw InvalidArgument("zero phase variance gives an infinite PWLS weight");
    }
  }
  return lambda;
}

Sinogram inject_noise(const Sinogram& sino, const NoiseModel& model, std::uint64_t seed) {
  const std::vector<double> var = model.variances(sino.m());
  std::vector<double> sigma(var.size());
  for (std::size_t q = 0; q < var.size(); ++q) sigma[q] = std::sqrt(var[q]);

  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Array2D out = sino.data();
  for (std::size_t v = 0; v < out.rows(); ++v) {
    auto row = out.row(v);
    for (std::size_t q = 0; q < row.size(); ++q) {
      const double z = normal(gen);
      if (sigma[q] > 0.0) row[q] += sigma[q] * z;
    }
  }
  return sino.with_data(std::move(out));
}

}  // namespace npct
