#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "npct/grid.hpp"

namespace npct {

/// Phase variance of a phase-stepping interferometer measurement,
/// σ² = 2 / (ε² ΣI), for efficiency ε and total detected photons ΣI.
double phase_variance(double epsilon, double photons_total);

/// Photon statistics of the interferometer, one record per detector element.
///
/// `photons_per_step` holds I_q for every element q (or a single value used
/// for all elements). The photons summed over the M phase steps are
/// M * I_q. An infinite count is allowed and means a noiseless element.
class NoiseModel {
 public:
  NoiseModel(double epsilon, std::size_t phase_steps, std::vector<double> photons_per_step);

  /// Every element receives `photons_total` photons summed over all steps.
  static NoiseModel uniform(double epsilon, double photons_total, std::size_t phase_steps = 1);

  double epsilon() const noexcept { return epsilon_; }
  std::size_t phase_steps() const noexcept { return phase_steps_; }
  const std::vector<double>& photons_per_step() const noexcept { return photons_; }

  double photons_total(std::size_t element) const;
  double variance(std::size_t element) const;
  /// Per-element variances for a detector of m elements. Throws
  /// ShapeMismatch if the model is per-element with a different length.
  std::vector<double> variances(std::size_t m) const;

 private:
  double epsilon_;
  std::size_t phase_steps_;
  std::vector<double> photons_;
};

/// Diagonal covariance Λ.
struct DiagonalMatrix {
  std::vector<double> diag;

  std::size_t size() const noexcept { return diag.size(); }
  DiagonalMatrix inverse() const;
  double mean() const;
};

/// Λ = diag(σ²_1 .. σ²_m). Throws InvalidArgument on a zero variance, which
/// would give an infinite PWLS weight.
DiagonalMatrix build_weight_matrix(const NoiseModel& model, std::size_t m);

/// Adds independent zero-mean Gaussian noise with the model's per-element
/// variance to every sinogram value. Draws come from a generator seeded with
/// `seed` and are consumed row-major, so the output depends only on the
/// inputs and the seed.
Sinogram inject_noise(const Sinogram& sino, const NoiseModel& model, std::uint64_t seed);

}  // namespace npct
