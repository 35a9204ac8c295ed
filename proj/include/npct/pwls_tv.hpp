#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "npct/grid.hpp"
#include "npct/noise.hpp"
#include "npct/split_operator.hpp"

namespace npct {

/// Hyperparameters of the PWLS-TV denoiser.
///
/// The update takes a fidelity step with the exact line-search length plus a
/// TV step of fixed length `tau` along the normalised TV gradient. `alpha`
/// weights TV in the reported objective and gates the TV step: alpha == 0
/// disables it. Unset alpha resolves to 1 / sqrt(mean Λ), so that fidelity
/// (in units of the noise variance) and α·TV share a scale. Unset upsilon
/// resolves to 1e-8 s², with s the median magnitude of the initial estimate.
struct PwlsConfig {
  std::optional<double> alpha;
  double tau = 0.02;
  std::optional<double> upsilon;
  std::size_t max_iters = 200;
  double rel_tol = 1e-6;
  bool nonneg = true;
  /// Worker threads across views in denoise_sinogram; 0 = hardware.
  std::size_t threads = 0;

  /// tau >= 0, rel_tol >= 0, and any set upsilon/alpha positive/non-negative.
  /// max_iters == 0 is allowed and returns the initial estimate untouched.
  void validate() const;
};

struct SolveReport {
  std::size_t iterations_run = 0;
  std::vector<double> objective_trace;
  double final_residual = 0.0;
  bool converged = false;
};

/// Smoothed total variation Σ_q sqrt((φ_q - φ_{q-1})² + υ) over q = 1..m-1.
double tv_value(std::span<const double> phi, double upsilon);
std::vector<double> tv_gradient(std::span<const double> phi, double upsilon);

/// (Φ - Bφ)ᵀ Λ⁻¹ (Φ - Bφ).
double fidelity(std::span<const double> phi, std::span<const double> Phi,
                const SplitOperator& op, const DiagonalMatrix& lambda);

/// Fidelity plus α·TV. Requires cfg.alpha and cfg.upsilon to be set.
double objective(std::span<const double> phi, std::span<const double> Phi,
                 const SplitOperator& op, const DiagonalMatrix& lambda, const PwlsConfig& cfg);

/// η = GᵀG / ((BG)ᵀ Λ⁻¹ (BG)) with G = Bᵀ Λ⁻¹ (Bφ - Φ): the exact minimiser
/// of the fidelity along -G. Returns nullopt when G (or BG) vanishes, i.e.
/// φ already minimises the fidelity.
std::optional<double> fidelity_step_size(std::span<const double> phi,
                                         std::span<const double> Phi, const SplitOperator& op,
                                         const DiagonalMatrix& lambda);

double default_alpha(const DiagonalMatrix& lambda);
double default_upsilon(std::span<const double> init);

/// Fills unset alpha/upsilon from Λ and the initial estimate.
PwlsConfig resolve(const PwlsConfig& cfg, const DiagonalMatrix& lambda,
                   std::span<const double> init);

/// Runs the PWLS-TV iteration from `init` until `max_iters` or until the
/// objective changes by less than rel_tol relative between iterations.
/// Throws NumericalFailure (with the trace so far) on a non-finite objective.
std::pair<std::vector<double>, SolveReport> solve(std::span<const double> Phi,
                                                  const SplitOperator& op,
                                                  const DiagonalMatrix& lambda,
                                                  const PwlsConfig& cfg,
                                                  std::span<const double> init);

struct DenoiseResult {
  Sinogram sinogram;
  std::vector<SolveReport> reports;
};

/// Denoises each view of an inverted sinogram. The split measurement for a
/// view is reconstructed as B·row, and the row itself is the starting point.
/// Solver failures carry the offending view index.
DenoiseResult denoise_sinogram(const Sinogram& inverted, const SplitOperator& op,
                               const NoiseModel& model, const PwlsConfig& cfg);

/// As above, with the measured split sinogram supplied explicitly.
DenoiseResult denoise_sinogram(const Sinogram& inverted, const Sinogram& split,
                               const SplitOperator& op, const NoiseModel& model,
                               const PwlsConfig& cfg);

}  // namespace npct
