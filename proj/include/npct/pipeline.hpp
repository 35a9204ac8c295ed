#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "npct/fbp.hpp"
#include "npct/grid.hpp"
#include "npct/metrics.hpp"
#include "npct/phantom.hpp"
#include "npct/pwls_tv.hpp"

namespace npct {

struct NoiseSettings {
  bool enabled = true;
  double epsilon = 0.7;
  double photons_total = 10000.0;
  std::size_t phase_steps = 1;
  std::uint64_t seed = 1;

  NoiseModel model() const { return NoiseModel::uniform(epsilon, photons_total, phase_steps); }
};

/// Everything one reconstruction experiment needs.
struct ExperimentConfig {
  PhantomSpec phantom = default_phantom_spec(default_delta_table(8.0));
  std::size_t phantom_n = 512;
  double phantom_pixel_nm = 10.0;
  SystemGeometry geometry;
  std::size_t detector_elements = 600;
  double sampling_step_nm = 0.0;
  /// Splitting distances Δs in nm. Single pipelines use the first entry.
  std::vector<double> splitting_nm{200.0};
  double gamma = 1e-12;
  NoiseSettings noise;
  PwlsConfig pwls;
  ReconConfig recon;
  RoiSpec rois{{160, 130, 40, 40}, {380, 100, 40, 40}};
  std::filesystem::path output_dir = "npct_out";
  bool save_intermediates = false;
  bool report_runtime = false;
  std::size_t threads = 0;

  void validate() const;
};

enum class PipelineKind { Direct, Inverted, Denoised };

std::string_view to_string(PipelineKind kind);

struct StageTiming {
  std::string stage;
  double milliseconds = 0.0;
};

/// Phantom and its clean projections, shared across pipelines and sweep
/// entries that only differ downstream of projection.
struct Scene {
  ImageGrid2D truth;
  Sinogram clean;
};

Scene prepare_scene(const ExperimentConfig& cfg);

struct PipelineResult {
  PipelineKind kind = PipelineKind::Denoised;
  double splitting_nm = 0.0;
  ImageGrid2D image = ImageGrid2D::zeros(1, 1.0);
  ImageGrid2D residual = ImageGrid2D::zeros(1, 1.0);
  double snr = 0.0;
  double rmse = 0.0;
  /// Largest per-view PWLS iteration count (0 when no denoising ran).
  std::size_t iterations = 0;
  std::vector<StageTiming> timings;
  /// Populated when cfg.save_intermediates is set.
  std::vector<Sinogram> intermediates;

  double runtime_ms() const;
};

/// Runs one pipeline at splitting distance `splitting_nm` on a prepared
/// scene:
///   Direct:   split -> noise -> Hilbert FBP
///   Inverted: split -> noise -> B⁻¹ -> ramp FBP
///   Denoised: split -> noise -> B⁻¹ -> PWLS-TV -> ramp FBP
/// The noise realisation depends only on cfg.noise.seed, so all three
/// pipelines see the same measurement. Errors are tagged with the stage.
PipelineResult run_pipeline(PipelineKind kind, const ExperimentConfig& cfg, const Scene& scene,
                            double splitting_nm);

PipelineResult run_pipeline_direct(const ExperimentConfig& cfg);
PipelineResult run_pipeline_inverted(const ExperimentConfig& cfg);
PipelineResult run_pipeline_denoised(const ExperimentConfig& cfg);

struct SweepRow {
  double splitting_nm = 0.0;
  double snr = 0.0;
  double rmse = 0.0;
  std::size_t iterations = 0;
  double runtime_ms = 0.0;
  std::string status = "ok";
  std::optional<PipelineResult> result;
};

/// Denoised pipeline for every Δs in cfg.splitting_nm, in list order. A
/// failing entry is recorded with its error in `status` (and NaN metrics)
/// and the sweep continues.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, bool keep_results = false);

}  // namespace npct
