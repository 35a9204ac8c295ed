#include "npct/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "npct/error.hpp"
#include "npct/log.hpp"
#include "npct/noise.hpp"
#include "npct/projector.hpp"
#include "npct/split_operator.hpp"

namespace npct {

std::string_view to_string(PipelineKind kind) {
  switch (kind) {
    case PipelineKind::Direct: return "direct";
    case PipelineKind::Inverted: return "inverted";
    case PipelineKind::Denoised: return "denoised";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  geometry.validate();
  phantom.validate(phantom_n);
  if (!(phantom_pixel_nm > 0.0)) throw ConfigError("phantom pixel size must be positive");
  if (detector_elements < 2) throw ConfigError("detector needs at least two elements");
  if (splitting_nm.empty()) throw ConfigError("splitting list must not be empty");
  for (double s : splitting_nm) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("splitting distances must be >= 0");
  }
  if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
  pwls.validate();
  recon.validate();
  rois.validate(recon.output_n);
  if (noise.enabled) (void)noise.model();
}

double PipelineResult::runtime_ms() const {
  double total = 0.0;
  for (const auto& t : timings) total += t.milliseconds;
  return total;
}

namespace {

class StageClock {
 public:
  explicit StageClock(std::vector<StageTiming>& sink) : sink_(sink) {}

  template <typename F>
  auto run(const std::string& stage, F&& body) -> decltype(body()) {
    const auto start = std::chrono::steady_clock::now();
    auto finish = [&] {
      const std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - start;
      sink_.push_back({stage, dt.count()});
      log::info("stage " + stage + ": " + std::to_string(dt.count()) + " ms");
    };
    try {
      if constexpr (std::is_void_v<decltype(body())>) {
        body();
        finish();
      } else {
        auto out = body();
        finish();
        return out;
      }
    } catch (Error& e) {
      if (e.stage().empty()) e.set_stage(stage);
      throw;
    }
  }

 private:
  std::vector<StageTiming>& sink_;
};

ProjectionConfig projection_config(const ExperimentConfig& cfg) {
  ProjectionConfig p;
  p.n_views = cfg.geometry.n_views;
  p.angular_step_deg = cfg.geometry.angular_step_deg;
  p.m = cfg.detector_elements;
  p.sampling_step_nm = cfg.sampling_step_nm;
  p.threads = cfg.threads;
  return p;
}

}  // namespace

Scene prepare_scene(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<StageTiming> timings;
  StageClock clock(timings);
  ImageGrid2D truth = clock.run("phantom", [&] {
    return render_phantom(cfg.phantom, cfg.phantom_n, cfg.phantom_pixel_nm);
  });
  Sinogram clean = clock.run("project", [&] {
    return forward_project(truth, cfg.geometry, projection_config(cfg));
  });
  return {std::move(truth), std::move(clean)};
}

PipelineResult run_pipeline(PipelineKind kind, const ExperimentConfig& cfg, const Scene& scene,
                            double splitting_nm) {
  PipelineResult result;
  result.kind = kind;
  result.splitting_nm = splitting_nm;
  StageClock clock(result.timings);
  const double pitch = scene.clean.element_pitch_nm();
  const double k = cfg.geometry.wavenumber_per_nm();

  log::info("pipeline " + std::string(to_string(kind)) + " at splitting " +
            std::to_string(splitting_nm) + " nm");

  const SplitOperator op = clock.run("build-operator", [&] {
    return SplitOperator::build(scene.clean.m(), delta_from_splitting(splitting_nm, pitch),
                                cfg.gamma);
  });
  Sinogram measured = clock.run("split", [&] {
    Sinogram split = split_sinogram(scene.clean, op, splitting_nm, cfg.threads);
    if (cfg.noise.enabled) split = inject_noise(split, cfg.noise.model(), cfg.noise.seed);
    return split;
  });
  if (cfg.save_intermediates) result.intermediates.push_back(measured);

  ReconConfig recon = cfg.recon;
  recon.threads = cfg.threads;
  std::optional<Sinogram> unsplit;
  if (kind == PipelineKind::Direct) {
    recon.filter = FilterKind::Hilbert;
  } else {
    recon.filter = FilterKind::Ramp;
    unsplit = clock.run("invert", [&] { return invert_sinogram(measured, op, cfg.threads); });
    if (cfg.save_intermediates) result.intermediates.push_back(*unsplit);
    if (kind == PipelineKind::Denoised) {
      const NoiseModel model = cfg.noise.enabled
                                   ? cfg.noise.model()
                                   : NoiseModel::uniform(cfg.noise.epsilon, cfg.noise.photons_total,
                                                         cfg.noise.phase_steps);
      PwlsConfig pwls = cfg.pwls;
      pwls.threads = cfg.threads;
      DenoiseResult denoised = clock.run("denoise", [&] {
        return denoise_sinogram(*unsplit, measured, op, model, pwls);
      });
      for (const auto& r : denoised.reports) {
        result.iterations = std::max(result.iterations, r.iterations_run);
      }
      unsplit = std::move(denoised.sinogram);
      if (cfg.save_intermediates) result.intermediates.push_back(*unsplit);
    }
  }

  const Sinogram& source = unsplit ? *unsplit : measured;
  result.image = clock.run("reconstruct", [&] { return reconstruct(source, recon, k); });
  clock.run("metrics", [&] {
    result.residual = residual_map(result.image, scene.truth);
    result.rmse = rmse(result.image, scene.truth);
    result.snr = snr(result.image, cfg.rois);
  });
  return result;
}

namespace {

PipelineResult run_single(PipelineKind kind, const ExperimentConfig& cfg) {
  const Scene scene = prepare_scene(cfg);
  return run_pipeline(kind, cfg, scene, cfg.splitting_nm.front());
}

}  // namespace

PipelineResult run_pipeline_direct(const ExperimentConfig& cfg) {
  return run_single(PipelineKind::Direct, cfg);
}

PipelineResult run_pipeline_inverted(const ExperimentConfig& cfg) {
  return run_single(PipelineKind::Inverted, cfg);
}

PipelineResult run_pipeline_denoised(const ExperimentConfig& cfg) {
  return run_single(PipelineKind::Denoised, cfg);
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, bool keep_results) {
  const double pitch = effective_pitch(cfg.geometry);
  bool any_fractional = false;
  for (double s : cfg.splitting_nm) {
    const double d = delta_from_splitting(s, pitch);
    any_fractional = any_fractional || d != std::floor(d);
  }
  if (!any_fractional) {
    log::warn("sweep has no fractional splitting offset; the fractional operator path is unused");
  }

  const Scene scene = prepare_scene(cfg);
  std::vector<SweepRow> rows;
  rows.reserve(cfg.splitting_nm.size());
  for (double s : cfg.splitting_nm) {
    SweepRow row;
    row.splitting_nm = s;
    try {
      PipelineResult r = run_pipeline(PipelineKind::Denoised, cfg, scene, s);
      row.snr = r.snr;
      row.rmse = r.rmse;
      row.iterations = r.iterations;
      row.runtime_ms = r.runtime_ms();
      if (keep_results) row.result = std::move(r);
    } catch (const Error& e) {
      log::error("sweep entry " + std::to_string(s) + " nm failed: " + e.what());
      row.snr = std::numeric_limits<double>::quiet_NaN();
      row.rmse = std::numeric_limits<double>::quiet_NaN();
      row.status = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace npct
