#include "npct/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

#include "npct/config.hpp"
#include "npct/error.hpp"
#include "npct/io.hpp"
#include "npct/log.hpp"
#include "npct/noise.hpp"
#include "npct/pipeline.hpp"
#include "npct/projector.hpp"
#include "npct/split_operator.hpp"

namespace npct {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::string input;
  std::string split_input;
  std::string kind = "all";
  bool save_intermediates = false;
  int verbose = 0;
  bool quiet = false;
};

std::string splitting_label(double ds) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%g", ds);
  return buf;
}

class Runner {
 public:
  Runner(const Options& opt, ExperimentConfig cfg) : opt_(opt), cfg_(std::move(cfg)) {}

  const ExperimentConfig& cfg() const { return cfg_; }
  fs::path out(const std::string& name) const { return cfg_.output_dir / name; }

  void phantom() {
    write_image(truth(), out("phantom"), kImageWindow);
  }

  void project() { write_sinogram_dump(clean(), out("sino_clean")); }

  void split() { write_sinogram_dump(measured(), out("sino_split")); }

  void invert() { write_sinogram_dump(inverted(), out("sino_inverted")); }

  void denoise() { write_sinogram_dump(denoised(), out("sino_denoised")); }

  void reconstruct() {
    Sinogram sino = opt_.input.empty() ? denoised() : read_sinogram_dump(opt_.input);
    ReconConfig recon = cfg_.recon;
    recon.threads = cfg_.threads;
    recon.filter = filter_for(sino.kind());
    const ImageGrid2D img = tagged("reconstruct", [&] {
      return npct::reconstruct(sino, recon, cfg_.geometry.wavenumber_per_nm());
    });
    write_image(img, out("recon"), kImageWindow);
  }

  void pipeline() {
    std::vector<PipelineKind> kinds;
    if (opt_.kind == "all") {
      kinds = {PipelineKind::Direct, PipelineKind::Inverted, PipelineKind::Denoised};
    } else if (opt_.kind == "direct") {
      kinds = {PipelineKind::Direct};
    } else if (opt_.kind == "inverted") {
      kinds = {PipelineKind::Inverted};
    } else if (opt_.kind == "denoised") {
      kinds = {PipelineKind::Denoised};
    } else {
      throw ConfigError("unknown pipeline kind '" + opt_.kind + "'");
    }
    const Scene& sc = scene();
    write_image(sc.truth, out("truth"), kImageWindow);
    const double ds = cfg_.splitting_nm.front();
    CsvTable table{{"pipeline", "delta_s_nm", "snr", "rmse", "iterations", "runtime_ms"}, {}};
    for (PipelineKind kind : kinds) {
      const PipelineResult r = run_pipeline(kind, cfg_, sc, ds);
      const std::string name(to_string(kind));
      write_image(r.image, out("recon_" + name), kImageWindow);
      write_image(r.residual, out("residual_" + name), kResidualWindow);
      save_intermediates(r, name);
      log::info(name + ": snr " + format_double(r.snr) + ", rmse " + format_double(r.rmse));
      table.rows.push_back({name, format_double(ds), format_double(r.snr), format_double(r.rmse),
                            std::to_string(r.iterations), runtime_cell(r.runtime_ms())});
    }
    write_csv(table, out("metrics.csv"));
  }

  void sweep() {
    const auto rows = run_sweep(cfg_, true);
    CsvTable table{{"delta_s_nm", "snr", "rmse", "iterations", "runtime_ms", "status"}, {}};
    for (const auto& row : rows) {
      const std::string label = "ds_" + splitting_label(row.splitting_nm);
      if (row.result) {
        write_image(row.result->image, out("recon_" + label), kImageWindow);
        write_image(row.result->residual, out("residual_" + label), kResidualWindow);
        save_intermediates(*row.result, label);
      }
      table.rows.push_back({format_double(row.splitting_nm), format_double(row.snr),
                            format_double(row.rmse), std::to_string(row.iterations),
                            row.result ? runtime_cell(row.runtime_ms) : std::string(), row.status});
    }
    write_csv(table, out("sweep.csv"));
  }

 private:
  template <typename F>
  static auto tagged(const char* stage, F&& body) -> decltype(body()) {
    try {
      return body();
    } catch (Error& e) {
      if (e.stage().empty()) e.set_stage(stage);
      throw;
    }
  }

  std::string runtime_cell(double ms) const {
    return cfg_.report_runtime ? format_double(ms) : std::string();
  }

  void save_intermediates(const PipelineResult& r, const std::string& label) const {
    if (!cfg_.save_intermediates) return;
    for (const auto& s : r.intermediates) {
      write_sinogram_dump(s, out("sino_" + label + "_" + std::string(to_string(s.kind()))));
    }
  }

  const Scene& scene() {
    if (!scene_) scene_ = prepare_scene(cfg_);
    return *scene_;
  }

  const ImageGrid2D& truth() { return scene().truth; }
  const Sinogram& clean() { return scene().clean; }

  SplitOperator operator_for(const Sinogram& sino, double ds) const {
    return tagged("build-operator", [&] {
      return SplitOperator::build(sino.m(), delta_from_splitting(ds, sino.element_pitch_nm()),
                                  cfg_.gamma);
    });
  }

  Sinogram measured() {
    if (!opt_.input.empty() && stage_input_ == Stage::Split) {
      const Sinogram in = read_sinogram_dump(opt_.input);
      if (in.kind() != SinogramKind::Clean) throw ConfigError("split expects a clean sinogram dump");
      return split_of(in, cfg_.splitting_nm.front());
    }
    if (!opt_.split_input.empty()) return read_sinogram_dump(opt_.split_input);
    if (!opt_.input.empty() && stage_input_ == Stage::Invert) return read_sinogram_dump(opt_.input);
    return split_of(clean(), cfg_.splitting_nm.front());
  }

  Sinogram split_of(const Sinogram& clean_sino, double ds) const {
    const SplitOperator op = operator_for(clean_sino, ds);
    return tagged("split", [&] {
      Sinogram s = split_sinogram(clean_sino, op, ds, cfg_.threads);
      if (cfg_.noise.enabled) s = inject_noise(s, cfg_.noise.model(), cfg_.noise.seed);
      return s;
    });
  }

  Sinogram inverted() {
    const Sinogram split = measured();
    if (split.kind() != SinogramKind::Split) throw ConfigError("inversion expects a split sinogram");
    const SplitOperator op = operator_for(split, split.splitting_nm());
    return tagged("invert", [&] { return invert_sinogram(split, op, cfg_.threads); });
  }

  Sinogram denoised() {
    std::optional<Sinogram> inv;
    std::optional<Sinogram> split;
    if (!opt_.input.empty() && stage_input_ == Stage::Denoise) {
      inv = read_sinogram_dump(opt_.input);
      if (!opt_.split_input.empty()) split = read_sinogram_dump(opt_.split_input);
    } else {
      split = measured();
      const SplitOperator op = operator_for(*split, split->splitting_nm());
      inv = tagged("invert", [&] { return invert_sinogram(*split, op, cfg_.threads); });
    }
    if (inv->kind() != SinogramKind::Inverted) throw ConfigError("denoise expects an inverted sinogram");
    const SplitOperator op = operator_for(*inv, inv->splitting_nm());
    const NoiseModel model = NoiseModel::uniform(cfg_.noise.epsilon, cfg_.noise.photons_total,
                                                 cfg_.noise.phase_steps);
    PwlsConfig pwls = cfg_.pwls;
    pwls.threads = cfg_.threads;
    DenoiseResult r = tagged("denoise", [&] {
      return split ? denoise_sinogram(*inv, *split, op, model, pwls)
                   : denoise_sinogram(*inv, op, model, pwls);
    });
    std::size_t iters = 0;
    for (const auto& rep : r.reports) iters = std::max(iters, rep.iterations_run);
    log::info("denoise: max iterations per view " + std::to_string(iters));
    return std::move(r.sinogram);
  }

 public:
  enum class Stage { None, Split, Invert, Denoise, Reconstruct };
  void set_input_stage(Stage s) { stage_input_ = s; }

 private:
  const Options& opt_;
  ExperimentConfig cfg_;
  std::optional<Scene> scene_;
  Stage stage_input_ = Stage::None;
};

int report(int code, const std::string& kind, const std::string& message) {
  std::cerr << "npct: " << kind << ": " << message << '\n';
  log::set_file_sink({});
  return code;
}

}  // namespace

int parse_and_dispatch(std::vector<std::string> args) {
  std::vector<char*> argv;
  argv.reserve(args.size());
  for (auto& a : args) argv.push_back(a.data());
  return parse_and_dispatch(static_cast<int>(argv.size()), argv.data());
}

int parse_and_dispatch(int argc, char** argv) {
  CLI::App app{"Phase-contrast CT with signal splitting: simulation, inversion, denoising and FBP",
               "npct"};
  app.set_version_flag("--version", std::string("npct ") + NPCT_VERSION);
  app.require_subcommand(1);

  Options opt;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  app.add_option("-c,--config", opt.config_path, "JSON experiment config (defaults when omitted)");
  app.add_option("--set", opt.overrides,
                 "Override a config value, key=value with a dotted key and a JSON value "
                 "(e.g. --set splitting=[20,202,204,500]); repeatable");
  app.add_option("-o,--output-dir", opt.output_dir, "Output directory (overrides the config)")
      ->envname("NPCT_OUTPUT_DIR");
  auto* seed_opt = app.add_option("--seed", seed, "Noise seed (overrides noise.seed)");
  auto* threads_opt = app.add_option("-j,--threads", threads, "Worker threads, 0 = hardware");
  app.add_flag("--save-intermediates", opt.save_intermediates, "Write intermediate sinogram dumps");
  app.add_flag("-v,--verbose", opt.verbose, "More logging (debug)");
  app.add_flag("-q,--quiet", opt.quiet, "Only warnings and errors on stderr");

  struct Sub {
    const char* name;
    const char* help;
    Runner::Stage stage;
  };
  const Sub subs[] = {
      {"phantom", "Render the phantom", Runner::Stage::None},
      {"project", "Forward-project the phantom into a clean sinogram", Runner::Stage::None},
      {"split", "Apply signal splitting (and noise) to a clean sinogram", Runner::Stage::Split},
      {"invert", "Invert the splitting operator on a split sinogram", Runner::Stage::Invert},
      {"denoise", "PWLS-TV denoise an inverted sinogram", Runner::Stage::Denoise},
      {"reconstruct", "Filtered backprojection of a sinogram dump", Runner::Stage::Reconstruct},
      {"pipeline", "Run the direct, inverted and denoised pipelines", Runner::Stage::None},
      {"sweep", "Denoised pipeline over every splitting distance in the config", Runner::Stage::None},
  };
  std::vector<CLI::App*> commands;
  for (const auto& s : subs) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    cmd->fallthrough();
    if (s.stage != Runner::Stage::None) {
      cmd->add_option("-i,--input", opt.input, "Input sinogram dump (stem, .hdr or .raw)");
    }
    if (s.stage == Runner::Stage::Denoise) {
      cmd->add_option("--split-input", opt.split_input, "Measured split sinogram dump");
    }
    if (std::string(s.name) == "pipeline") {
      cmd->add_option("-k,--kind", opt.kind, "direct, inverted, denoised or all")
          ->check(CLI::IsMember({"direct", "inverted", "denoised", "all"}));
    }
    commands.push_back(cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (seed_opt->count() > 0) opt.seed = seed;
  if (threads_opt->count() > 0) opt.threads = threads;

  log::set_level(opt.quiet ? log::Level::Warn : opt.verbose > 0 ? log::Level::Debug : log::Level::Info);

  std::size_t which = 0;
  while (which < commands.size() && !commands[which]->parsed()) ++which;
  const Sub& sub = subs[which];

  try {
    ExperimentConfig cfg = load_config(opt.config_path, opt.overrides);
    if (opt.seed) cfg.noise.seed = *opt.seed;
    if (opt.threads) cfg.threads = *opt.threads;
    if (!opt.output_dir.empty()) cfg.output_dir = opt.output_dir;
    if (opt.save_intermediates) cfg.save_intermediates = true;

    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw IoError("cannot create output directory " + cfg.output_dir.string() + ": " + ec.message());
    log::set_file_sink(cfg.output_dir / "run.log");
    log::info(std::string("npct ") + NPCT_VERSION + " " + sub.name);
    log::info("config hash " + config_hash(cfg) + ", seed " + std::to_string(cfg.noise.seed));
    log::debug("config " + config_to_json(cfg).dump());

    Runner runner(opt, std::move(cfg));
    runner.set_input_stage(sub.stage);
    const std::string name = sub.name;
    if (name == "phantom") runner.phantom();
    else if (name == "project") runner.project();
    else if (name == "split") runner.split();
    else if (name == "invert") runner.invert();
    else if (name == "denoise") runner.denoise();
    else if (name == "reconstruct") runner.reconstruct();
    else if (name == "pipeline") runner.pipeline();
    else runner.sweep();
    log::info("done");
    log::set_file_sink({});
    return kExitOk;
  } catch (const ConfigError& e) {
    return report(kExitConfig, "config error", e.what());
  } catch (const InvalidArgument& e) {
    return report(kExitConfig, "invalid argument", e.what());
  } catch (const NumericalFailure& e) {
    return report(kExitNumeric, "numerical failure", e.what());
  } catch (const IoError& e) {
    return report(kExitIo, "i/o error", e.what());
  } catch (const std::exception& e) {
    return report(kExitNumeric, "error", e.what());
  }
}

}  // namespace npct
