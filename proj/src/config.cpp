#include "npct/config.hpp"

#include <cstdio>
#include <fstream>
#include <limits>

#include "npct/error.hpp"

namespace npct {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kDefaultPhantom = "default";

void require_known_keys(const json& j, const json& schema, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!schema.contains(key)) {
      throw ConfigError("unknown config key '" + (where.empty() ? key : where + "." + key) + "'");
    }
  }
}

// Recursive merge that rejects keys absent from `base`. Objects merge
// key-by-key except where the base value is not an object (phantom, which
// may be a string or an object, is replaced wholesale).
void strict_merge(json& base, const json& patch, const std::string& where) {
  if (!patch.is_object()) throw ConfigError("config " + (where.empty() ? "root" : where) + " must be an object");
  require_known_keys(patch, base, where);
  for (const auto& [key, value] : patch.items()) {
    const std::string path = where.empty() ? key : where + "." + key;
    json& slot = base[key];
    if (slot.is_object() && value.is_object() && path != "phantom") {
      strict_merge(slot, value, path);
    } else {
      slot = value;
    }
  }
}

double get_number(const json& j, const char* key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError("'" + where + "." + key + "' must be a number");
  return v.get<double>();
}

std::uint64_t get_count(const json& j, const char* key, const std::string& where) {
  const json& v = j.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
  throw ConfigError("'" + where + "." + key + "' must be a non-negative integer");
}

bool get_bool(const json& j, const char* key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_boolean()) throw ConfigError("'" + where + "." + key + "' must be true or false");
  return v.get<bool>();
}

std::optional<double> get_optional_number(const json& j, const char* key, const std::string& where) {
  if (j.at(key).is_null()) return std::nullopt;
  return get_number(j, key, where);
}

json rect_to_json(const PixelRect& r) {
  return {{"x0", r.x0}, {"y0", r.y0}, {"width", r.width}, {"height", r.height}};
}

PixelRect rect_from_json(const json& j, const std::string& where) {
  return {get_count(j, "x0", where), get_count(j, "y0", where), get_count(j, "width", where),
          get_count(j, "height", where)};
}

json optional_to_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json read_json_file(const fs::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ConfigError(std::string(what) + " not found or unreadable: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string(what) + " " + path.string() + " is not valid JSON: " + e.what());
  }
}

// Default schema with the phantom left symbolic, used as the merge base.
json default_schema() {
  json j = config_to_json(ExperimentConfig{});
  j["phantom"] = kDefaultPhantom;
  return j;
}

}  // namespace

json phantom_to_json(const PhantomSpec& spec) {
  json shapes = json::array();
  for (const Shape& s : spec.shapes) {
    json o = {{"kind", std::string(to_string(s.kind))},
              {"material", std::string(to_string(s.material))},
              {"center_x", s.center_x},
              {"center_y", s.center_y}};
    switch (s.kind) {
      case ShapeKind::Circle: o["radius"] = s.radius; break;
      case ShapeKind::Ring:
        o["radius"] = s.radius;
        o["inner_radius"] = s.inner_radius;
        break;
      case ShapeKind::Bar:
        o["width"] = s.width;
        o["height"] = s.height;
        break;
    }
    shapes.push_back(std::move(o));
  }
  json delta = json::object();
  for (const auto& [material, value] : spec.delta_table) delta[std::string(to_string(material))] = value;
  return {{"shapes", std::move(shapes)}, {"delta", std::move(delta)}};
}

PhantomSpec phantom_from_json(const json& j, double energy_keV, const fs::path& base_dir) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == kDefaultPhantom) return default_phantom_spec(default_delta_table(energy_keV));
    fs::path p(name);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    return load_phantom_spec(p, energy_keV);
  }
  if (!j.is_object()) throw ConfigError("'phantom' must be \"default\", a file path or an object");
  require_known_keys(j, json{{"shapes", 0}, {"delta", 0}, {"materials", 0}, {"provenance", 0}},
                     "phantom");
  try {
    auto materials = builtin_materials();
    if (j.contains("materials")) {
      for (const auto& [name, m] : j.at("materials").items()) {
        const std::string where = "phantom.materials." + name;
        require_known_keys(m, json{{"density_g_cm3", 0}, {"z_over_a", 0}, {"source", 0}}, where);
        materials[material_from_string(name)] = {get_number(m, "density_g_cm3", where),
                                                  get_number(m, "z_over_a", where)};
      }
    }
    DeltaTable delta = default_delta_table(energy_keV, materials);
    if (j.contains("delta")) {
      for (const auto& [name, v] : j.at("delta").items()) {
        if (!v.is_number()) throw ConfigError("phantom.delta." + name + " must be a number");
        delta[material_from_string(name)] = v.get<double>();
      }
    }
    PhantomSpec spec = default_phantom_spec(delta);
    if (j.contains("shapes")) {
      spec.shapes.clear();
      const json schema = {{"kind", 0},   {"material", 0}, {"center_x", 0},     {"center_y", 0},
                           {"radius", 0}, {"inner_radius", 0}, {"width", 0}, {"height", 0}};
      for (const json& o : j.at("shapes")) {
        require_known_keys(o, schema, "phantom.shapes[]");
        Shape s;
        s.kind = shape_kind_from_string(o.at("kind").get<std::string>());
        s.material = material_from_string(o.at("material").get<std::string>());
        s.center_x = get_number(o, "center_x", "shape");
        s.center_y = get_number(o, "center_y", "shape");
        s.radius = o.value("radius", 0.0);
        s.inner_radius = o.value("inner_radius", 0.0);
        s.width = o.value("width", 0.0);
        s.height = o.value("height", 0.0);
        spec.shapes.push_back(s);
      }
    }
    return spec;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad phantom description: ") + e.what());
  }
}

PhantomSpec load_phantom_spec(const fs::path& path, double energy_keV) {
  return phantom_from_json(read_json_file(path, "phantom file"), energy_keV, path.parent_path());
}

json config_to_json(const ExperimentConfig& cfg) {
  const auto& g = cfg.geometry;
  const auto& n = cfg.noise;
  const auto& p = cfg.pwls;
  const auto& r = cfg.recon;
  return {
      {"phantom", phantom_to_json(cfg.phantom)},
      {"phantom_n", cfg.phantom_n},
      {"phantom_pixel_nm", cfg.phantom_pixel_nm},
      {"geometry",
       {{"energy_keV", g.energy_keV},
        {"magnification", g.magnification},
        {"detector_pitch_um", g.detector_pitch_um},
        {"n_views", g.n_views},
        {"angular_step_deg", g.angular_step_deg}}},
      {"detector_elements", cfg.detector_elements},
      {"sampling_step_nm", cfg.sampling_step_nm},
      {"splitting", cfg.splitting_nm},
      {"gamma", cfg.gamma},
      {"noise",
       {{"enabled", n.enabled},
        {"epsilon", n.epsilon},
        {"photons_total", n.photons_total},
        {"phase_steps", n.phase_steps},
        {"seed", n.seed}}},
      {"pwls",
       {{"alpha", optional_to_json(p.alpha)},
        {"tau", p.tau},
        {"upsilon", optional_to_json(p.upsilon)},
        {"max_iters", p.max_iters},
        {"rel_tol", p.rel_tol},
        {"nonneg", p.nonneg}}},
      {"recon",
       {{"output_n", r.output_n},
        {"output_pixel_nm", r.output_pixel_nm},
        {"window", std::string(to_string(r.window))},
        {"cutoff", r.cutoff}}},
      {"rois", {{"signal", rect_to_json(cfg.rois.signal)}, {"background", rect_to_json(cfg.rois.background)}}},
      {"output_dir", cfg.output_dir.generic_string()},
      {"save_intermediates", cfg.save_intermediates},
      {"report_runtime", cfg.report_runtime},
      {"threads", cfg.threads},
  };
}

ExperimentConfig config_from_json(const json& input, const fs::path& base_dir) {
  json j = default_schema();
  strict_merge(j, input, "");
  ExperimentConfig cfg;
  try {
    const json& g = j.at("geometry");
    cfg.geometry.energy_keV = get_number(g, "energy_keV", "geometry");
    cfg.geometry.magnification = get_number(g, "magnification", "geometry");
    cfg.geometry.detector_pitch_um = get_number(g, "detector_pitch_um", "geometry");
    cfg.geometry.n_views = get_count(g, "n_views", "geometry");
    cfg.geometry.angular_step_deg = get_number(g, "angular_step_deg", "geometry");

    cfg.phantom = phantom_from_json(j.at("phantom"), cfg.geometry.energy_keV, base_dir);
    cfg.phantom_n = get_count(j, "phantom_n", "");
    cfg.phantom_pixel_nm = get_number(j, "phantom_pixel_nm", "");
    cfg.detector_elements = get_count(j, "detector_elements", "");
    cfg.sampling_step_nm = get_number(j, "sampling_step_nm", "");

    const json& s = j.at("splitting");
    cfg.splitting_nm.clear();
    if (s.is_number()) {
      cfg.splitting_nm.push_back(s.get<double>());
    } else if (s.is_array()) {
      for (const json& v : s) {
        if (!v.is_number()) throw ConfigError("'splitting' entries must be numbers");
        cfg.splitting_nm.push_back(v.get<double>());
      }
    } else {
      throw ConfigError("'splitting' must be a number or a list of numbers");
    }
    cfg.gamma = get_number(j, "gamma", "");

    const json& n = j.at("noise");
    cfg.noise.enabled = get_bool(n, "enabled", "noise");
    cfg.noise.epsilon = get_number(n, "epsilon", "noise");
    cfg.noise.photons_total = get_number(n, "photons_total", "noise");
    cfg.noise.phase_steps = get_count(n, "phase_steps", "noise");
    cfg.noise.seed = get_count(n, "seed", "noise");

    const json& p = j.at("pwls");
    cfg.pwls.alpha = get_optional_number(p, "alpha", "pwls");
    cfg.pwls.tau = get_number(p, "tau", "pwls");
    cfg.pwls.upsilon = get_optional_number(p, "upsilon", "pwls");
    cfg.pwls.max_iters = get_count(p, "max_iters", "pwls");
    cfg.pwls.rel_tol = get_number(p, "rel_tol", "pwls");
    cfg.pwls.nonneg = get_bool(p, "nonneg", "pwls");

    const json& r = j.at("recon");
    cfg.recon.output_n = get_count(r, "output_n", "recon");
    cfg.recon.output_pixel_nm = get_number(r, "output_pixel_nm", "recon");
    cfg.recon.window = frequency_window_from_string(r.at("window").get<std::string>());
    cfg.recon.cutoff = get_number(r, "cutoff", "recon");

    const json& roi = j.at("rois");
    cfg.rois.signal = rect_from_json(roi.at("signal"), "rois.signal");
    cfg.rois.background = rect_from_json(roi.at("background"), "rois.background");

    cfg.output_dir = j.at("output_dir").get<std::string>();
    cfg.save_intermediates = get_bool(j, "save_intermediates", "");
    cfg.report_runtime = get_bool(j, "report_runtime", "");
    cfg.threads = get_count(j, "threads", "");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  try {
    cfg.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::exception&) {
    value = text;
  }
  json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!node->is_object() || !node->contains(part)) {
      throw ConfigError("override references unknown key '" + key + "'");
    }
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = std::move(value);
}

ExperimentConfig load_config(const fs::path& path, const std::vector<std::string>& overrides) {
  json j = default_schema();
  fs::path base_dir;
  if (!path.empty()) {
    if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
    strict_merge(j, read_json_file(path, "config file"), "");
    base_dir = path.parent_path();
  }
  for (const auto& o : overrides) apply_override(j, o);
  return config_from_json(j, base_dir);
}

std::string config_hash(const ExperimentConfig& cfg) {
  json j = config_to_json(cfg);
  j.erase("output_dir");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace npct
