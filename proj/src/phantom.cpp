#include "npct/phantom.hpp"

#include <cmath>
#include <numbers>

#include "npct/error.hpp"

namespace npct {

std::string_view to_string(Material material) {
  switch (material) {
    case Material::LungTissue: return "LungTissue";
    case Material::Protein: return "Protein";
    case Material::Polystyrene: return "Polystyrene";
  }
  return "Unknown";
}

Material material_from_string(std::string_view name) {
  if (name == "LungTissue" || name == "LT") return Material::LungTissue;
  if (name == "Protein") return Material::Protein;
  if (name == "Polystyrene" || name == "PS") return Material::Polystyrene;
  throw InvalidSpec("unknown material '" + std::string(name) + "'");
}

std::string_view to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::Circle: return "circle";
    case ShapeKind::Ring: return "ring";
    case ShapeKind::Bar: return "bar";
  }
  return "unknown";
}

ShapeKind shape_kind_from_string(std::string_view name) {
  if (name == "circle") return ShapeKind::Circle;
  if (name == "ring") return ShapeKind::Ring;
  if (name == "bar") return ShapeKind::Bar;
  throw InvalidSpec("unknown shape kind '" + std::string(name) + "'");
}

namespace {

struct Extent {
  double x0, x1, y0, y1;
};

Extent extent(const Shape& s) {
  switch (s.kind) {
    case ShapeKind::Circle:
    case ShapeKind::Ring:
      return {s.center_x - s.radius, s.center_x + s.radius, s.center_y - s.radius,
              s.center_y + s.radius};
    case ShapeKind::Bar:
      return {s.center_x - s.width / 2, s.center_x + s.width / 2, s.center_y - s.height / 2,
              s.center_y + s.height / 2};
  }
  return {};
}

bool contains(const Shape& s, double x, double y) {
  const double dx = x - s.center_x;
  const double dy = y - s.center_y;
  switch (s.kind) {
    case ShapeKind::Circle:
      return dx * dx + dy * dy <= s.radius * s.radius;
    case ShapeKind::Ring: {
      const double r2 = dx * dx + dy * dy;
      return r2 <= s.radius * s.radius && r2 > s.inner_radius * s.inner_radius;
    }
    case ShapeKind::Bar:
      // Half-open so a bar of integer width covers exactly `width` columns.
      return dx >= -s.width / 2 && dx < s.width / 2 && dy >= -s.height / 2 &&
             dy < s.height / 2;
  }
  return false;
}

}  // namespace

void PhantomSpec::validate(std::size_t n) const {
  const double limit = static_cast<double>(n) - 1.0;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const Shape& s = shapes[i];
    const std::string where = "shape " + std::to_string(i) + " (" + std::string(to_string(s.kind)) + ")";
    switch (s.kind) {
      case ShapeKind::Circle:
        if (!(s.radius > 0.0)) throw InvalidSpec(where + ": radius must be positive");
        break;
      case ShapeKind::Ring:
        if (!(s.radius > 0.0) || !(s.inner_radius >= 0.0) || !(s.inner_radius < s.radius)) {
          throw InvalidSpec(where + ": need 0 <= inner_radius < outer radius");
        }
        break;
      case ShapeKind::Bar:
        if (!(s.width > 0.0) || !(s.height > 0.0)) {
          throw InvalidSpec(where + ": width and height must be positive");
        }
        break;
    }
    const Extent e = extent(s);
    const bool bar = s.kind == ShapeKind::Bar;
    // Bars are half-open on the high side, so they may reach x = n - 0.5.
    const double hi = bar ? limit + 0.5 : limit;
    const double lo = bar ? -0.5 : 0.0;
    if (e.x0 < lo || e.y0 < lo || e.x1 > hi || e.y1 > hi) {
      throw InvalidSpec(where + " does not fit inside the " + std::to_string(n) + "x" +
                        std::to_string(n) + " grid");
    }
    auto it = delta_table.find(s.material);
    if (it == delta_table.end()) {
      throw InvalidSpec(where + ": no delta value for material " +
                        std::string(to_string(s.material)));
    }
  }
  for (const auto& [material, delta] : delta_table) {
    if (!(delta > 0.0 && delta < 1e-4)) {
      throw InvalidSpec("delta for " + std::string(to_string(material)) +
                        " must lie in (0, 1e-4), got " + std::to_string(delta));
    }
  }
}

std::map<Material, MaterialConstants> builtin_materials() {
  // ICRU-44 lung tissue; protein as H50C30N9O10S1 at 1.35 g/cm3;
  // polystyrene (C8H8)n at 1.05 g/cm3.
  return {
      {Material::LungTissue, {1.05, 0.54965}},
      {Material::Protein, {1.35, 0.53372}},
      {Material::Polystyrene, {1.05, 0.53768}},
  };
}

DeltaTable default_delta_table(double energy_keV,
                               const std::map<Material, MaterialConstants>& materials) {
  if (!(energy_keV >= 5.0 && energy_keV <= 30.0)) {
    throw UnsupportedEnergy("no default delta table at " + std::to_string(energy_keV) +
                            " keV (supported: 5-30 keV); supply a custom delta_table");
  }
  constexpr double kClassicalElectronRadiusNm = 2.8179403262e-6;
  constexpr double kAvogadro = 6.02214076e23;
  const double lambda_nm = wavelength_from_energy_nm(energy_keV);
  DeltaTable table;
  for (const auto& [material, c] : materials) {
    // electrons per nm^3: (g/cm3) * (mol e / g) * N_A * 1e-21 cm3/nm3
    const double electrons_per_nm3 = c.density_g_cm3 * c.z_over_a * kAvogadro * 1e-21;
    table[material] =
        kClassicalElectronRadiusNm * lambda_nm * lambda_nm * electrons_per_nm3 / (2.0 * std::numbers::pi);
  }
  return table;
}

ImageGrid2D render_phantom(const PhantomSpec& spec, std::size_t n, double pixel_size_nm) {
  spec.validate(n);
  Array2D data(n, n);
  for (const Shape& s : spec.shapes) {
    const double value = spec.delta_table.at(s.material);
    const Extent e = extent(s);
    const auto r0 = static_cast<std::size_t>(std::max(0.0, std::floor(e.y0)));
    const auto r1 = std::min(n - 1, static_cast<std::size_t>(std::ceil(e.y1)));
    const auto c0 = static_cast<std::size_t>(std::max(0.0, std::floor(e.x0)));
    const auto c1 = std::min(n - 1, static_cast<std::size_t>(std::ceil(e.x1)));
    for (std::size_t r = r0; r <= r1; ++r) {
      for (std::size_t c = c0; c <= c1; ++c) {
        if (contains(s, static_cast<double>(c), static_cast<double>(r))) data(r, c) = value;
      }
    }
  }
  return ImageGrid2D(std::move(data), pixel_size_nm);
}

PhantomSpec default_phantom_spec(DeltaTable delta) {
  PhantomSpec spec;
  spec.delta_table = std::move(delta);
  auto circle = [&](double x, double y, double r) {
    spec.shapes.push_back({ShapeKind::Circle, x, y, r, 0, 0, 0, Material::Protein});
  };
  auto ring = [&](double x, double y, double ro, double ri) {
    spec.shapes.push_back({ShapeKind::Ring, x, y, ro, ri, 0, 0, Material::LungTissue});
  };
  auto bar = [&](double x, double y, double w, double h) {
    spec.shapes.push_back({ShapeKind::Bar, x, y, 0, 0, w, h, Material::Polystyrene});
  };
  circle(180, 150, 45);
  circle(270, 120, 28);
  circle(330, 170, 16);
  circle(300, 220, 8);
  circle(215, 230, 12);
  ring(150, 300, 48, 32);
  ring(250, 330, 32, 20);
  ring(330, 300, 20, 12);
  ring(200, 400, 24, 14);
  bar(303, 395, 6, 90);
  bar(326, 395, 10, 90);
  bar(355, 395, 14, 90);
  bar(391, 395, 20, 90);
  return spec;
}

}  // namespace npct
