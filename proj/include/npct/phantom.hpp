#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "npct/grid.hpp"

namespace npct {

enum class Material { LungTissue, Protein, Polystyrene };
enum class ShapeKind { Circle, Ring, Bar };

std::string_view to_string(Material material);
Material material_from_string(std::string_view name);
std::string_view to_string(ShapeKind kind);
ShapeKind shape_kind_from_string(std::string_view name);

/// One binary-membership primitive. Coordinates and sizes are in pixels,
/// x along columns and y along rows, measured to pixel centres.
struct Shape {
  ShapeKind kind = ShapeKind::Circle;
  double center_x = 0.0;
  double center_y = 0.0;
  double radius = 0.0;        // Circle radius, Ring outer radius
  double inner_radius = 0.0;  // Ring only
  double width = 0.0;         // Bar only
  double height = 0.0;        // Bar only
  Material material = Material::Protein;
};

using DeltaTable = std::map<Material, double>;

struct PhantomSpec {
  std::vector<Shape> shapes;
  DeltaTable delta_table;

  /// Throws InvalidSpec when a shape leaves the n x n grid, has degenerate
  /// dimensions, or references a material whose δ is missing or outside
  /// (0, 1e-4).
  void validate(std::size_t n) const;
};

/// Electron-density description of a material: mass density and mean Z/A.
struct MaterialConstants {
  double density_g_cm3 = 0.0;
  double z_over_a = 0.0;
};

/// Composition data shipped with the project (see configs/materials.json for
/// the same values and their sources).
std::map<Material, MaterialConstants> builtin_materials();

/// δ of each material far from absorption edges, δ = r_e λ² n_e / 2π.
/// Supported for 5-30 keV, where the low-Z constituents are edge-free.
/// Throws UnsupportedEnergy outside that range; supply a custom table there.
DeltaTable default_delta_table(double energy_keV,
                               const std::map<Material, MaterialConstants>& materials =
                                   builtin_materials());

/// Rasterises the spec. Later shapes overwrite earlier ones; background is 0.
ImageGrid2D render_phantom(const PhantomSpec& spec, std::size_t n, double pixel_size_nm);

/// Three clusters of circles, rings, and bars inside the inscribed disk of a
/// 512-pixel grid. `delta` is used as-is; pass default_delta_table(E) for the
/// shipped constants.
PhantomSpec default_phantom_spec(DeltaTable delta);

}  // namespace npct
