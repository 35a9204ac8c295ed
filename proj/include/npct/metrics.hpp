#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "npct/grid.hpp"

namespace npct {

/// Axis-aligned pixel rectangle [x0, x0 + width) x [y0, y0 + height), with x
/// along columns and y along rows.
struct PixelRect {
  std::size_t x0 = 0;
  std::size_t y0 = 0;
  std::size_t width = 0;
  std::size_t height = 0;

  std::size_t area() const noexcept { return width * height; }
  bool overlaps(const PixelRect& other) const noexcept;
};

struct RoiSpec {
  PixelRect signal;
  PixelRect background;

  /// Both regions inside an n x n image, disjoint, and at least 16 pixels.
  void validate(std::size_t n) const;
};

/// mean(signal) / stddev(background), with the population standard
/// deviation. Throws NumericalFailure when the background is exactly flat.
double snr(const ImageGrid2D& img, const RoiSpec& roi);
inline double to_decibels(double ratio) { return 20.0 * std::log10(ratio); }

double rmse(const ImageGrid2D& img, const ImageGrid2D& truth);
ImageGrid2D residual_map(const ImageGrid2D& img, const ImageGrid2D& truth);

/// Pixels where `truth` differs from a 4-neighbour, grown by `radius`
/// pixels (Chebyshev distance). Row-major, n*n entries.
std::vector<bool> edge_mask(const ImageGrid2D& truth, std::size_t radius);

/// Σ |∇img|² with forward differences, over pixels selected by `mask` (all
/// pixels when the mask is empty). Sharper edges give larger values.
double edge_gradient_energy(const ImageGrid2D& img, const std::vector<bool>& mask = {});

/// Fraction of Σ residual² that falls inside `mask`.
double masked_energy_fraction(const ImageGrid2D& residual, const std::vector<bool>& mask);

}  // namespace npct
