#pragma once

#include <cstddef>

#include "npct/grid.hpp"

namespace npct {

struct ProjectionConfig {
  std::size_t n_views = 720;
  double angular_step_deg = 0.5;
  std::size_t m = 600;
  /// Step along each ray; 0 selects half the phantom pixel size.
  double sampling_step_nm = 0.0;
  /// Worker threads across views; 0 uses the hardware concurrency.
  std::size_t threads = 0;

  void validate(double pixel_size_nm) const;
};

/// Parallel-beam phase projections φ = k ∫ δ dz of `phantom`.
///
/// One ray per detector element passes through the element centre at the
/// object-plane pitch of `geom`; the detector is centred on the phantom, so
/// the phantom is zero-padded symmetrically when m exceeds its width. δ is
/// sampled bilinearly at the fixed ray step, with samples at integer
/// multiples of the step measured from the rotation centre.
Sinogram forward_project(const ImageGrid2D& phantom, const SystemGeometry& geom,
                         const ProjectionConfig& cfg);

}  // namespace npct
