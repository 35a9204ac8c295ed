#pragma once

#include <cstddef>
#include <string_view>

#include "npct/grid.hpp"

namespace npct {

/// Ramp for integral (unsplit) phase data, Hilbert for split/differential
/// data.
enum class FilterKind { Ramp, Hilbert };
enum class FrequencyWindow { None, Hann };

std::string_view to_string(FilterKind kind);
FilterKind filter_kind_from_string(std::string_view name);
std::string_view to_string(FrequencyWindow window);
FrequencyWindow frequency_window_from_string(std::string_view name);

/// The filter a sinogram of this kind must be reconstructed with.
FilterKind filter_for(SinogramKind kind);

struct ReconConfig {
  std::size_t output_n = 512;
  double output_pixel_nm = 10.0;
  FilterKind filter = FilterKind::Ramp;
  FrequencyWindow window = FrequencyWindow::None;
  /// Window cut-off as a fraction of the Nyquist frequency, in (0, 1].
  double cutoff = 1.0;
  std::size_t threads = 0;

  void validate() const;
};

/// Filters every view in the frequency domain after padding to the next
/// power of two >= 2m (rows are extended with their edge values).
///
/// Ramp: the band-limited Ram-Lak kernel (1/4 at 0, -1/(π²k²) at odd k, per
/// unit sample), divided by the element pitch so the output is per nm; its
/// DC response is exactly zero. Hilbert: the all-pass -i·sign(ν), zero at DC
/// and Nyquist.
Sinogram filter_sinogram(const Sinogram& sino, FilterKind kind,
                         FrequencyWindow window = FrequencyWindow::None, double cutoff = 1.0);

/// Pixel value = (π / n_views) Σ_views of the filtered row, linearly
/// interpolated at the pixel's detector coordinate x cosθ + y sinθ.
ImageGrid2D backproject(const Sinogram& filtered, const ReconConfig& cfg);

/// Filtered backprojection to a δ-map. Clean, Inverted and Denoised data use
/// the ramp filter and are divided by the wave number k. Split data use the
/// Hilbert filter and are treated as a finite difference over the splitting
/// distance Δs, so they are additionally divided by Δs (and by 2π, the
/// Hilbert-to-ramp factor). Throws ConfigError if cfg.filter does not match
/// the sinogram kind or a split sinogram carries no splitting distance.
ImageGrid2D reconstruct(const Sinogram& sino, const ReconConfig& cfg, double wavenumber_per_nm);

}  // namespace npct
