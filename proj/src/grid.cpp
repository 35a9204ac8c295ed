#include "npct/grid.hpp"

#include <cmath>
#include <numbers>

#include "npct/error.hpp"

namespace npct {

Array2D::Array2D(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
  if (data_.size() != rows * cols) {
    throw ShapeMismatch("array of " + std::to_string(data_.size()) + " values cannot be shaped " +
                        std::to_string(rows) + "x" + std::to_string(cols));
  }
}

ImageGrid2D::ImageGrid2D(Array2D data, double pixel_size_nm)
    : data_(std::move(data)), pixel_size_nm_(pixel_size_nm) {
  if (data_.rows() != data_.cols()) {
    throw ShapeMismatch("image grid must be square, got " + std::to_string(data_.rows()) + "x" +
                        std::to_string(data_.cols()));
  }
  if (!(pixel_size_nm_ > 0.0) || !std::isfinite(pixel_size_nm_)) {
    throw InvalidArgument("pixel size must be positive");
  }
  for (double v : data_.values()) {
    if (!std::isfinite(v)) throw InvalidArgument("image grid contains a non-finite value");
  }
}

ImageGrid2D ImageGrid2D::zeros(std::size_t n, double pixel_size_nm) {
  return ImageGrid2D(Array2D(n, n), pixel_size_nm);
}

std::string_view to_string(SinogramKind kind) {
  switch (kind) {
    case SinogramKind::Clean: return "Clean";
    case SinogramKind::Split: return "Split";
    case SinogramKind::Inverted: return "Inverted";
    case SinogramKind::Denoised: return "Denoised";
  }
  return "Unknown";
}

SinogramKind sinogram_kind_from_string(std::string_view name) {
  if (name == "Clean") return SinogramKind::Clean;
  if (name == "Split") return SinogramKind::Split;
  if (name == "Inverted") return SinogramKind::Inverted;
  if (name == "Denoised") return SinogramKind::Denoised;
  throw InvalidArgument("unknown sinogram kind '" + std::string(name) + "'");
}

Sinogram::Sinogram(Array2D data, std::vector<double> angles_deg, double element_pitch_nm,
                   SinogramKind kind, double splitting_nm)
    : data_(std::move(data)),
      angles_(std::move(angles_deg)),
      pitch_(element_pitch_nm),
      kind_(kind),
      splitting_nm_(splitting_nm) {
  if (data_.rows() != angles_.size()) {
    throw ShapeMismatch("sinogram has " + std::to_string(data_.rows()) + " rows but " +
                        std::to_string(angles_.size()) + " angles");
  }
  for (std::size_t v = 0; v < angles_.size(); ++v) {
    if (!(angles_[v] >= 0.0 && angles_[v] < 360.0)) {
      throw InvalidArgument("view angles must lie in [0, 360) degrees");
    }
    if (v > 0 && !(angles_[v] > angles_[v - 1])) {
      throw InvalidArgument("view angles must be strictly increasing");
    }
  }
  if (!(pitch_ > 0.0) || !std::isfinite(pitch_)) {
    throw InvalidArgument("element pitch must be positive");
  }
  if (!(splitting_nm_ >= 0.0)) throw InvalidArgument("splitting distance must be non-negative");
}

Sinogram Sinogram::with_data(Array2D data) const { return with_data(std::move(data), kind_); }

Sinogram Sinogram::with_data(Array2D data, SinogramKind kind) const {
  if (data.rows() != data_.rows() || data.cols() != data_.cols()) {
    throw ShapeMismatch("replacement sinogram data has a different shape");
  }
  return Sinogram(std::move(data), angles_, pitch_, kind, splitting_nm_);
}

std::vector<double> uniform_angles_deg(std::size_t n_views, double angular_step_deg) {
  std::vector<double> angles(n_views);
  for (std::size_t v = 0; v < n_views; ++v) angles[v] = static_cast<double>(v) * angular_step_deg;
  return angles;
}

double wavelength_from_energy_nm(double energy_keV) {
  if (!(energy_keV > 0.0)) throw InvalidGeometry("photon energy must be positive");
  return kHcKeVNm / energy_keV;
}

double energy_from_wavelength_keV(double wavelength_nm) {
  if (!(wavelength_nm > 0.0)) throw InvalidGeometry("wavelength must be positive");
  return kHcKeVNm / wavelength_nm;
}

void SystemGeometry::validate() const {
  if (!(energy_keV > 0.0) || !std::isfinite(energy_keV)) {
    throw InvalidGeometry("photon energy must be positive");
  }
  if (!(magnification > 0.0) || !std::isfinite(magnification)) {
    throw InvalidGeometry("magnification must be positive");
  }
  if (!(detector_pitch_um > 0.0) || !std::isfinite(detector_pitch_um)) {
    throw InvalidGeometry("detector pitch must be positive");
  }
  if (n_views == 0) throw InvalidGeometry("at least one view is required");
  if (!(angular_step_deg > 0.0)) throw InvalidGeometry("angular step must be positive");
  const double span = static_cast<double>(n_views) * angular_step_deg;
  if (std::abs(span - 360.0) > 1e-9 * 360.0) {
    throw InvalidGeometry("n_views x angular_step must equal 360 degrees, got " +
                          std::to_string(span));
  }
}

double SystemGeometry::wavelength_nm() const { return wavelength_from_energy_nm(energy_keV); }

double SystemGeometry::wavenumber_per_nm() const {
  return 2.0 * std::numbers::pi / wavelength_nm();
}

double effective_pitch(const SystemGeometry& geom) {
  if (!(geom.magnification > 0.0)) throw InvalidGeometry("magnification must be positive");
  if (!(geom.detector_pitch_um > 0.0)) throw InvalidGeometry("detector pitch must be positive");
  return geom.detector_pitch_um * 1000.0 / geom.magnification;
}

}  // namespace npct
