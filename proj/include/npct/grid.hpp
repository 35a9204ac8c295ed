#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace npct {

/// Row-major dense 2D array of doubles.
class Array2D {
 public:
  Array2D() = default;
  Array2D(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  /// Throws ShapeMismatch when values.size() != rows * cols.
  Array2D(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  bool operator==(const Array2D&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Square scalar field (δ-map or reconstruction) with a physical pixel pitch.
class ImageGrid2D {
 public:
  /// Validates squareness, pitch > 0 and finiteness.
  ImageGrid2D(Array2D data, double pixel_size_nm);
  static ImageGrid2D zeros(std::size_t n, double pixel_size_nm);

  std::size_t n() const noexcept { return data_.rows(); }
  double pixel_size_nm() const noexcept { return pixel_size_nm_; }
  const Array2D& data() const noexcept { return data_; }
  double operator()(std::size_t r, std::size_t c) const { return data_(r, c); }

  bool operator==(const ImageGrid2D&) const = default;

 private:
  Array2D data_;
  double pixel_size_nm_;
};

enum class SinogramKind { Clean, Split, Inverted, Denoised };

std::string_view to_string(SinogramKind kind);
SinogramKind sinogram_kind_from_string(std::string_view name);

/// Stack of 1D projections: one row per view angle, one column per detector
/// element. Split sinograms carry the splitting distance that produced them.
class Sinogram {
 public:
  Sinogram(Array2D data, std::vector<double> angles_deg, double element_pitch_nm,
           SinogramKind kind, double splitting_nm = 0.0);

  std::size_t views() const noexcept { return data_.rows(); }
  std::size_t m() const noexcept { return data_.cols(); }
  const Array2D& data() const noexcept { return data_; }
  const std::vector<double>& angles_deg() const noexcept { return angles_; }
  double element_pitch_nm() const noexcept { return pitch_; }
  SinogramKind kind() const noexcept { return kind_; }
  double splitting_nm() const noexcept { return splitting_nm_; }

  /// Copy with the same metadata but new values (and optionally a new kind).
  Sinogram with_data(Array2D data) const;
  Sinogram with_data(Array2D data, SinogramKind kind) const;

  bool operator==(const Sinogram&) const = default;

 private:
  Array2D data_;
  std::vector<double> angles_;
  double pitch_;
  SinogramKind kind_;
  double splitting_nm_;
};

/// Uniformly spaced view angles v * step for v in [0, n_views).
std::vector<double> uniform_angles_deg(std::size_t n_views, double angular_step_deg);

/// Photon-energy, magnification, and detector description of the scanner.
struct SystemGeometry {
  double energy_keV = 8.0;
  double magnification = 650.0;
  double detector_pitch_um = 6.5;
  std::size_t n_views = 720;
  double angular_step_deg = 0.5;

  /// Throws InvalidGeometry unless every field is physical and the views
  /// cover exactly one full rotation.
  void validate() const;

  double wavelength_nm() const;
  double wavenumber_per_nm() const;
};

inline constexpr double kHcKeVNm = 1.2398;

double wavelength_from_energy_nm(double energy_keV);
double energy_from_wavelength_keV(double wavelength_nm);

/// Detector element width referred back to the object plane.
double effective_pitch(const SystemGeometry& geom);

}  // namespace npct
