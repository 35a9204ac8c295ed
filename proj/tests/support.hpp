#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "npct/grid.hpp"

namespace testing {

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                                         double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// Sum of a few low-frequency sinusoids plus an offset: smooth, nonzero.
inline std::vector<double> smooth_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> amp(0.2, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  std::uniform_int_distribution<int> freq(1, 6);
  std::vector<double> v(n, amp(rng));
  for (int k = 0; k < 4; ++k) {
    const double a = amp(rng), p = phase(rng);
    const int f = freq(rng);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] += a * std::sin(2.0 * M_PI * f * static_cast<double>(i) / static_cast<double>(n) + p);
    }
  }
  return v;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Uniform disk of value `value` centred in an n x n grid.
inline npct::ImageGrid2D disk_image(std::size_t n, double radius_px, double value,
                                    double pixel_nm = 10.0) {
  npct::Array2D a(n, n);
  const double c = (static_cast<double>(n) - 1.0) / 2.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t col = 0; col < n; ++col) {
      const double dx = static_cast<double>(col) - c, dy = static_cast<double>(r) - c;
      if (dx * dx + dy * dy <= radius_px * radius_px) a(r, col) = value;
    }
  }
  return npct::ImageGrid2D(std::move(a), pixel_nm);
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("npct_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace testing
