#include "npct/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "npct/error.hpp"

namespace npct {

bool PixelRect::overlaps(const PixelRect& o) const noexcept {
  return x0 < o.x0 + o.width && o.x0 < x0 + width && y0 < o.y0 + o.height &&
         o.y0 < y0 + height;
}

void RoiSpec::validate(std::size_t n) const {
  auto check = [n](const PixelRect& r, const char* name) {
    if (r.area() < 16) throw InvalidArgument(std::string(name) + " ROI needs at least 16 pixels");
    if (r.x0 + r.width > n || r.y0 + r.height > n) {
      throw InvalidArgument(std::string(name) + " ROI extends beyond the " + std::to_string(n) +
                            "-pixel image");
    }
  };
  check(signal, "signal");
  check(background, "background");
  if (signal.overlaps(background)) throw InvalidArgument("signal and background ROIs overlap");
}

namespace {

void require_same_shape(const ImageGrid2D& a, const ImageGrid2D& b) {
  if (a.n() != b.n()) {
    throw ShapeMismatch("images differ in size: " + std::to_string(a.n()) + " vs " +
                        std::to_string(b.n()));
  }
}

}  // namespace

double snr(const ImageGrid2D& img, const RoiSpec& roi) {
  roi.validate(img.n());
  double signal = 0.0;
  for (std::size_t r = roi.signal.y0; r < roi.signal.y0 + roi.signal.height; ++r) {
    for (std::size_t c = roi.signal.x0; c < roi.signal.x0 + roi.signal.width; ++c) signal += img(r, c);
  }
  signal /= static_cast<double>(roi.signal.area());

  double mean = 0.0;
  for (std::size_t r = roi.background.y0; r < roi.background.y0 + roi.background.height; ++r) {
    for (std::size_t c = roi.background.x0; c < roi.background.x0 + roi.background.width; ++c) {
      mean += img(r, c);
    }
  }
  mean /= static_cast<double>(roi.background.area());
  double var = 0.0;
  for (std::size_t r = roi.background.y0; r < roi.background.y0 + roi.background.height; ++r) {
    for (std::size_t c = roi.background.x0; c < roi.background.x0 + roi.background.width; ++c) {
      const double d = img(r, c) - mean;
      var += d * d;
    }
  }
  var /= static_cast<double>(roi.background.area());
  if (var == 0.0) throw NumericalFailure("SNR undefined: background standard deviation is zero");
  return signal / std::sqrt(var);
}

double rmse(const ImageGrid2D& img, const ImageGrid2D& truth) {
  require_same_shape(img, truth);
  const auto a = img.data().values();
  const auto b = truth.data().values();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return a.empty() ? 0.0 : std::sqrt(s / static_cast<double>(a.size()));
}

ImageGrid2D residual_map(const ImageGrid2D& img, const ImageGrid2D& truth) {
  require_same_shape(img, truth);
  Array2D out(img.n(), img.n());
  const auto a = img.data().values();
  const auto b = truth.data().values();
  auto dst = out.values();
  for (std::size_t i = 0; i < a.size(); ++i) dst[i] = std::abs(a[i] - b[i]);
  return ImageGrid2D(std::move(out), img.pixel_size_nm());
}

std::vector<bool> edge_mask(const ImageGrid2D& truth, std::size_t radius) {
  const std::size_t n = truth.n();
  std::vector<bool> edges(n * n, false);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double v = truth(r, c);
      if ((c + 1 < n && truth(r, c + 1) != v) || (r + 1 < n && truth(r + 1, c) != v) ||
          (c > 0 && truth(r, c - 1) != v) || (r > 0 && truth(r - 1, c) != v)) {
        edges[r * n + c] = true;
      }
    }
  }
  if (radius == 0) return edges;
  std::vector<bool> grown(n * n, false);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (!edges[r * n + c]) continue;
      const std::size_t r0 = r >= radius ? r - radius : 0;
      const std::size_t c0 = c >= radius ? c - radius : 0;
      const std::size_t r1 = std::min(n - 1, r + radius);
      const std::size_t c1 = std::min(n - 1, c + radius);
      for (std::size_t rr = r0; rr <= r1; ++rr) {
        for (std::size_t cc = c0; cc <= c1; ++cc) grown[rr * n + cc] = true;
      }
    }
  }
  return grown;
}

double edge_gradient_energy(const ImageGrid2D& img, const std::vector<bool>& mask) {
  const std::size_t n = img.n();
  if (!mask.empty() && mask.size() != n * n) throw ShapeMismatch("mask size does not match image");
  double s = 0.0;
  for (std::size_t r = 0; r + 1 < n; ++r) {
    for (std::size_t c = 0; c + 1 < n; ++c) {
      if (!mask.empty() && !mask[r * n + c]) continue;
      const double gx = img(r, c + 1) - img(r, c);
      const double gy = img(r + 1, c) - img(r, c);
      s += gx * gx + gy * gy;
    }
  }
  return s;
}

double masked_energy_fraction(const ImageGrid2D& residual, const std::vector<bool>& mask) {
  const auto v = residual.data().values();
  if (mask.size() != v.size()) throw ShapeMismatch("mask size does not match image");
  double inside = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double e = v[i] * v[i];
    total += e;
    if (mask[i]) inside += e;
  }
  return total == 0.0 ? 0.0 : inside / total;
}

}  // namespace npct
