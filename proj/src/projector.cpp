#include "npct/projector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "npct/error.hpp"
#include "npct/parallel.hpp"

namespace npct {

void ProjectionConfig::validate(double pixel_size_nm) const {
  if (n_views == 0) throw InvalidArgument("projection needs at least one view");
  if (m == 0) throw InvalidArgument("projection needs at least one detector element");
  if (!(angular_step_deg > 0.0)) throw InvalidArgument("angular step must be positive");
  if (static_cast<double>(n_views - 1) * angular_step_deg >= 360.0) {
    throw InvalidArgument("view angles must stay below 360 degrees");
  }
  if (sampling_step_nm < 0.0 || sampling_step_nm > pixel_size_nm) {
    throw InvalidArgument("sampling step must lie in (0, pixel size]; got " +
                          std::to_string(sampling_step_nm));
  }
}

namespace {

double bilinear(const Array2D& img, double col, double row) {
  const double fc = std::floor(col);
  const double fr = std::floor(row);
  const auto n = static_cast<long>(img.rows());
  const long c0 = static_cast<long>(fc);
  const long r0 = static_cast<long>(fr);
  if (c0 < -1 || r0 < -1 || c0 >= n || r0 >= n) return 0.0;
  const double wc = col - fc;
  const double wr = row - fr;
  auto at = [&](long r, long c) {
    return (r < 0 || c < 0 || r >= n || c >= n)
               ? 0.0
               : img(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  };
  return (1 - wr) * ((1 - wc) * at(r0, c0) + wc * at(r0, c0 + 1)) +
         wr * ((1 - wc) * at(r0 + 1, c0) + wc * at(r0 + 1, c0 + 1));
}

}  // namespace

Sinogram forward_project(const ImageGrid2D& phantom, const SystemGeometry& geom,
                         const ProjectionConfig& cfg) {
  const double ps = phantom.pixel_size_nm();
  cfg.validate(ps);
  const double pitch = effective_pitch(geom);
  const double k = geom.wavenumber_per_nm();
  const double step = cfg.sampling_step_nm > 0.0 ? cfg.sampling_step_nm : ps / 2.0;

  const Array2D& img = phantom.data();
  const double n = static_cast<double>(phantom.n());
  const double centre = (n - 1.0) / 2.0;
  // Samples outside this box (in nm, one pixel of margin) see only zeros.
  const double half_box = (n / 2.0 + 1.0) * ps;
  const double det_centre = (static_cast<double>(cfg.m) - 1.0) / 2.0;

  std::vector<double> angles = uniform_angles_deg(cfg.n_views, cfg.angular_step_deg);
  Array2D out(cfg.n_views, cfg.m);

  parallel_for(cfg.n_views, cfg.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t v = begin; v < end; ++v) {
      const double theta = angles[v] * std::numbers::pi / 180.0;
      const double ct = std::cos(theta);
      const double st = std::sin(theta);
      auto row = out.row(v);
      for (std::size_t q = 0; q < cfg.m; ++q) {
        const double t = (static_cast<double>(q) - det_centre) * pitch;
        // Point on the ray: (t ct - s st, t st + s ct). Clip s to the box.
        double s_lo = -std::numeric_limits<double>::infinity();
        double s_hi = std::numeric_limits<double>::infinity();
        auto clip = [&](double base, double dir) {
          if (std::abs(dir) < 1e-15) {
            if (std::abs(base) > half_box) s_lo = 1.0, s_hi = 0.0;
            return;
          }
          double a = (-half_box - base) / dir;
          double b = (half_box - base) / dir;
          if (a > b) std::swap(a, b);
          s_lo = std::max(s_lo, a);
          s_hi = std::min(s_hi, b);
        };
        clip(t * ct, -st);
        clip(t * st, ct);
        if (!(s_lo < s_hi)) continue;
        const long k_lo = static_cast<long>(std::ceil(s_lo / step));
        const long k_hi = static_cast<long>(std::floor(s_hi / step));
        double sum = 0.0;
        for (long kk = k_lo; kk <= k_hi; ++kk) {
          const double s = static_cast<double>(kk) * step;
          const double x = t * ct - s * st;
          const double y = t * st + s * ct;
          sum += bilinear(img, x / ps + centre, y / ps + centre);
        }
        row[q] = k * sum * step;
      }
    }
  });
  return Sinogram(std::move(out), std::move(angles), pitch, SinogramKind::Clean);
}

}  // namespace npct
