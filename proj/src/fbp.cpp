#include "npct/fbp.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "npct/error.hpp"
#include "npct/parallel.hpp"

namespace npct {

std::string_view to_string(FilterKind kind) {
  return kind == FilterKind::Ramp ? "ramp" : "hilbert";
}

FilterKind filter_kind_from_string(std::string_view name) {
  if (name == "ramp") return FilterKind::Ramp;
  if (name == "hilbert") return FilterKind::Hilbert;
  throw ConfigError("unknown filter '" + std::string(name) + "' (expected ramp or hilbert)");
}

std::string_view to_string(FrequencyWindow window) {
  return window == FrequencyWindow::None ? "none" : "hann";
}

FrequencyWindow frequency_window_from_string(std::string_view name) {
  if (name == "none") return FrequencyWindow::None;
  if (name == "hann") return FrequencyWindow::Hann;
  throw ConfigError("unknown window '" + std::string(name) + "' (expected none or hann)");
}

FilterKind filter_for(SinogramKind kind) {
  return kind == SinogramKind::Split ? FilterKind::Hilbert : FilterKind::Ramp;
}

void ReconConfig::validate() const {
  if (output_n == 0) throw ConfigError("reconstruction grid must have at least one pixel");
  if (!(output_pixel_nm > 0.0)) throw ConfigError("reconstruction pixel size must be positive");
  if (!(cutoff > 0.0 && cutoff <= 1.0)) throw ConfigError("window cutoff must lie in (0, 1]");
}

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex g_fftw_mutex;

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter>;

template <typename T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  return FftwBuffer<T>(static_cast<T*>(fftw_malloc(sizeof(T) * n)));
}

class RealFft {
 public:
  explicit RealFft(std::size_t n) : n_(n) {
    auto in = fftw_buffer<double>(n);
    auto out = fftw_buffer<fftw_complex>(n / 2 + 1);
    std::lock_guard lock(g_fftw_mutex);
    forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), out.get(), in.get(), FFTW_ESTIMATE);
  }
  ~RealFft() {
    std::lock_guard lock(g_fftw_mutex);
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  void forward(double* in, fftw_complex* out) const { fftw_execute_dft_r2c(forward_, in, out); }
  void backward(fftw_complex* in, double* out) const { fftw_execute_dft_c2r(backward_, in, out); }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  fftw_plan forward_;
  fftw_plan backward_;
};

std::size_t padded_length(std::size_t m) {
  std::size_t p = 1;
  while (p < 2 * m) p <<= 1;
  return p;
}

double window_gain(FrequencyWindow window, double cutoff, double nu) {
  if (window == FrequencyWindow::None) return 1.0;
  const double nu_c = 0.5 * cutoff;
  if (nu > nu_c) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * nu / nu_c));
}

// Frequency response for bins 0..P/2 (real and imaginary parts).
std::vector<std::complex<double>> response(FilterKind kind, FrequencyWindow window,
                                           double cutoff, std::size_t p, const RealFft& fft) {
  const std::size_t bins = p / 2 + 1;
  std::vector<std::complex<double>> h(bins);
  if (kind == FilterKind::Ramp) {
    auto kernel = fftw_buffer<double>(p);
    auto spectrum = fftw_buffer<fftw_complex>(bins);
    for (std::size_t i = 0; i < p; ++i) {
      const long k = i <= p / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(p);
      double v = 0.0;
      if (k == 0) {
        v = 0.25;
      } else if (k % 2 != 0) {
        v = -1.0 / (std::numbers::pi * std::numbers::pi * static_cast<double>(k * k));
      }
      kernel[i] = v;
    }
    // The truncated kernel sums to a small positive value. Cancelling it at
    // lag p/2, which no pair of samples in a row reaches, keeps the taps exact
    // and still gives a zero response at DC.
    double sum = 0.0;
    for (std::size_t i = 0; i < p; ++i) sum += kernel[i];
    kernel[p / 2] -= sum;
    fft.forward(kernel.get(), spectrum.get());
    for (std::size_t b = 0; b < bins; ++b) h[b] = {spectrum[b][0], 0.0};
    h[0] = 0.0;
  } else {
    for (std::size_t b = 1; b + 1 < bins; ++b) h[b] = {0.0, -1.0};
  }
  for (std::size_t b = 0; b < bins; ++b) {
    h[b] *= window_gain(window, cutoff, static_cast<double>(b) / static_cast<double>(p));
  }
  return h;
}

}  // namespace

Sinogram filter_sinogram(const Sinogram& sino, FilterKind kind, FrequencyWindow window,
                         double cutoff) {
  const std::size_t m = sino.m();
  if (m < 2) throw InvalidArgument("filtering needs at least two detector elements");
  if (!(cutoff > 0.0 && cutoff <= 1.0)) throw InvalidArgument("window cutoff must lie in (0, 1]");
  const std::size_t p = padded_length(m);
  const std::size_t bins = p / 2 + 1;
  RealFft fft(p);
  const auto h = response(kind, window, cutoff, p, fft);
  const double scale =
      (kind == FilterKind::Ramp ? 1.0 / sino.element_pitch_nm() : 1.0) / static_cast<double>(p);

  Array2D out(sino.views(), m);
  auto buf = fftw_buffer<double>(p);
  auto spec = fftw_buffer<fftw_complex>(bins);
  const std::size_t right = (p - m) / 2;
  for (std::size_t v = 0; v < sino.views(); ++v) {
    const auto row = sino.data().row(v);
    for (std::size_t i = 0; i < m; ++i) buf[i] = row[i];
    for (std::size_t i = m; i < m + right; ++i) buf[i] = row[m - 1];
    for (std::size_t i = m + right; i < p; ++i) buf[i] = row[0];
    fft.forward(buf.get(), spec.get());
    for (std::size_t b = 0; b < bins; ++b) {
      const std::complex<double> z = std::complex<double>(spec[b][0], spec[b][1]) * h[b];
      spec[b][0] = z.real();
      spec[b][1] = z.imag();
    }
    fft.backward(spec.get(), buf.get());
    auto dst = out.row(v);
    for (std::size_t i = 0; i < m; ++i) dst[i] = buf[i] * scale;
  }
  return sino.with_data(std::move(out));
}

ImageGrid2D backproject(const Sinogram& filtered, const ReconConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.output_n;
  const std::size_t views = filtered.views();
  const std::size_t m = filtered.m();
  const double ps = cfg.output_pixel_nm;
  const double pitch = filtered.element_pitch_nm();
  const double centre = (static_cast<double>(n) - 1.0) / 2.0;
  const double det_centre = (static_cast<double>(m) - 1.0) / 2.0;

  std::vector<double> cs(views), sn(views);
  for (std::size_t v = 0; v < views; ++v) {
    const double theta = filtered.angles_deg()[v] * std::numbers::pi / 180.0;
    cs[v] = std::cos(theta) * ps / pitch;
    sn[v] = std::sin(theta) * ps / pitch;
  }
  const double weight = views == 0 ? 0.0 : std::numbers::pi / static_cast<double>(views);

  Array2D img(n, n);
  parallel_for(n, cfg.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const double y = static_cast<double>(r) - centre;
      auto out = img.row(r);
      for (std::size_t v = 0; v < views; ++v) {
        const auto row = filtered.data().row(v);
        const double base = y * sn[v] + det_centre;
        for (std::size_t c = 0; c < n; ++c) {
          const double u = (static_cast<double>(c) - centre) * cs[v] + base;
          if (!(u >= 0.0) || u > static_cast<double>(m - 1)) continue;
          const auto i0 = static_cast<std::size_t>(u);
          const double w = u - static_cast<double>(i0);
          const double a = row[i0];
          const double b = i0 + 1 < m ? row[i0 + 1] : 0.0;
          out[c] += a + w * (b - a);
        }
      }
      for (double& value : out) value *= weight;
    }
  });
  return ImageGrid2D(std::move(img), ps);
}

ImageGrid2D reconstruct(const Sinogram& sino, const ReconConfig& cfg, double wavenumber_per_nm) {
  cfg.validate();
  if (!(wavenumber_per_nm > 0.0)) throw ConfigError("wave number must be positive");
  const FilterKind expected = filter_for(sino.kind());
  if (cfg.filter != expected) {
    throw ConfigError(std::string(to_string(sino.kind())) + " sinograms are reconstructed with the " +
                      std::string(to_string(expected)) + " filter, not " +
                      std::string(to_string(cfg.filter)));
  }
  double scale = 1.0 / wavenumber_per_nm;
  if (expected == FilterKind::Hilbert) {
    if (!(sino.splitting_nm() > 0.0)) {
      throw ConfigError("Hilbert reconstruction needs a positive splitting distance");
    }
    // Φ ≈ -Δs dφ/dt, and ramp = Hilbert ∘ d/dt / 2π.
    scale = -1.0 / (2.0 * std::numbers::pi * wavenumber_per_nm * sino.splitting_nm());
  }
  Sinogram filtered = filter_sinogram(sino, expected, cfg.window, cfg.cutoff);
  ImageGrid2D img = backproject(filtered, cfg);
  Array2D data = img.data();
  for (double& v : data.values()) v *= scale;
  return ImageGrid2D(std::move(data), img.pixel_size_nm());
}

}  // namespace npct
