#include <doctest.h>

#include <random>

#include "npct/error.hpp"
#include "npct/metrics.hpp"
#include "support.hpp"

using namespace npct;

namespace {

const RoiSpec kRoi{{2, 2, 8, 8}, {20, 20, 8, 8}};

ImageGrid2D signal_with_jitter(double c, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sigma);
  Array2D a(32, 32);
  for (std::size_t r = 0; r < 32; ++r)
    for (std::size_t col = 0; col < 32; ++col) a(r, col) = g(rng);
  for (std::size_t r = 2; r < 10; ++r)
    for (std::size_t col = 2; col < 10; ++col) a(r, col) = c;
  return ImageGrid2D(a, 10.0);
}

double background_std(const ImageGrid2D& img) {
  double m = 0.0;
  for (std::size_t r = 20; r < 28; ++r)
    for (std::size_t c = 20; c < 28; ++c) m += img(r, c) / 64.0;
  double v = 0.0;
  for (std::size_t r = 20; r < 28; ++r)
    for (std::size_t c = 20; c < 28; ++c) v += (img(r, c) - m) * (img(r, c) - m) / 64.0;
  return std::sqrt(v);
}

ImageGrid2D scaled(const ImageGrid2D& img, double f) {
  Array2D a = img.data();
  for (auto& v : a.values()) v *= f;
  return ImageGrid2D(a, img.pixel_size_nm());
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("snr of a constant signal over jitter") {
    const auto img = signal_with_jitter(5.0, 0.01, 1);
    CHECK(snr(img, kRoi) == doctest::Approx(5.0 / background_std(img)).epsilon(1e-12));
    CHECK(to_decibels(100.0) == doctest::Approx(40.0));
  }

  TEST_CASE("snr under scaling") {
    const auto img = signal_with_jitter(5.0, 0.01, 2);
    const double base = snr(img, kRoi);
    CHECK(snr(scaled(img, 2.0), kRoi) == doctest::Approx(base).epsilon(1e-12));
    Array2D a = img.data();
    for (std::size_t r = 2; r < 10; ++r)
      for (std::size_t c = 2; c < 10; ++c) a(r, c) *= 2.0;
    CHECK(snr(ImageGrid2D(a, 10.0), kRoi) == doctest::Approx(2.0 * base).epsilon(1e-12));
  }

  TEST_CASE("snr is invariant under positive scaling (random images)") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> f(0.01, 100.0);
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto img = signal_with_jitter(1.0 + static_cast<double>(s), 0.1, 10 + s);
      CHECK(snr(scaled(img, f(rng)), kRoi) == doctest::Approx(snr(img, kRoi)).epsilon(1e-10));
    }
  }

  TEST_CASE("flat background makes snr undefined") {
    const auto img = signal_with_jitter(5.0, 0.0, 1);
    CHECK_THROWS_AS(snr(img, kRoi), NumericalFailure);
  }

  TEST_CASE("roi validation") {
    CHECK_THROWS_AS(RoiSpec({{0, 0, 3, 5}, {20, 20, 8, 8}}).validate(32), InvalidArgument);
    CHECK_THROWS_AS(RoiSpec({{0, 0, 8, 8}, {4, 4, 8, 8}}).validate(32), InvalidArgument);
    CHECK_THROWS_AS(RoiSpec({{0, 0, 8, 8}, {28, 28, 8, 8}}).validate(32), InvalidArgument);
    CHECK_NOTHROW(kRoi.validate(32));
  }

  TEST_CASE("rmse examples") {
    const auto a = signal_with_jitter(1.0, 0.3, 4);
    CHECK(rmse(a, a) == 0.0);
    Array2D b = a.data();
    for (auto& v : b.values()) v += 0.125;
    CHECK(rmse(ImageGrid2D(b, 10.0), a) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK_THROWS_AS(rmse(a, ImageGrid2D::zeros(4, 10.0)), ShapeMismatch);
  }

  TEST_CASE("rmse of a random 4x4 pair matches a scalar loop") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
      Array2D x(4, 4), y(4, 4);
      for (auto& v : x.values()) v = std::uniform_real_distribution<double>(-1, 1)(rng);
      for (auto& v : y.values()) v = std::uniform_real_distribution<double>(-1, 1)(rng);
      double s = 0.0;
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) s += (x(r, c) - y(r, c)) * (x(r, c) - y(r, c));
      CHECK(rmse(ImageGrid2D(x, 1.0), ImageGrid2D(y, 1.0)) == doctest::Approx(std::sqrt(s / 16.0)).epsilon(1e-14));
    }
  }

  TEST_CASE("residual map") {
    const auto a = signal_with_jitter(1.0, 0.3, 6);
    const auto same = residual_map(a, a);
    for (double v : same.data().values()) CHECK(v == 0.0);
    Array2D b = a.data();
    b(7, 9) += 1e-5;
    const auto r = residual_map(ImageGrid2D(b, 10.0), a);
    std::size_t nonzero = 0;
    for (double v : r.data().values()) nonzero += v != 0.0;
    CHECK(nonzero == 1);
    CHECK(r(7, 9) > 0.0);
    const auto c = signal_with_jitter(2.0, 0.1, 7);
    CHECK(residual_map(a, c) == residual_map(c, a));
  }

  TEST_CASE("edge mask and gradient energy") {
    const auto disk = testing::disk_image(32, 8.0, 1.0);
    const auto edges = edge_mask(disk, 0);
    CHECK_FALSE(edges[16 * 32 + 16]);
    CHECK(edges[16 * 32 + 24]);
    const auto grown = edge_mask(disk, 2);
    std::size_t a = 0, b = 0;
    for (bool e : edges) a += e;
    for (bool e : grown) b += e;
    CHECK(b > a);
    CHECK(edge_gradient_energy(ImageGrid2D::zeros(8, 1.0)) == 0.0);
    CHECK(edge_gradient_energy(disk) > 0.0);
    CHECK(masked_energy_fraction(disk, std::vector<bool>(32 * 32, true)) == 1.0);
  }
}
