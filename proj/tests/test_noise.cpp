#include <cmath>
#include <doctest.h>

#include <limits>

#include "npct/error.hpp"
#include "npct/noise.hpp"

using namespace npct;

namespace {

Sinogram flat_sinogram(std::size_t views, std::size_t m, double value) {
  return Sinogram(Array2D(views, m, value), uniform_angles_deg(views, 360.0 / views), 10.0,
                  SinogramKind::Split, 200.0);
}

}  // namespace

TEST_SUITE("noise") {
  TEST_CASE("phase variance examples") {
    CHECK(phase_variance(0.7, 10000.0) == doctest::Approx(2.0 / (0.49 * 1e4)).epsilon(1e-15));
    CHECK(phase_variance(0.7, 10000.0) == doctest::Approx(4.0816326530612e-4));
    CHECK(phase_variance(1.0, 2.0) == 1.0);
    CHECK(phase_variance(0.7, 20000.0) == doctest::Approx(phase_variance(0.7, 10000.0) / 2).epsilon(1e-15));
    CHECK_THROWS_AS(phase_variance(0.7, 0.0), InvalidArgument);
    CHECK_THROWS_AS(phase_variance(0.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(phase_variance(1.5, 1.0), InvalidArgument);
  }

  TEST_CASE("variance halves when photons double") {
    for (double n : {1.0, 37.0, 1e3, 1e4, 5e6}) {
      CHECK(phase_variance(0.7, 2 * n) == doctest::Approx(phase_variance(0.7, n) / 2).epsilon(1e-15));
    }
  }

  TEST_CASE("phase steps multiply the per-step count") {
    const NoiseModel m(0.7, 4, {2500.0});
    CHECK(m.photons_total(0) == 10000.0);
    CHECK(m.variance(3) == phase_variance(0.7, 10000.0));
    const auto u = NoiseModel::uniform(0.7, 10000.0, 4);
    CHECK(u.variance(0) == m.variance(0));
  }

  TEST_CASE("weight matrix") {
    const auto lam = build_weight_matrix(NoiseModel::uniform(0.7, 1e4), 5);
    for (double d : lam.diag) CHECK(d == phase_variance(0.7, 1e4));
    const auto two = build_weight_matrix(NoiseModel(0.7, 1, {1000.0, 4000.0}), 2);
    CHECK(two.diag[0] / two.diag[1] == doctest::Approx(4.0).epsilon(1e-15));
    const auto inv = two.inverse();
    for (std::size_t i = 0; i < 2; ++i) CHECK(inv.diag[i] * two.diag[i] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(build_weight_matrix(NoiseModel(0.7, 1, {1.0, 2.0, 3.0}), 2), ShapeMismatch);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(build_weight_matrix(NoiseModel::uniform(0.7, inf), 3), InvalidArgument);
  }

  TEST_CASE("injection is seeded") {
    const auto s = flat_sinogram(10, 20, 1.0);
    const auto model = NoiseModel::uniform(0.7, 1e4);
    CHECK(inject_noise(s, model, 5) == inject_noise(s, model, 5));
    CHECK_FALSE(inject_noise(s, model, 5) == inject_noise(s, model, 6));
  }

  TEST_CASE("sample variance matches the formula") {
    const auto s = flat_sinogram(200, 600, 0.0);
    const auto model = NoiseModel::uniform(0.7, 1e4);
    const auto noisy = inject_noise(s, model, 42);
    double sum = 0.0, sum2 = 0.0;
    for (double v : noisy.data().values()) {
      sum += v;
      sum2 += v * v;
    }
    const double n = static_cast<double>(noisy.data().size());
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(var - phase_variance(0.7, 1e4)) / phase_variance(0.7, 1e4) < 0.02);
    CHECK(std::abs(mean) < 5.0 * std::sqrt(phase_variance(0.7, 1e4) / n));
  }

  TEST_CASE("infinite photons leave the input untouched") {
    const auto s = flat_sinogram(4, 8, 0.25);
    const auto out = inject_noise(s, NoiseModel::uniform(0.7, std::numeric_limits<double>::infinity()), 1);
    CHECK(out == s);
  }

  TEST_CASE("metadata is preserved") {
    const auto s = flat_sinogram(6, 8, 1.0);
    const auto out = inject_noise(s, NoiseModel::uniform(0.7, 1e4), 3);
    CHECK(out.angles_deg() == s.angles_deg());
    CHECK(out.kind() == s.kind());
    CHECK(out.splitting_nm() == s.splitting_nm());
    CHECK(out.element_pitch_nm() == s.element_pitch_nm());
  }
}
