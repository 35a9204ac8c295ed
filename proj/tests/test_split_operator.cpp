#include <doctest.h>

#include <random>

#include "npct/band_lu.hpp"
#include "npct/error.hpp"
#include "npct/split_operator.hpp"
#include "reference.hpp"
#include "support.hpp"

using namespace npct;

namespace {

Eigen::MatrixXd to_eigen(const Array2D& a) {
  Eigen::MatrixXd out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
  return out;
}

}  // namespace

TEST_SUITE("split-operator") {
  TEST_CASE("delta from splitting distance") {
    CHECK(delta_from_splitting(200.0, 10.0) == 10.0);
    CHECK(delta_from_splitting(202.0, 10.0) == doctest::Approx(10.1).epsilon(1e-15));
    CHECK(delta_from_splitting(0.0, 10.0) == 0.0);
    CHECK_THROWS_AS(delta_from_splitting(200.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(delta_from_splitting(-1.0, 10.0), InvalidArgument);
  }

  TEST_CASE("m=6, delta=1: third row") {
    const auto op = SplitOperator::build(6, 1.0, 1e-12);
    // 1-based row 3 is index 2: +1 at column 2, -1 at column 4, gamma at 3.
    const auto row = op.row(2);
    REQUIRE(row.size() == 3);
    CHECK(op.at(2, 1) == 1.0);
    CHECK(op.at(2, 2) == 1e-12);
    CHECK(op.at(2, 3) == -1.0);
  }

  TEST_CASE("boundary rows keep one off-diagonal") {
    const auto op = SplitOperator::build(20, 3.0, 1e-12);
    CHECK(op.row(0).size() == 2);
    CHECK(op.at(0, 3) == -1.0);
    CHECK(op.row(19).size() == 2);
    CHECK(op.at(19, 16) == 1.0);
  }

  TEST_CASE("delta=0 collapses to gamma*I") {
    const auto op = SplitOperator::build(6, 0.0, 1e-12);
    std::mt19937_64 rng(1);
    const auto phi = testing::random_vector(rng, 6);
    const auto out = op.apply(phi);
    for (std::size_t i = 0; i < 6; ++i) CHECK(out[i] == 1e-12 * phi[i]);
  }

  TEST_CASE("m=600, delta=10.1 row pattern") {
    const auto op = SplitOperator::build(600, 10.1, 1e-12);
    // 1-based row 300, columns 289/290/310/311.
    CHECK(op.row(299).size() == 5);
    CHECK(op.at(299, 288) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(op.at(299, 289) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(op.at(299, 309) == doctest::Approx(-0.9).epsilon(1e-12));
    CHECK(op.at(299, 310) == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(op.at(299, 299) == 1e-12);
  }

  TEST_CASE("matches the brute-force constructor") {
    for (double delta : {0.0, 0.5, 1.0, 3.0, 3.25, 7.9, 10.0, 10.1, 10.2, 25.0}) {
      CAPTURE(delta);
      const int m = 64;
      const auto op = SplitOperator::build(m, delta, 1e-12);
      CHECK(to_eigen(op.dense()) == reference::split_matrix(m, delta, 1e-12));
    }
  }

  TEST_CASE("fractional path reduces to the integer pattern") {
    for (double delta : {1.0, 10.0, 25.0}) {
      const auto a = SplitOperator::build(600, delta, 1e-12, SplitPattern::Integer);
      const auto b = SplitOperator::build(600, delta, 1e-12, SplitPattern::Fractional);
      CHECK(a.same_matrix(b));
    }
    CHECK_THROWS_AS(SplitOperator::build(600, 10.5, 1e-12, SplitPattern::Integer), UnsupportedSplitting);
  }

  TEST_CASE("interior rows sum to gamma") {
    for (double delta : {1.0, 10.0, 10.1, 10.2, 25.0}) {
      const auto op = SplitOperator::build(600, delta, 1e-12);
      for (std::size_t i = 30; i < 570; ++i) {
        double s = 0.0;
        for (const auto& e : op.row(i)) s += e.value;
        CHECK(std::abs(s - 1e-12) < 1e-15);
      }
    }
  }

  TEST_CASE("constant input cancels in the interior") {
    const auto op = SplitOperator::build(100, 10.0, 1e-12);
    const auto out = op.apply(std::vector<double>(100, 3.0));
    for (std::size_t i = 10; i < 90; ++i) CHECK(out[i] == doctest::Approx(3e-12).epsilon(1e-6));
  }

  TEST_CASE("impulse response reads a column") {
    const auto op = SplitOperator::build(600, 10.0, 1e-12);
    std::vector<double> e(600, 0.0);
    e[300] = 1.0;
    const auto out = op.apply(e);
    for (std::size_t i = 0; i < 600; ++i) {
      const double expected = i == 310 ? 1.0 : i == 290 ? -1.0 : i == 300 ? 1e-12 : 0.0;
      CHECK(out[i] == expected);
    }
  }

  TEST_CASE("fractional output converges to the integer output") {
    std::mt19937_64 rng(2);
    const auto phi = testing::random_vector(rng, 600);
    const auto base = SplitOperator::build(600, 10.0, 1e-12).apply(phi);
    for (double f : {1e-3, 1e-6}) {
      const auto near = SplitOperator::build(600, 10.0 + f, 1e-12).apply(phi);
      for (std::size_t i = 0; i < 600; ++i) CHECK(std::abs(near[i] - base[i]) <= 4.0 * f);
    }
  }

  TEST_CASE("transpose matches the dense transpose") {
    std::mt19937_64 rng(4);
    const auto op = SplitOperator::build(50, 4.3, 1e-12);
    const auto x = testing::random_vector(rng, 50);
    const Eigen::VectorXd ref = to_eigen(op.dense()).transpose() * Eigen::Map<const Eigen::VectorXd>(x.data(), 50);
    const auto out = op.apply_transpose(x);
    for (int i = 0; i < 50; ++i) CHECK(out[i] == doctest::Approx(ref(i)).epsilon(1e-14));
  }

  TEST_CASE("round trip on smooth inputs") {
    std::mt19937_64 rng(9);
    for (double delta : {1.0, 10.0, 10.1, 10.2, 25.0}) {
      const auto op = SplitOperator::build(600, delta, 1e-12);
      for (int trial = 0; trial < 10; ++trial) {
        const auto phi = testing::smooth_vector(rng, 600);
        const auto back = op.invert_apply(op.apply(phi));
        double err = 0.0;
        for (std::size_t i = 0; i < 600; ++i) err = std::max(err, std::abs(back[i] - phi[i]));
        CHECK(err / testing::max_abs(phi) < 1e-6);
      }
    }
  }

  TEST_CASE("zero input inverts to zero") {
    const auto op = SplitOperator::build(600, 10.0, 1e-12);
    for (double v : op.invert_apply(std::vector<double>(600, 0.0))) CHECK(v == 0.0);
  }

  TEST_CASE("inversion amplifies noise") {
    std::mt19937_64 rng(13);
    const auto op = SplitOperator::build(600, 10.0, 1e-12);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> n(600);
    for (auto& v : n) v = g(rng);
    const auto x = op.invert_apply(n);
    double nx = 0.0, nn = 0.0;
    for (std::size_t i = 0; i < 600; ++i) {
      nx += x[i] * x[i];
      nn += n[i] * n[i];
    }
    CHECK(std::sqrt(nx) > std::sqrt(nn));
  }

  TEST_CASE("banded LU agrees with a dense solve") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 40, kl = 1 + trial % 4, ku = 1 + (trial / 4) % 3;
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
      std::vector<BandLU::Entry> entries;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = (i >= kl ? i - kl : 0); j <= std::min(n - 1, i + ku); ++j) {
          const double v = u(rng);
          a(i, j) = v;
          entries.push_back({i, j, v});
        }
      }
      const BandLU lu(n, kl, ku, entries);
      auto b = testing::random_vector(rng, n);
      const Eigen::VectorXd ref = a.partialPivLu().solve(Eigen::Map<Eigen::VectorXd>(b.data(), n));
      lu.solve(b);
      for (std::size_t i = 0; i < n; ++i) CHECK(b[i] == doctest::Approx(ref(i)).epsilon(1e-8));
    }
  }

  TEST_CASE("exactly singular band matrix is reported") {
    std::vector<BandLU::Entry> entries{{0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 2.0}, {1, 1, 4.0}};
    CHECK_THROWS_AS(BandLU(2, 1, 1, entries), NumericalFailure);
  }

  TEST_CASE("condition estimate is a lower bound of the true condition number") {
    for (double delta : {1.0, 10.0, 10.1}) {
      const auto op = SplitOperator::build(200, delta, 1e-12);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(op.dense()));
      const auto s = svd.singularValues();
      CHECK(op.condition_estimate() <= s(0) / s(s.size() - 1) * (1 + 1e-9));
    }
  }

  TEST_CASE("invalid construction") {
    CHECK_THROWS_AS(SplitOperator::build(600, 300.0, 1e-12), UnsupportedSplitting);
    CHECK_THROWS_AS(SplitOperator::build(600, -1.0, 1e-12), UnsupportedSplitting);
    CHECK_THROWS_AS(SplitOperator::build(600, 10.0, 0.0), InvalidArgument);
    const auto op = SplitOperator::build(10, 1.0, 1e-12);
    CHECK_THROWS_AS(op.apply(std::vector<double>(9)), ShapeMismatch);
    CHECK_THROWS_AS(op.invert_apply(std::vector<double>(11)), ShapeMismatch);
  }

  TEST_CASE("sinogram split and invert keep metadata") {
    std::mt19937_64 rng(8);
    Array2D a(6, 100);
    for (std::size_t v = 0; v < 6; ++v) {
      const auto row = testing::smooth_vector(rng, 100);
      std::copy(row.begin(), row.end(), a.row(v).begin());
    }
    const Sinogram clean(a, uniform_angles_deg(6, 60.0), 10.0, SinogramKind::Clean);
    const auto op = SplitOperator::build(100, 5.0, 1e-12);
    const auto split = split_sinogram(clean, op, 100.0, 2);
    CHECK(split.kind() == SinogramKind::Split);
    CHECK(split.splitting_nm() == 100.0);
    const auto inv = invert_sinogram(split, op, 2);
    CHECK(inv.kind() == SinogramKind::Inverted);
    CHECK(inv.angles_deg() == clean.angles_deg());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(inv.data().values()[i] == doctest::Approx(a.values()[i]).epsilon(1e-8));
    }
  }
}
