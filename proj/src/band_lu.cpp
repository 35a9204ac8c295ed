#include "npct/band_lu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "npct/error.hpp"

namespace npct {

BandLU::BandLU(std::size_t n, std::size_t lower, std::size_t upper,
               std::span<const Entry> entries)
    : n_(n), kl_(lower), ku_(upper), width_(1 + lower + upper) {
  // Working rows: row i stores columns [i - kl, i + kl + ku], offset by kl.
  const std::size_t w = 1 + 2 * kl_ + ku_;
  std::vector<double> a(n_ * w, 0.0);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * w + (c + kl_ - r)]; };
  for (const Entry& e : entries) {
    if (e.row >= n_ || e.col >= n_ || e.row > e.col + kl_ || e.col > e.row + ku_) {
      throw InvalidArgument("band entry (" + std::to_string(e.row) + ", " +
                            std::to_string(e.col) + ") lies outside the declared band");
    }
    at(e.row, e.col) += e.value;
  }

  l_.assign(n_ * std::max<std::size_t>(kl_, 1), 0.0);
  piv_.resize(n_);
  double umax = 0.0;
  double umin = std::numeric_limits<double>::infinity();

  for (std::size_t k = 0; k < n_; ++k) {
    const std::size_t last_row = std::min(n_ - 1, k + kl_);
    std::size_t p = k;
    double best = std::abs(at(k, k));
    for (std::size_t r = k + 1; r <= last_row; ++r) {
      const double v = std::abs(at(r, k));
      if (v > best) best = v, p = r;
    }
    piv_[k] = p;
    if (best == 0.0 || !std::isfinite(best)) {
      throw NumericalFailure("band LU: zero pivot in column " + std::to_string(k),
                             std::numeric_limits<double>::infinity());
    }
    const std::size_t last_col = std::min(n_ - 1, k + kl_ + ku_);
    if (p != k) {
      for (std::size_t c = k; c <= last_col; ++c) std::swap(at(k, c), at(p, c));
    }
    const double pivot = at(k, k);
    umax = std::max(umax, std::abs(pivot));
    umin = std::min(umin, std::abs(pivot));
    for (std::size_t r = k + 1; r <= last_row; ++r) {
      const double factor = at(r, k) / pivot;
      l_[k * std::max<std::size_t>(kl_, 1) + (r - k - 1)] = factor;
      at(r, k) = 0.0;
      if (factor == 0.0) continue;
      for (std::size_t c = k + 1; c <= last_col; ++c) at(r, c) -= factor * at(k, c);
    }
  }

  u_.assign(n_ * width_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t last_col = std::min(n_ - 1, i + kl_ + ku_);
    for (std::size_t c = i; c <= last_col; ++c) u_[i * width_ + (c - i)] = at(i, c);
  }
  pivot_ratio_ = umin > 0.0 ? umax / umin : std::numeric_limits<double>::infinity();
}

void BandLU::solve(std::span<double> b) const {
  if (b.size() != n_) throw ShapeMismatch("band LU: right-hand side has the wrong length");
  const std::size_t lstride = std::max<std::size_t>(kl_, 1);
  for (std::size_t k = 0; k < n_; ++k) {
    if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
    const double bk = b[k];
    if (bk == 0.0) continue;
    const std::size_t last_row = std::min(n_ - 1, k + kl_);
    for (std::size_t r = k + 1; r <= last_row; ++r) b[r] -= l_[k * lstride + (r - k - 1)] * bk;
  }
  for (std::size_t i = n_; i-- > 0;) {
    const double* u = &u_[i * width_];
    const std::size_t last_col = std::min(n_ - 1, i + kl_ + ku_);
    double s = b[i];
    for (std::size_t c = i + 1; c <= last_col; ++c) s -= u[c - i] * b[c];
    b[i] = s / u[0];
  }
}

}  // namespace npct
