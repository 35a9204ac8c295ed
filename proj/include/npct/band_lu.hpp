#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace npct {

/// LU factorisation with partial (row) pivoting of an n x n band matrix with
/// `lower` sub- and `upper` super-diagonals. Row interchanges widen U to
/// lower + upper super-diagonals, as in LAPACK's gbtrf.
class BandLU {
 public:
  struct Entry {
    std::size_t row;
    std::size_t col;
    double value;
  };

  /// Factorises the matrix given by its nonzero entries. Entries outside the
  /// declared band are rejected. Throws NumericalFailure on an exactly zero
  /// pivot.
  BandLU(std::size_t n, std::size_t lower, std::size_t upper, std::span<const Entry> entries);

  std::size_t size() const noexcept { return n_; }

  /// Solves A x = b in place.
  void solve(std::span<double> b) const;

  /// max |u_ii| / min |u_ii|, a cheap lower bound on the condition number.
  double pivot_ratio() const noexcept { return pivot_ratio_; }

 private:
  std::size_t n_;
  std::size_t kl_;
  std::size_t ku_;
  std::size_t width_;           // columns stored per row of U: 1 + kl + ku
  std::vector<double> u_;       // row i holds U(i, i .. i + kl + ku)
  std::vector<double> l_;       // step k holds multipliers for rows k+1 .. k+kl
  std::vector<std::size_t> piv_;
  double pivot_ratio_ = 1.0;
};

}  // namespace npct
