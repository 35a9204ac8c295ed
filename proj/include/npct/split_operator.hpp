#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "npct/grid.hpp"

namespace npct {

class BandLU;

/// Half-separation of the ±1 diffraction orders in detector elements:
/// Δ = Δs / (2 w).
double delta_from_splitting(double delta_s_nm, double element_width_nm);

/// Which row pattern build() uses. Auto picks Integer when Δ has no
/// fractional part and Fractional otherwise; forcing Fractional on an integer
/// Δ yields the identical matrix.
enum class SplitPattern { Auto, Integer, Fractional };

/// The banded m x m splitting operator B = b + γI mapping an unsplit phase
/// projection φ to the split signal Φ = B φ.
///
/// Integer Δ: row i carries +1 at column i-Δ and -1 at column i+Δ.
/// Fractional Δ = n + f: row i carries 1-f at i-n, f at i-n-1, f-1 at i+n,
/// and -f at i+n+1. In both cases columns outside [0, m) are dropped, and γ
/// is added on the diagonal. Indices here are 0-based.
///
/// Immutable after build; the LU factorisation is computed once and shared.
class SplitOperator {
 public:
  struct Entry {
    std::size_t col;
    double value;
  };

  /// Throws UnsupportedSplitting unless 0 <= Δ < m/2, InvalidArgument unless
  /// γ > 0. Δ = 0 is accepted with a logged warning: B collapses to γI.
  static SplitOperator build(std::size_t m, double delta, double gamma,
                             SplitPattern pattern = SplitPattern::Auto);

  std::size_t size() const noexcept { return m_; }
  double delta() const noexcept { return delta_; }
  double gamma() const noexcept { return gamma_; }
  /// Number of detector elements spanned by the widest row offset.
  std::size_t bandwidth() const noexcept { return band_; }

  /// Nonzero entries of row i, sorted by column.
  std::span<const Entry> row(std::size_t i) const;
  double at(std::size_t i, std::size_t j) const;
  Array2D dense() const;

  std::vector<double> apply(std::span<const double> phi) const;
  std::vector<double> apply_transpose(std::span<const double> x) const;
  void apply(std::span<const double> phi, std::span<double> out) const;
  void apply_transpose(std::span<const double> x, std::span<double> out) const;

  /// Solves B x = Φ by banded LU with partial pivoting. Throws
  /// NumericalFailure (carrying a condition estimate) if the residual
  /// ‖Bx - Φ‖∞ exceeds 1e-8 ‖Φ‖∞ after one step of iterative refinement.
  std::vector<double> invert_apply(std::span<const double> phi_split) const;

  /// Pivot-ratio lower bound on cond(B).
  double condition_estimate() const;

  bool same_matrix(const SplitOperator& other) const;

 private:
  SplitOperator() = default;

  std::size_t m_ = 0;
  double delta_ = 0.0;
  double gamma_ = 0.0;
  std::size_t band_ = 0;
  std::vector<std::size_t> row_start_;
  std::vector<Entry> entries_;
  std::shared_ptr<const BandLU> lu_;
};

/// Applies B to every view of a clean sinogram; the result is tagged Split
/// with the given splitting distance.
Sinogram split_sinogram(const Sinogram& clean, const SplitOperator& op, double splitting_nm,
                        std::size_t threads = 0);

/// Row-wise B⁻¹ of a split sinogram; the result is tagged Inverted.
Sinogram invert_sinogram(const Sinogram& split, const SplitOperator& op, std::size_t threads = 0);

}  // namespace npct
