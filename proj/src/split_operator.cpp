#include "npct/split_operator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "npct/band_lu.hpp"
#include "npct/error.hpp"
#include "npct/log.hpp"
#include "npct/parallel.hpp"

namespace npct {

double delta_from_splitting(double delta_s_nm, double element_width_nm) {
  if (!(element_width_nm > 0.0)) throw InvalidArgument("element width must be positive");
  if (!(delta_s_nm >= 0.0)) throw InvalidArgument("splitting distance must be non-negative");
  return delta_s_nm / (2.0 * element_width_nm);
}

SplitOperator SplitOperator::build(std::size_t m, double delta, double gamma,
                                   SplitPattern pattern) {
  if (m == 0) throw InvalidArgument("split operator needs m >= 1");
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw UnsupportedSplitting("splitting offset must be non-negative");
  }
  if (!(delta < static_cast<double>(m) / 2.0)) {
    throw UnsupportedSplitting("splitting offset " + std::to_string(delta) +
                               " must be below m/2 = " + std::to_string(m / 2.0));
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidArgument("regularisation gamma must be positive");
  }
  if (delta == 0.0) {
    log::warn("zero splitting: B reduces to gamma*I and inversion amplifies by 1/gamma");
  }

  const double whole = std::floor(delta);
  const double f = delta - whole;
  if (pattern == SplitPattern::Auto) {
    pattern = f == 0.0 ? SplitPattern::Integer : SplitPattern::Fractional;
  }
  if (pattern == SplitPattern::Integer && f != 0.0) {
    throw UnsupportedSplitting("integer pattern requested for fractional offset " +
                               std::to_string(delta));
  }
  const auto n = static_cast<long>(whole);
  const auto size = static_cast<long>(m);

  SplitOperator op;
  op.m_ = m;
  op.delta_ = delta;
  op.gamma_ = gamma;
  op.row_start_.reserve(m + 1);

  std::map<long, double> row;
  for (long i = 0; i < size; ++i) {
    row.clear();
    auto put = [&](long col, double value) {
      if (col < 0 || col >= size || value == 0.0) return;
      row[col] += value;
    };
    if (pattern == SplitPattern::Integer) {
      put(i - n, 1.0);
      put(i + n, -1.0);
    } else {
      put(i + n, f - 1.0);
      put(i + n + 1, -f);
      put(i - n - 1, f);
      put(i - n, 1.0 - f);
    }
    row[i] += gamma;
    op.row_start_.push_back(op.entries_.size());
    for (const auto& [col, value] : row) {
      if (value == 0.0) continue;
      op.entries_.push_back({static_cast<std::size_t>(col), value});
      op.band_ = std::max(op.band_, static_cast<std::size_t>(std::abs(col - i)));
    }
  }
  op.row_start_.push_back(op.entries_.size());

  std::vector<BandLU::Entry> band_entries;
  band_entries.reserve(op.entries_.size());
  for (std::size_t i = 0; i < m; ++i) {
    for (const Entry& e : op.row(i)) band_entries.push_back({i, e.col, e.value});
  }
  op.lu_ = std::make_shared<const BandLU>(m, op.band_, op.band_, band_entries);
  return op;
}

std::span<const SplitOperator::Entry> SplitOperator::row(std::size_t i) const {
  return {entries_.data() + row_start_[i], row_start_[i + 1] - row_start_[i]};
}

double SplitOperator::at(std::size_t i, std::size_t j) const {
  for (const Entry& e : row(i)) {
    if (e.col == j) return e.value;
  }
  return 0.0;
}

Array2D SplitOperator::dense() const {
  Array2D out(m_, m_);
  for (std::size_t i = 0; i < m_; ++i) {
    for (const Entry& e : row(i)) out(i, e.col) = e.value;
  }
  return out;
}

void SplitOperator::apply(std::span<const double> phi, std::span<double> out) const {
  if (phi.size() != m_ || out.size() != m_) {
    throw ShapeMismatch("split operator of size " + std::to_string(m_) +
                        " applied to a vector of length " + std::to_string(phi.size()));
  }
  for (std::size_t i = 0; i < m_; ++i) {
    double s = 0.0;
    for (const Entry& e : row(i)) s += e.value * phi[e.col];
    out[i] = s;
  }
}

void SplitOperator::apply_transpose(std::span<const double> x, std::span<double> out) const {
  if (x.size() != m_ || out.size() != m_) {
    throw ShapeMismatch("split operator transpose applied to a vector of the wrong length");
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < m_; ++i) {
    for (const Entry& e : row(i)) out[e.col] += e.value * x[i];
  }
}

std::vector<double> SplitOperator::apply(std::span<const double> phi) const {
  std::vector<double> out(m_);
  apply(phi, out);
  return out;
}

std::vector<double> SplitOperator::apply_transpose(std::span<const double> x) const {
  std::vector<double> out(m_);
  apply_transpose(x, out);
  return out;
}

double SplitOperator::condition_estimate() const { return lu_->pivot_ratio(); }

std::vector<double> SplitOperator::invert_apply(std::span<const double> phi_split) const {
  if (phi_split.size() != m_) {
    throw ShapeMismatch("inverse of split operator of size " + std::to_string(m_) +
                        " applied to a vector of length " + std::to_string(phi_split.size()));
  }
  double scale = 0.0;
  for (double v : phi_split) scale = std::max(scale, std::abs(v));
  std::vector<double> x(phi_split.begin(), phi_split.end());
  if (scale == 0.0) return x;

  lu_->solve(x);
  std::vector<double> r(m_);
  auto residual = [&] {
    apply(x, r);
    double worst = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      r[i] = phi_split[i] - r[i];
      worst = std::max(worst, std::abs(r[i]));
    }
    return worst;
  };
  const double tol = 1e-8 * scale;
  double worst = residual();
  if (!(worst <= tol)) {
    lu_->solve(r);
    for (std::size_t i = 0; i < m_; ++i) x[i] += r[i];
    worst = residual();
  }
  if (!(worst <= tol)) {
    throw NumericalFailure("split operator inverse residual " + std::to_string(worst) +
                               " exceeds tolerance " + std::to_string(tol),
                           condition_estimate());
  }
  return x;
}

bool SplitOperator::same_matrix(const SplitOperator& other) const {
  if (m_ != other.m_ || entries_.size() != other.entries_.size()) return false;
  for (std::size_t i = 0; i <= m_; ++i) {
    if (row_start_[i] != other.row_start_[i]) return false;
  }
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (entries_[k].col != other.entries_[k].col || entries_[k].value != other.entries_[k].value) {
      return false;
    }
  }
  return true;
}

Sinogram split_sinogram(const Sinogram& clean, const SplitOperator& op, double splitting_nm,
                        std::size_t threads) {
  if (clean.m() != op.size()) {
    throw ShapeMismatch("sinogram width does not match split operator size");
  }
  Array2D out(clean.views(), clean.m());
  parallel_for(clean.views(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t v = begin; v < end; ++v) op.apply(clean.data().row(v), out.row(v));
  });
  return Sinogram(std::move(out), clean.angles_deg(), clean.element_pitch_nm(),
                  SinogramKind::Split, splitting_nm);
}

Sinogram invert_sinogram(const Sinogram& split, const SplitOperator& op, std::size_t threads) {
  if (split.m() != op.size()) {
    throw ShapeMismatch("sinogram width does not match split operator size");
  }
  Array2D out(split.views(), split.m());
  parallel_for(split.views(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t v = begin; v < end; ++v) {
      try {
        const auto x = op.invert_apply(split.data().row(v));
        std::copy(x.begin(), x.end(), out.row(v).begin());
      } catch (NumericalFailure& e) {
        e.set_view(v);
        throw;
      }
    }
  });
  return Sinogram(std::move(out), split.angles_deg(), split.element_pitch_nm(),
                  SinogramKind::Inverted, split.splitting_nm());
}

}  // namespace npct
