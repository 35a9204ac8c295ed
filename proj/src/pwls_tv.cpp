#include "npct/pwls_tv.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "npct/error.hpp"
#include "npct/parallel.hpp"

namespace npct {

void PwlsConfig::validate() const {
  if (alpha && !(*alpha >= 0.0)) throw InvalidArgument("alpha must be non-negative");
  if (!(tau >= 0.0)) throw InvalidArgument("tau must be non-negative");
  if (upsilon && !(*upsilon > 0.0)) throw InvalidArgument("upsilon must be positive");
  if (!(rel_tol >= 0.0)) throw InvalidArgument("rel_tol must be non-negative");
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double weighted_norm2(std::span<const double> r, const DiagonalMatrix& lambda) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r[i] * r[i] / lambda.diag[i];
  return s;
}

void check_sizes(std::span<const double> phi, std::span<const double> Phi,
                 const SplitOperator& op, const DiagonalMatrix& lambda) {
  const std::size_t m = op.size();
  if (phi.size() != m || Phi.size() != m || lambda.size() != m) {
    throw ShapeMismatch("PWLS inputs must all have length " + std::to_string(m));
  }
}

}  // namespace

double tv_value(std::span<const double> phi, double upsilon) {
  double s = 0.0;
  for (std::size_t q = 1; q < phi.size(); ++q) {
    const double d = phi[q] - phi[q - 1];
    s += std::sqrt(d * d + upsilon);
  }
  return s;
}

std::vector<double> tv_gradient(std::span<const double> phi, double upsilon) {
  if (!(upsilon > 0.0)) throw InvalidArgument("upsilon must be positive");
  std::vector<double> g(phi.size(), 0.0);
  for (std::size_t q = 1; q < phi.size(); ++q) {
    const double d = phi[q] - phi[q - 1];
    const double w = d / std::sqrt(d * d + upsilon);
    g[q] += w;
    g[q - 1] -= w;
  }
  return g;
}

double fidelity(std::span<const double> phi, std::span<const double> Phi,
                const SplitOperator& op, const DiagonalMatrix& lambda) {
  check_sizes(phi, Phi, op, lambda);
  std::vector<double> r = op.apply(phi);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = Phi[i] - r[i];
  return weighted_norm2(r, lambda);
}

double objective(std::span<const double> phi, std::span<const double> Phi,
                 const SplitOperator& op, const DiagonalMatrix& lambda, const PwlsConfig& cfg) {
  if (!cfg.alpha || !cfg.upsilon) {
    throw InvalidArgument("objective needs resolved alpha and upsilon");
  }
  return fidelity(phi, Phi, op, lambda) + *cfg.alpha * tv_value(phi, *cfg.upsilon);
}

std::optional<double> fidelity_step_size(std::span<const double> phi,
                                         std::span<const double> Phi, const SplitOperator& op,
                                         const DiagonalMatrix& lambda) {
  check_sizes(phi, Phi, op, lambda);
  const std::size_t m = op.size();
  std::vector<double> r = op.apply(phi);
  for (std::size_t i = 0; i < m; ++i) r[i] = (r[i] - Phi[i]) / lambda.diag[i];
  const std::vector<double> g = op.apply_transpose(r);
  const std::vector<double> bg = op.apply(g);
  const double num = dot(g, g);
  const double den = weighted_norm2(bg, lambda);
  if (num == 0.0 || den == 0.0) return std::nullopt;
  return num / den;
}

double default_alpha(const DiagonalMatrix& lambda) {
  const double mean = lambda.mean();
  if (!(mean > 0.0)) throw InvalidArgument("cannot derive alpha from a zero covariance");
  return 1.0 / std::sqrt(mean);
}

double default_upsilon(std::span<const double> init) {
  std::vector<double> mags(init.size());
  std::transform(init.begin(), init.end(), mags.begin(), [](double v) { return std::abs(v); });
  double scale = 0.0;
  if (!mags.empty()) {
    auto mid = mags.begin() + static_cast<std::ptrdiff_t>(mags.size() / 2);
    std::nth_element(mags.begin(), mid, mags.end());
    scale = *mid;
    if (scale == 0.0) scale = *std::max_element(mags.begin(), mags.end());
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1.0;
  return 1e-8 * scale * scale;
}

PwlsConfig resolve(const PwlsConfig& cfg, const DiagonalMatrix& lambda,
                   std::span<const double> init) {
  PwlsConfig out = cfg;
  if (!out.alpha) out.alpha = default_alpha(lambda);
  if (!out.upsilon) out.upsilon = default_upsilon(init);
  return out;
}

std::pair<std::vector<double>, SolveReport> solve(std::span<const double> Phi,
                                                  const SplitOperator& op,
                                                  const DiagonalMatrix& lambda,
                                                  const PwlsConfig& cfg_in,
                                                  std::span<const double> init) {
  cfg_in.validate();
  check_sizes(init, Phi, op, lambda);
  const PwlsConfig cfg = resolve(cfg_in, lambda, init);
  const double alpha = *cfg.alpha;
  const double upsilon = *cfg.upsilon;
  const bool use_tv = alpha > 0.0 && cfg.tau > 0.0;
  const std::size_t m = op.size();

  std::vector<double> phi(init.begin(), init.end());
  std::vector<double> r(m), g(m), bg(m);
  SolveReport report;

  auto eval = [&](std::span<const double> x) {
    op.apply(x, r);
    for (std::size_t i = 0; i < m; ++i) r[i] -= Phi[i];
    return weighted_norm2(r, lambda) + alpha * tv_value(x, upsilon);
  };

  double f = eval(phi);
  report.objective_trace.push_back(f);
  if (!std::isfinite(f)) {
    throw NumericalFailure("PWLS objective is not finite at the initial estimate", std::nullopt,
                           report.objective_trace);
  }

  for (std::size_t t = 0; t < cfg.max_iters; ++t) {
    // r = Bφ - Φ from the last eval; G = Bᵀ Λ⁻¹ r.
    for (std::size_t i = 0; i < m; ++i) r[i] /= lambda.diag[i];
    op.apply_transpose(r, g);
    op.apply(g, bg);
    const double num = dot(g, g);
    const double den = weighted_norm2(bg, lambda);
    const double eta = (num == 0.0 || den == 0.0) ? 0.0 : num / den;

    std::vector<double> tv;
    double tv_norm = 0.0;
    if (use_tv) {
      tv = tv_gradient(phi, upsilon);
      tv_norm = std::sqrt(dot(tv, tv));
    }
    if (eta == 0.0 && tv_norm == 0.0) {
      report.converged = true;
      break;
    }
    for (std::size_t i = 0; i < m; ++i) {
      double next = phi[i] - eta * g[i];
      if (tv_norm > 0.0) next -= cfg.tau * tv[i] / tv_norm;
      phi[i] = cfg.nonneg ? std::max(next, 0.0) : next;
    }
    const double f_next = eval(phi);
    report.objective_trace.push_back(f_next);
    ++report.iterations_run;
    if (!std::isfinite(f_next)) {
      throw NumericalFailure("PWLS objective became non-finite at iteration " +
                                 std::to_string(report.iterations_run),
                             std::nullopt, report.objective_trace);
    }
    const bool stalled = std::abs(f - f_next) <= cfg.rel_tol * std::abs(f);
    f = f_next;
    if (stalled) {
      report.converged = true;
      break;
    }
  }

  op.apply(phi, r);
  double res = 0.0;
  for (std::size_t i = 0; i < m; ++i) res += (r[i] - Phi[i]) * (r[i] - Phi[i]);
  report.final_residual = std::sqrt(res);
  return {std::move(phi), std::move(report)};
}

namespace {

DenoiseResult denoise_rows(const Sinogram& inverted, const Sinogram* split,
                           const SplitOperator& op, const NoiseModel& model,
                           const PwlsConfig& cfg) {
  if (inverted.kind() != SinogramKind::Inverted) {
    throw InvalidArgument("denoising expects an Inverted sinogram, got " +
                          std::string(to_string(inverted.kind())));
  }
  if (inverted.m() != op.size()) {
    throw ShapeMismatch("sinogram width does not match split operator size");
  }
  if (split && (split->m() != inverted.m() || split->views() != inverted.views())) {
    throw ShapeMismatch("split and inverted sinograms differ in shape");
  }
  cfg.validate();
  const DiagonalMatrix lambda = build_weight_matrix(model, op.size());
  Array2D out(inverted.views(), inverted.m());
  std::vector<SolveReport> reports(inverted.views());

  parallel_for(inverted.views(), cfg.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t v = begin; v < end; ++v) {
      const auto init = inverted.data().row(v);
      std::vector<double> measured = split ? std::vector<double>(split->data().row(v).begin(),
                                                                 split->data().row(v).end())
                                           : op.apply(init);
      try {
        auto [phi, report] = solve(measured, op, lambda, cfg, init);
        std::copy(phi.begin(), phi.end(), out.row(v).begin());
        reports[v] = std::move(report);
      } catch (NumericalFailure& e) {
        e.set_view(v);
        throw;
      }
    }
  });
  return {inverted.with_data(std::move(out), SinogramKind::Denoised), std::move(reports)};
}

}  // namespace

DenoiseResult denoise_sinogram(const Sinogram& inverted, const SplitOperator& op,
                               const NoiseModel& model, const PwlsConfig& cfg) {
  return denoise_rows(inverted, nullptr, op, model, cfg);
}

DenoiseResult denoise_sinogram(const Sinogram& inverted, const Sinogram& split,
                               const SplitOperator& op, const NoiseModel& model,
                               const PwlsConfig& cfg) {
  return denoise_rows(inverted, &split, op, model, cfg);
}

}  // namespace npct
