#pragma once

// Analytic Gaussian phase-space states and their classification as the value
// of Planck's constant is varied.

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hbarcheck/matcore.hpp"
#include "hbarcheck/symplectic.hpp"

namespace hbarcheck {

/// Normalized Gaussian on 2n-dimensional phase space: mean z̄, covariance Σ
/// and the value of ħ it was prepared with.
class GaussianState {
 public:
  GaussianState(std::vector<double> mean, RealMatrix sigma, double hbar_ref = 1.0)
      : mean_(std::move(mean)), sigma_(std::move(sigma)), hbar_ref_(hbar_ref) {
    require_spd_covariance(sigma_);
    if (mean_.size() != sigma_.rows()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "mean has " + std::to_string(mean_.size()) + " entries, covariance is " +
                      std::to_string(sigma_.rows()) + "-dimensional");
    }
    if (!(hbar_ref_ > 0.0) || !std::isfinite(hbar_ref_)) {
      throw Error(ErrorCode::InvalidArgument, "hbar_ref must be positive");
    }
    sigma_ = symmetrized(sigma_);
  }

  /// Centered state with covariance Σ.
  explicit GaussianState(RealMatrix sigma, double hbar_ref = 1.0)
      : GaussianState(std::vector<double>(sigma.rows(), 0.0), std::move(sigma), hbar_ref) {}

  std::size_t modes() const noexcept { return sigma_.rows() / 2; }
  const std::vector<double>& mean() const noexcept { return mean_; }
  const RealMatrix& sigma() const noexcept { return sigma_; }
  double hbar_ref() const noexcept { return hbar_ref_; }

  double sigma_xx(std::size_t j, std::size_t k) const { return sigma_(j, k); }
  double sigma_xp(std::size_t j, std::size_t k) const { return sigma_(j, k + modes()); }
  double sigma_pp(std::size_t j, std::size_t k) const {
    return sigma_(j + modes(), k + modes());
  }

 private:
  std::vector<double> mean_;
  RealMatrix sigma_;
  double hbar_ref_;
};

/// Minimum-uncertainty single-mode state: Σ = diag(σ_X², (ħ/2σ_X)²).
inline GaussianState coherent_state(double sigma_x, double hbar = 1.0, double x0 = 0.0,
                                    double p0 = 0.0) {
  if (!(sigma_x > 0.0)) throw Error(ErrorCode::NonPositiveWidth, "coherent_state width");
  const double sigma_p = hbar / (2.0 * sigma_x);
  return GaussianState({x0, p0}, RealMatrix::diagonal({sigma_x * sigma_x, sigma_p * sigma_p}),
                       hbar);
}

enum class GaussianLabel { QuantumPure, QuantumMixed, ClassicalOnly, Invalid };

constexpr std::string_view to_string(GaussianLabel l) {
  switch (l) {
    case GaussianLabel::QuantumPure: return "QuantumPure";
    case GaussianLabel::QuantumMixed: return "QuantumMixed";
    case GaussianLabel::ClassicalOnly: return "ClassicalOnly";
    case GaussianLabel::Invalid: return "Invalid";
  }
  return "Invalid";
}

struct GaussianVerdict {
  GaussianLabel label = GaussianLabel::Invalid;
  double hbar_prime = 0.0;
  double lambda_min = 0.0;
  double hbar_critical = 0.0;  // 2 * lambda_min
  std::vector<double> symplectic_eigenvalues;
  std::vector<bool> rsi_satisfied;
  bool saturated = false;
};

/// Relative band for "λ_j = ħ′/2".
inline constexpr double kSaturationTol = 1e-9;

/// Value of the normalized Gaussian density at z.
inline double gaussian_wigner(const GaussianState& state, std::span<const double> z) {
  const std::size_t dim = state.sigma().rows();
  if (z.size() != dim) {
    throw Error(ErrorCode::DimensionMismatch, "phase-space point has " +
                                                  std::to_string(z.size()) +
                                                  " coordinates, expected " + std::to_string(dim));
  }
  const RealMatrix l = cholesky(state.sigma());
  std::vector<double> d(dim);
  for (std::size_t i = 0; i < dim; ++i) d[i] = z[i] - state.mean()[i];
  const auto solved = cholesky_solve(l, d);
  double quad = 0.0;
  double log_sqrt_det = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    quad += d[i] * solved[i];
    log_sqrt_det += std::log(l(i, i));
  }
  const double n = static_cast<double>(state.modes());
  return std::exp(-0.5 * quad - log_sqrt_det - n * std::log(2.0 * std::numbers::pi));
}

inline double gaussian_wigner(const GaussianState& state, std::initializer_list<double> z) {
  return gaussian_wigner(state, std::span<const double>(z.begin(), z.size()));
}

/// Normalized real Gaussian wavefunction whose position density has
/// variance σ_X²: (2πσ_X²)^{-1/4} exp(-x²/(4σ_X²)).
inline double coherent_wavefunction(double sigma_x, double x) {
  if (!(sigma_x > 0.0)) {
    throw Error(ErrorCode::NonPositiveWidth, "sigma_x must be positive");
  }
  const double s2 = sigma_x * sigma_x;
  return std::pow(2.0 * std::numbers::pi * s2, -0.25) * std::exp(-x * x / (4.0 * s2));
}

namespace detail {

inline void require_hbar(double hbar_prime) {
  if (!(hbar_prime > 0.0) || !std::isfinite(hbar_prime)) {
    throw Error(ErrorCode::InvalidArgument, "hbar' must be a positive finite number");
  }
}

}  // namespace detail

/// Σ + (iħ′/2) J >= 0, tested with scale = trace(Σ).
inline bool klm_check(const GaussianState& state, double hbar_prime) {
  detail::require_hbar(hbar_prime);
  const RealMatrix& sigma = state.sigma();
  const RealMatrix im = 0.5 * hbar_prime * standard_J(state.modes()).matrix;
  const auto spec = eig_hermitian(HermitianMatrix(sigma, im));
  return is_psd(spec, trace(sigma));
}

/// Per-mode Robertson-Schrödinger inequality
/// Σxx[j,j] Σpp[j,j] >= Σxp[j,j]² + ħ′²/4 with 1e-12 relative slack.
inline std::vector<bool> rsi_check(const GaussianState& state, double hbar_prime) {
  detail::require_hbar(hbar_prime);
  std::vector<bool> out(state.modes());
  for (std::size_t j = 0; j < state.modes(); ++j) {
    const double lhs = state.sigma_xx(j, j) * state.sigma_pp(j, j);
    const double xp = state.sigma_xp(j, j);
    const double rhs = xp * xp + 0.25 * hbar_prime * hbar_prime;
    out[j] = lhs >= rhs - 1e-12 * std::max(std::abs(lhs), std::abs(rhs));
  }
  return out;
}

/// Largest ħ′ for which the state is still quantum: 2 λ_min.
inline double critical_hbar(const GaussianState& state) {
  return 2.0 * symplectic_eigenvalues(state.sigma()).min();
}

inline GaussianVerdict classify_gaussian(const GaussianState& state, double hbar_prime) {
  detail::require_hbar(hbar_prime);
  const auto spectrum = symplectic_eigenvalues(state.sigma());
  GaussianVerdict v;
  v.hbar_prime = hbar_prime;
  v.lambda_min = spectrum.min();
  v.hbar_critical = 2.0 * v.lambda_min;
  v.symplectic_eigenvalues = spectrum.lambdas;
  v.rsi_satisfied = rsi_check(state, hbar_prime);

  const double half = 0.5 * hbar_prime;
  const double band = kSaturationTol * hbar_prime;
  double worst = 0.0;
  for (double l : spectrum.lambdas) worst = std::max(worst, std::abs(l - half));
  v.saturated = worst <= band;

  if (v.saturated) {
    v.label = GaussianLabel::QuantumPure;
  } else if (v.lambda_min >= half - band) {
    v.label = GaussianLabel::QuantumMixed;
  } else {
    v.label = GaussianLabel::ClassicalOnly;
  }
  return v;
}

/// tr ρ̂² = Π_j ħ′/(2 λ_j) = (ħ′/2)^n / √det Σ.
inline double gaussian_purity(const GaussianState& state, double hbar_prime) {
  if (!klm_check(state, hbar_prime)) {
    throw Error(ErrorCode::NotAQuantumState,
                "covariance violates the quantum condition at hbar' = " +
                    std::to_string(hbar_prime));
  }
  const double n = static_cast<double>(state.modes());
  const double value = std::pow(0.5 * hbar_prime, n) / std::sqrt(det(state.sigma()));
  // klm_check admits a 1e-10 band below the boundary; clip the overshoot.
  return std::min(value, 1.0);
}

}  // namespace hbarcheck
