#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hbarcheck/matcore.hpp"

namespace hbarcheck {

/// Phase-space coordinates are ordered (x_1..x_n, p_1..p_n) throughout.
struct SymplecticForm {
  std::size_t n = 0;
  RealMatrix matrix;  // [[0, I], [-I, 0]]
};

/// Symplectic eigenvalues, ascending.
struct WilliamsonSpectrum {
  std::vector<double> lambdas;

  double min() const { return lambdas.front(); }
  double max() const { return lambdas.back(); }
  std::size_t modes() const { return lambdas.size(); }
};

inline SymplecticForm standard_J(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::ZeroModes, "standard_J needs at least one mode");
  RealMatrix j(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    j(i, i + n) = 1.0;
    j(i + n, i) = -1.0;
  }
  return {n, std::move(j)};
}

/// Largest entry of |SᵀJS - J|.
inline double symplectic_defect(const RealMatrix& s) {
  if (!s.is_square() || s.rows() % 2 != 0) {
    throw Error(ErrorCode::OddDimension, "symplectic matrices have even square shape");
  }
  const auto j = standard_J(s.rows() / 2).matrix;
  return max_abs(transpose(s) * j * s - j);
}

namespace detail {

inline void require_covariance_shape(const RealMatrix& sigma) {
  if (!sigma.is_square()) throw Error(ErrorCode::NotSquare, "covariance matrix must be square");
  if (sigma.rows() == 0) throw Error(ErrorCode::ZeroModes, "empty covariance matrix");
  if (sigma.rows() % 2 != 0) {
    throw Error(ErrorCode::OddDimension,
                "covariance dimension " + std::to_string(sigma.rows()) + " is odd");
  }
  if (!is_symmetric(sigma, 1e-12)) throw Error(ErrorCode::NotSymmetric, "covariance matrix");
}

}  // namespace detail

/// Rejects covariance matrices that are not symmetric positive definite, or
/// whose smallest eigenvalue is at most 1e-12 of the trace.
inline void require_spd_covariance(const RealMatrix& sigma) {
  detail::require_covariance_shape(sigma);
  const auto spec = eig_symmetric(sigma, Vectors::Skip);
  const double tr = trace(sigma);
  if (!(tr > 0.0) || spec.min() <= 1e-12 * tr) {
    throw Error(ErrorCode::NotSPD, "covariance smallest eigenvalue " +
                                       std::to_string(spec.min()) + " vs trace " +
                                       std::to_string(tr));
  }
}

/// Route (a): moduli of the imaginary eigenvalues of Σ^{1/2} J Σ^{1/2},
/// read off the Hermitian matrix i·A (re = 0, im = A).
inline WilliamsonSpectrum symplectic_eigenvalues_antisymmetric(const RealMatrix& sigma) {
  const std::size_t n = sigma.rows() / 2;
  const RealMatrix root = sqrt_spd(sigma);
  const RealMatrix a = root * standard_J(n).matrix * root;
  // a is antisymmetric up to rounding; clean it so the Hermitian check is exact.
  RealMatrix anti(2 * n, 2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i)
    for (std::size_t k = i + 1; k < 2 * n; ++k) {
      const double v = 0.5 * (a(i, k) - a(k, i));
      anti(i, k) = v;
      anti(k, i) = -v;
    }
  const auto spec = eig_hermitian(HermitianMatrix(RealMatrix(2 * n, 2 * n), anti));
  // Ascending spectrum is (-λ_n, ..., -λ_1, λ_1, ..., λ_n).
  std::vector<double> lambdas(n);
  for (std::size_t i = 0; i < n; ++i) {
    lambdas[i] = 0.5 * (spec.eigenvalues[n + i] - spec.eigenvalues[n - 1 - i]);
  }
  return {std::move(lambdas)};
}

/// Route (b): square roots of the spectrum of -(JΣ)². With Σ = L Lᵀ the
/// matrix -(JΣ)² is similar to BᵀB, B = Lᵀ J L, whose eigenvalues are
/// λ_j² each with multiplicity two.
inline WilliamsonSpectrum symplectic_eigenvalues_squared(const RealMatrix& sigma) {
  const std::size_t n = sigma.rows() / 2;
  const RealMatrix l = cholesky(sigma);
  const RealMatrix b = transpose(l) * standard_J(n).matrix * l;
  const auto spec = eig_symmetric(symmetrized(transpose(b) * b), Vectors::Skip);
  std::vector<double> lambdas(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double sq = 0.5 * (spec.eigenvalues[2 * i] + spec.eigenvalues[2 * i + 1]);
    lambdas[i] = std::sqrt(std::max(sq, 0.0));
  }
  return {std::move(lambdas)};
}

inline constexpr double kWilliamsonCrossCheckTol = 1e-10;

/// Williamson spectrum of an SPD covariance matrix. Both routes are always
/// evaluated; disagreement beyond 1e-10 (relative to max(1, λ_max)) throws.
inline WilliamsonSpectrum symplectic_eigenvalues(const RealMatrix& sigma) {
  require_spd_covariance(sigma);
  auto a = symplectic_eigenvalues_antisymmetric(sigma);
  const auto b = symplectic_eigenvalues_squared(sigma);
  const double scale = std::max(1.0, a.max());
  for (std::size_t i = 0; i < a.lambdas.size(); ++i) {
    if (std::abs(a.lambdas[i] - b.lambdas[i]) > kWilliamsonCrossCheckTol * scale) {
      throw Error(ErrorCode::CrossCheckMismatch,
                  "symplectic eigenvalue " + std::to_string(i) + ": " +
                      std::to_string(a.lambdas[i]) + " vs " + std::to_string(b.lambdas[i]));
    }
  }
  return a;
}

// Elementary symplectic generators on n modes.

/// Rotation by theta in the (x_mode, p_mode) plane.
inline RealMatrix phase_rotation(std::size_t n, std::size_t mode, double theta) {
  RealMatrix s = RealMatrix::identity(2 * n);
  const double c = std::cos(theta), sn = std::sin(theta);
  s(mode, mode) = c;
  s(mode, mode + n) = sn;
  s(mode + n, mode) = -sn;
  s(mode + n, mode + n) = c;
  return s;
}

/// x_mode -> e^r x_mode, p_mode -> e^{-r} p_mode.
inline RealMatrix squeeze(std::size_t n, std::size_t mode, double r) {
  RealMatrix s = RealMatrix::identity(2 * n);
  s(mode, mode) = std::exp(r);
  s(mode + n, mode + n) = std::exp(-r);
  return s;
}

/// [[I, 0], [C, I]] for symmetric C (lower = true) or [[I, C], [0, I]].
inline RealMatrix shear(const RealMatrix& c, bool lower) {
  const std::size_t n = c.rows();
  RealMatrix s = RealMatrix::identity(2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (lower) {
        s(i + n, j) = c(i, j);
      } else {
        s(i, j + n) = c(i, j);
      }
    }
  return s;
}

/// diag(R, R) for a Givens rotation R mixing modes a and b.
inline RealMatrix mode_mixer(std::size_t n, std::size_t a, std::size_t b, double theta) {
  RealMatrix s = RealMatrix::identity(2 * n);
  const double c = std::cos(theta), sn = std::sin(theta);
  for (std::size_t off : {std::size_t{0}, n}) {
    s(a + off, a + off) = c;
    s(a + off, b + off) = -sn;
    s(b + off, a + off) = sn;
    s(b + off, b + off) = c;
  }
  return s;
}

/// Deterministic pseudo-random symplectic matrix built as a product of
/// rotations, squeezes, shears and mode mixers. `max_squeeze` bounds |r|
/// and shear entries so the conditioning stays moderate.
inline RealMatrix random_symplectic(std::size_t n, std::uint64_t seed, double max_squeeze = 0.5) {
  if (n == 0) throw Error(ErrorCode::ZeroModes, "random_symplectic needs at least one mode");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> amount(-max_squeeze, max_squeeze);

  RealMatrix s = RealMatrix::identity(2 * n);
  for (int round = 0; round < 2; ++round) {
    for (std::size_t m = 0; m < n; ++m) {
      s = phase_rotation(n, m, angle(rng)) * s;
      s = squeeze(n, m, amount(rng)) * s;
    }
    for (std::size_t a = 0; a + 1 < n; ++a) {
      s = mode_mixer(n, a, a + 1, angle(rng)) * s;
    }
    RealMatrix c(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) c(i, j) = c(j, i) = amount(rng);
    s = shear(c, round == 0) * s;
  }
  return s;
}

}  // namespace hbarcheck
