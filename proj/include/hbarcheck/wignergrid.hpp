#pragma once

// One-dimensional wavefunctions on uniform grids and their Wigner functions.
//
// Conventions (frozen by the marginal and mass identities in the tests):
//   x_j = -L + j·Δx,            Δx = 2L/N,           j = 0..N-1
//   p_k = (k - N/2)·Δp,         Δp = πħ/(N·Δx),      k = 0..N-1
//   W(x_j, p_k) = (Δx/πħ) Σ_m ψ(x_{j+m}) ψ*(x_{j-m}) e^{-2πi(k-N/2)m/N}
// i.e. the offsets y_m = 2mΔx (m = -N/2..N/2-1) land exactly on grid nodes
// and the momentum lattice is the DFT conjugate of the y lattice.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "hbarcheck/fft.hpp"
#include "hbarcheck/gaussian.hpp"
#include "hbarcheck/matcore.hpp"

namespace hbarcheck {

using Complex = std::complex<double>;

class PositionGrid {
 public:
  PositionGrid(double half_width, std::size_t points) : L_(half_width), N_(points) {
    if (!(L_ > 0.0) || !std::isfinite(L_)) {
      throw Error(ErrorCode::InvalidGrid, "half-width must be positive");
    }
    if (N_ < 16 || (N_ & (N_ - 1)) != 0) {
      throw Error(ErrorCode::InvalidGrid,
                  "point count " + std::to_string(N_) + " is not a power of two >= 16");
    }
  }

  double half_width() const noexcept { return L_; }
  std::size_t size() const noexcept { return N_; }
  double spacing() const noexcept { return 2.0 * L_ / static_cast<double>(N_); }
  double point(std::size_t j) const noexcept {
    return -L_ + static_cast<double>(j) * spacing();
  }

  bool operator==(const PositionGrid&) const = default;

 private:
  double L_;
  std::size_t N_;
};

inline constexpr double kNormalizationTol = 1e-8;
inline constexpr double kEdgeDecayTol = 1e-10;
inline constexpr double kMassTol = 1e-6;

class GridWavefunction {
 public:
  GridWavefunction(PositionGrid grid, std::vector<Complex> values, double hbar)
      : grid_(grid), values_(std::move(values)), hbar_(hbar) {
    if (values_.size() != grid_.size()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "wavefunction has " + std::to_string(values_.size()) + " samples for a " +
                      std::to_string(grid_.size()) + "-point grid");
    }
    detail::require_hbar(hbar_);
  }

  const PositionGrid& grid() const noexcept { return grid_; }
  const std::vector<Complex>& values() const noexcept { return values_; }
  double hbar() const noexcept { return hbar_; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& v : values_) s += std::norm(v);
    return s * grid_.spacing();
  }

  GridWavefunction normalized() const {
    const double n2 = norm_squared();
    if (!(n2 > 0.0)) throw Error(ErrorCode::NotNormalized, "zero wavefunction");
    const double f = 1.0 / std::sqrt(n2);
    std::vector<Complex> v = values_;
    for (auto& c : v) c *= f;
    return {grid_, std::move(v), hbar_};
  }

  double edge_magnitude() const {
    return std::max(std::abs(values_.front()), std::abs(values_.back()));
  }

  void require_edge_decay() const {
    const double edge = edge_magnitude();
    if (edge > kEdgeDecayTol) {
      throw Error(ErrorCode::EdgeLeakage,
                  "boundary magnitude " + std::to_string(edge) + " exceeds 1e-10");
    }
  }

  void require_normalized() const {
    const double n2 = norm_squared();
    if (std::abs(n2 - 1.0) > kNormalizationTol) {
      throw Error(ErrorCode::NotNormalized, "sum |psi|^2 dx = " + std::to_string(n2));
    }
  }

 private:
  PositionGrid grid_;
  std::vector<Complex> values_;
  double hbar_;
};

/// Samples W(x_j, p_k), row-major with x as the slow index.
class WignerGrid {
 public:
  WignerGrid(PositionGrid xgrid, std::vector<double> pvalues, std::vector<double> w, double hbar)
      : xgrid_(xgrid), pvalues_(std::move(pvalues)), w_(std::move(w)), hbar_(hbar) {
    const std::size_t n = xgrid_.size();
    if (pvalues_.size() != n || w_.size() != n * n) {
      throw Error(ErrorCode::DimensionMismatch, "Wigner grid must be N x N with N momenta");
    }
    detail::require_hbar(hbar_);
  }

  static std::vector<double> conjugate_momenta(const PositionGrid& xgrid, double hbar) {
    const std::size_t n = xgrid.size();
    const double dp = std::numbers::pi * hbar / (static_cast<double>(n) * xgrid.spacing());
    std::vector<double> p(n);
    for (std::size_t k = 0; k < n; ++k) {
      p[k] = (static_cast<double>(k) - static_cast<double>(n / 2)) * dp;
    }
    return p;
  }

  const PositionGrid& xgrid() const noexcept { return xgrid_; }
  const std::vector<double>& pvalues() const noexcept { return pvalues_; }
  const std::vector<double>& values() const noexcept { return w_; }
  double hbar() const noexcept { return hbar_; }
  std::size_t size() const noexcept { return xgrid_.size(); }

  double dx() const noexcept { return xgrid_.spacing(); }
  double dp() const noexcept { return pvalues_[1] - pvalues_[0]; }
  double p_max() const noexcept { return std::max(-pvalues_.front(), pvalues_.back()); }

  double at(std::size_t j, std::size_t k) const { return w_[j * size() + k]; }

  double mass() const {
    double s = 0.0;
    for (double v : w_) s += v;
    return s * dx() * dp();
  }

  /// ΣΣ w² Δx Δp; multiply by 2πħ′ for the purity at ħ′.
  double square_integral() const {
    double s = 0.0;
    for (double v : w_) s += v * v;
    return s * dx() * dp();
  }

 private:
  PositionGrid xgrid_;
  std::vector<double> pvalues_;
  std::vector<double> w_;
  double hbar_;
};

struct MixtureComponent {
  double weight;
  GridWavefunction psi;
};

class MixtureEnsemble {
 public:
  explicit MixtureEnsemble(std::vector<MixtureComponent> components)
      : components_(std::move(components)) {
    if (components_.empty()) throw Error(ErrorCode::InvalidEnsemble, "empty ensemble");
    double total = 0.0;
    for (const auto& c : components_) {
      if (!(c.weight >= 0.0)) throw Error(ErrorCode::InvalidEnsemble, "negative weight");
      c.psi.require_normalized();
      total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw Error(ErrorCode::InvalidEnsemble, "weights sum to " + std::to_string(total));
    }
  }

  const std::vector<MixtureComponent>& components() const noexcept { return components_; }

 private:
  std::vector<MixtureComponent> components_;
};

inline WignerGrid wigner_transform(const GridWavefunction& psi) {
  psi.require_normalized();
  psi.require_edge_decay();

  const auto& grid = psi.grid();
  const auto& v = psi.values();
  const std::size_t n = grid.size();
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  const auto sn = static_cast<std::ptrdiff_t>(n);

  BatchFft fft(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    auto row = fft.row(j);
    const auto jj = static_cast<std::ptrdiff_t>(j);
    for (std::ptrdiff_t m = -half; m < half; ++m) {
      const std::ptrdiff_t a = jj + m;
      const std::ptrdiff_t b = jj - m;
      Complex c{0.0, 0.0};
      if (a >= 0 && a < sn && b >= 0 && b < sn) {
        c = v[static_cast<std::size_t>(a)] * std::conj(v[static_cast<std::size_t>(b)]);
        if (m % 2 != 0) c = -c;  // shifts the output to centred momenta
      }
      row[static_cast<std::size_t>((m + sn) % sn)] = c;
    }
  }
  fft.execute();

  const double pref = grid.spacing() / (std::numbers::pi * psi.hbar());
  std::vector<double> w(n * n);
  double max_re = 0.0, max_im = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    auto row = fft.row(j);
    for (std::size_t k = 0; k < n; ++k) {
      w[j * n + k] = pref * row[k].real();
      max_re = std::max(max_re, std::abs(w[j * n + k]));
      max_im = std::max(max_im, std::abs(pref * row[k].imag()));
    }
  }
  if (max_im > 1e-12 * std::max(1.0, max_re)) {
    throw Error(ErrorCode::HermiticityViolation,
                "Wigner transform imaginary residual " + std::to_string(max_im));
  }
  return {grid, WignerGrid::conjugate_momenta(grid, psi.hbar()), std::move(w), psi.hbar()};
}

inline WignerGrid mixture_wigner(const MixtureEnsemble& ens) {
  const auto& first = ens.components().front().psi;
  for (const auto& c : ens.components()) {
    if (!(c.psi.grid() == first.grid()) || c.psi.hbar() != first.hbar()) {
      throw Error(ErrorCode::GridMismatch, "mixture components use different grids or hbar");
    }
  }
  const std::size_t n = first.grid().size();
  std::vector<double> w(n * n, 0.0);
  for (const auto& c : ens.components()) {
    const auto wc = wigner_transform(c.psi);
    const auto& vals = wc.values();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += c.weight * vals[i];
  }
  return {first.grid(), WignerGrid::conjugate_momenta(first.grid(), first.hbar()), std::move(w),
          first.hbar()};
}

struct Marginals {
  std::vector<double> position;  // ≈ |ψ(x_j)|²
  std::vector<double> momentum;  // ≈ |φ(p_k)|²
};

inline Marginals marginals(const WignerGrid& w) {
  const std::size_t n = w.size();
  Marginals m{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      m.position[j] += w.at(j, k);
      m.momentum[k] += w.at(j, k);
    }
  for (auto& v : m.position) v *= w.dp();
  for (auto& v : m.momentum) v *= w.dx();
  return m;
}

struct GridMoments {
  std::array<double, 2> mean{};
  RealMatrix sigma;  // 2x2, ordered (x, p)
};

inline GridMoments covariance_from_grid(const WignerGrid& w) {
  const double mass = w.mass();
  if (std::abs(mass - 1.0) > kMassTol) {
    throw Error(ErrorCode::MassDeficit, "total mass " + std::to_string(mass));
  }
  const std::size_t n = w.size();
  const double cell = w.dx() * w.dp();
  double mx = 0.0, mp = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      mx += w.at(j, k) * w.xgrid().point(j);
      mp += w.at(j, k) * w.pvalues()[k];
    }
  mx *= cell;
  mp *= cell;
  RealMatrix s(2, 2);
  for (std::size_t j = 0; j < n; ++j) {
    const double dx = w.xgrid().point(j) - mx;
    for (std::size_t k = 0; k < n; ++k) {
      const double dp = w.pvalues()[k] - mp;
      const double v = w.at(j, k) * cell;
      s(0, 0) += v * dx * dx;
      s(0, 1) += v * dx * dp;
      s(1, 0) += v * dp * dx;
      s(1, 1) += v * dp * dp;
    }
  }
  return {{mx, mp}, symmetrized(s)};
}

/// k-th harmonic-oscillator eigenfunction whose ground state has position
/// spread σ_X, sampled on the grid and renormalized there.
inline GridWavefunction hermite_wavefunction(std::size_t k, double sigma_x,
                                             const PositionGrid& grid, double hbar = 1.0) {
  if (k > 8) throw Error(ErrorCode::InvalidArgument, "Hermite index above 8");
  if (!(sigma_x > 0.0)) throw Error(ErrorCode::NonPositiveWidth, "sigma_x must be positive");
  const double alpha = 1.0 / (std::sqrt(2.0) * sigma_x);
  std::vector<Complex> values(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double u = alpha * grid.point(j);
    // Orthonormal Hermite functions via the stable three-term recurrence.
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * u * u);
    for (std::size_t i = 0; i < k; ++i) {
      const double next = std::sqrt(2.0 / static_cast<double>(i + 1)) * u * cur -
                          std::sqrt(static_cast<double>(i) / static_cast<double>(i + 1)) * prev;
      prev = cur;
      cur = next;
    }
    values[j] = std::sqrt(alpha) * cur;
  }
  GridWavefunction psi(grid, std::move(values), hbar);
  psi.require_edge_decay();
  return psi.normalized();
}

/// ψ(x) = coherent_wavefunction(σ_X, x - x0) e^{i p0 x/ħ}, renormalized on the grid.
inline GridWavefunction coherent_grid_wavefunction(double sigma_x, const PositionGrid& grid,
                                                   double hbar = 1.0, double x0 = 0.0,
                                                   double p0 = 0.0) {
  detail::require_hbar(hbar);
  std::vector<Complex> values(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.point(j);
    values[j] = coherent_wavefunction(sigma_x, x - x0) * std::polar(1.0, p0 * x / hbar);
  }
  GridWavefunction psi(grid, std::move(values), hbar);
  psi.require_edge_decay();
  return psi.normalized();
}

/// Samples a single-mode Gaussian density on the conjugate phase-space grid
/// for ħ = state.hbar_ref().
inline WignerGrid sample_gaussian_wigner(const GaussianState& state, const PositionGrid& grid) {
  if (state.modes() != 1) {
    throw Error(ErrorCode::DimensionMismatch, "grid sampling supports one mode only");
  }
  auto p = WignerGrid::conjugate_momenta(grid, state.hbar_ref());
  const std::size_t n = grid.size();
  std::vector<double> w(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) w[j * n + k] = gaussian_wigner(state, {grid.point(j), p[k]});
  return {grid, std::move(p), std::move(w), state.hbar_ref()};
}

}  // namespace hbarcheck
