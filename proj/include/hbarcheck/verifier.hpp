#pragma once

// Decides whether a sampled phase-space function is the Wigner function of a
// density operator when it is read with a (possibly different) value ħ′.
//
// The candidate operator is rebuilt from W by the inverse Wigner transform at
// ħ′ and represented on the even-index sublattice x_0, x_2, x_4, ... of the
// position grid: for two sublattice points the midpoint is always a grid node
// and the separation is an even multiple of Δx, so every matrix element is
// available without interpolation. The discrete operator is K(x_a, x_b)·2Δx.

#include <cmath>
#include <complex>
#include <future>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hbarcheck/matcore.hpp"
#include "hbarcheck/wignergrid.hpp"

namespace hbarcheck {

inline constexpr double kDefaultVerifyTol = 1e-8;
inline constexpr double kPureThreshold = 1e-6;
inline constexpr double kPurityCrossCheckTol = 1e-5;
inline constexpr double kKernelHermiticityTol = 1e-8;

/// ⟨x_a|ρ̂|x_b⟩ on the even sublattice of `parent`.
class OperatorKernel {
 public:
  OperatorKernel(PositionGrid parent, std::vector<Complex> values, double hbar_prime)
      : parent_(parent), values_(std::move(values)), hbar_prime_(hbar_prime) {
    if (values_.size() != dim() * dim()) {
      throw Error(ErrorCode::DimensionMismatch, "kernel size does not match sublattice");
    }
  }

  const PositionGrid& parent_grid() const noexcept { return parent_; }
  std::size_t dim() const noexcept { return parent_.size() / 2; }
  double spacing() const noexcept { return 2.0 * parent_.spacing(); }
  double point(std::size_t i) const noexcept { return parent_.point(2 * i); }
  double hbar_prime() const noexcept { return hbar_prime_; }

  Complex at(std::size_t a, std::size_t b) const { return values_[a * dim() + b]; }
  const std::vector<Complex>& values() const noexcept { return values_; }

  /// The Hermitian matrix K·spacing whose spectrum approximates that of ρ̂.
  HermitianMatrix operator_matrix() const {
    const std::size_t n = dim();
    RealMatrix re(n, n), im(n, n);
    const double h = spacing();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        re(a, b) = at(a, b).real() * h;
        im(a, b) = at(a, b).imag() * h;
      }
    return {std::move(re), std::move(im)};
  }

 private:
  PositionGrid parent_;
  std::vector<Complex> values_;
  double hbar_prime_;
};

/// K(x + y/2, x - y/2) = Σ_k W(x, p_k) e^{i p_k y/ħ′} Δp.
///
/// The momentum sum is periodic in y with period 2πħ′/Δp; separations at or
/// beyond half a period are aliased and set to zero.
inline OperatorKernel reconstruct_kernel(const WignerGrid& w, double hbar_prime) {
  detail::require_hbar(hbar_prime);
  const std::size_t n = w.size();
  const std::size_t dim = n / 2;
  const double dx = w.dx();
  const double dp = w.dp();
  const double cutoff = 0.5 * (2.0 * std::numbers::pi * hbar_prime / dp) * (1.0 - 1e-12);
  const auto& p = w.pvalues();

  std::vector<Complex> k(dim * dim, Complex{0.0, 0.0});
  std::vector<Complex> phase(n);
  const auto sdim = static_cast<std::ptrdiff_t>(dim);
  for (std::ptrdiff_t m = -(sdim - 1); m < sdim; ++m) {
    const double y = 2.0 * static_cast<double>(m) * dx;
    if (std::abs(y) >= cutoff) continue;
    for (std::size_t q = 0; q < n; ++q) phase[q] = std::polar(dp, p[q] * y / hbar_prime);
    // Pairs (a, b) with a - b = m; the midpoint is grid row a + b.
    const std::ptrdiff_t b_lo = std::max<std::ptrdiff_t>(0, -m);
    const std::ptrdiff_t b_hi = std::min<std::ptrdiff_t>(sdim, sdim - m);
    for (std::ptrdiff_t b = b_lo; b < b_hi; ++b) {
      const std::ptrdiff_t a = b + m;
      const std::size_t row = static_cast<std::size_t>(a + b);
      const double* wr = w.values().data() + row * n;
      Complex acc{0.0, 0.0};
      for (std::size_t q = 0; q < n; ++q) acc += wr[q] * phase[q];
      k[static_cast<std::size_t>(a) * dim + static_cast<std::size_t>(b)] = acc;
    }
  }

  double residual = 0.0, scale = 0.0;
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = 0; b <= a; ++b) {
      residual = std::max(residual, std::abs(k[a * dim + b] - std::conj(k[b * dim + a])));
      scale = std::max(scale, std::abs(k[a * dim + b]));
    }
  if (residual > kKernelHermiticityTol * std::max(1.0, scale)) {
    throw Error(ErrorCode::HermiticityViolation,
                "kernel Hermiticity residual " + std::to_string(residual));
  }
  for (std::size_t a = 0; a < dim; ++a) {
    k[a * dim + a] = Complex{k[a * dim + a].real(), 0.0};
    for (std::size_t b = 0; b < a; ++b) {
      const Complex avg = 0.5 * (k[a * dim + b] + std::conj(k[b * dim + a]));
      k[a * dim + b] = avg;
      k[b * dim + a] = std::conj(avg);
    }
  }
  return {w.xgrid(), std::move(k), hbar_prime};
}

struct OperatorSpectrum {
  std::vector<double> eigenvalues;  // descending
  double trace = 0.0;
};

inline OperatorSpectrum operator_spectrum(const OperatorKernel& kernel) {
  const auto spec = eig_hermitian(kernel.operator_matrix());
  OperatorSpectrum out;
  out.eigenvalues.assign(spec.eigenvalues.rbegin(), spec.eigenvalues.rend());
  for (std::size_t a = 0; a < kernel.dim(); ++a) out.trace += kernel.at(a, a).real();
  out.trace *= kernel.spacing();
  return out;
}

enum class StateLabel { Pure, Mixed, NotAState };

constexpr std::string_view to_string(StateLabel l) {
  switch (l) {
    case StateLabel::Pure: return "Pure";
    case StateLabel::Mixed: return "Mixed";
    case StateLabel::NotAState: return "NotAState";
  }
  return "NotAState";
}

struct StateVerdict {
  double hbar_prime = 0.0;
  double trace = 0.0;
  double min_eigenvalue = 0.0;
  double purity = 0.0;              // Σ λ²
  double purity_phase_space = 0.0;  // 2πħ′ ∫ W²
  StateLabel label = StateLabel::NotAState;
  std::vector<double> eigenvalues;  // descending
};

inline StateVerdict verify_state(const WignerGrid& w, double hbar_prime,
                                 double tol = kDefaultVerifyTol) {
  const auto spectrum = operator_spectrum(reconstruct_kernel(w, hbar_prime));
  StateVerdict v;
  v.hbar_prime = hbar_prime;
  v.trace = spectrum.trace;
  v.min_eigenvalue = spectrum.eigenvalues.back();
  for (double l : spectrum.eigenvalues) v.purity += l * l;
  v.purity_phase_space = 2.0 * std::numbers::pi * hbar_prime * w.square_integral();
  if (std::abs(v.purity - v.purity_phase_space) > kPurityCrossCheckTol) {
    throw Error(ErrorCode::PurityCrossCheckMismatch,
                "spectral purity " + std::to_string(v.purity) + " vs phase-space purity " +
                    std::to_string(v.purity_phase_space) + " at hbar' = " +
                    std::to_string(hbar_prime) + " (grid too small for this hbar'?)");
  }
  v.eigenvalues = spectrum.eigenvalues;
  if (v.min_eigenvalue < -tol * std::max(1.0, std::abs(v.trace))) {
    v.label = StateLabel::NotAState;
  } else if (v.purity >= 1.0 - kPureThreshold) {
    v.label = StateLabel::Pure;
  } else {
    v.label = StateLabel::Mixed;
  }
  return v;
}

struct LabelTransition {
  double hbar_prime;  // first value carrying the new label
  StateLabel from;
  StateLabel to;
};

struct HbarScanReport {
  double hbar_reference = 0.0;
  std::vector<StateVerdict> verdicts;
  std::vector<LabelTransition> transitions;
  /// Whether every verdict below the reference ħ was positive semidefinite.
  /// Reported as evidence only; no expectation is attached to it.
  std::optional<bool> psd_below_reference;
};

inline HbarScanReport scan_hbar(const WignerGrid& w, std::span<const double> hbar_values,
                                double tol = kDefaultVerifyTol) {
  for (std::size_t i = 0; i < hbar_values.size(); ++i) {
    detail::require_hbar(hbar_values[i]);
    if (i > 0 && !(hbar_values[i] > hbar_values[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "hbar' values must be strictly ascending");
    }
  }
  std::vector<std::future<StateVerdict>> jobs;
  jobs.reserve(hbar_values.size());
  for (double h : hbar_values) {
    jobs.push_back(std::async(std::launch::async, [&w, h, tol] { return verify_state(w, h, tol); }));
  }

  HbarScanReport report;
  report.hbar_reference = w.hbar();
  for (auto& job : jobs) report.verdicts.push_back(job.get());
  for (std::size_t i = 1; i < report.verdicts.size(); ++i) {
    const auto& prev = report.verdicts[i - 1];
    const auto& cur = report.verdicts[i];
    if (prev.label != cur.label) report.transitions.push_back({cur.hbar_prime, prev.label, cur.label});
  }
  for (const auto& v : report.verdicts) {
    if (v.hbar_prime < w.hbar()) {
      const bool psd = v.label != StateLabel::NotAState;
      report.psd_below_reference = report.psd_below_reference.value_or(true) && psd;
    }
  }
  return report;
}

// Finite-sample positivity test.

struct PhasePoint {
  double x = 0.0;
  double p = 0.0;
};

/// σ(a, b) = a.p·b.x − a.x·b.p
inline double symplectic_product(PhasePoint a, PhasePoint b) { return a.p * b.x - a.x * b.p; }

/// Λ(a) = ∫ W(z) e^{iσ(a, z)/ħ′} dz by Riemann sum over the grid.
inline Complex symplectic_fourier(const WignerGrid& w, PhasePoint a, double hbar_prime) {
  const std::size_t n = w.size();
  std::vector<Complex> px(n);
  for (std::size_t k = 0; k < n; ++k) px[k] = std::polar(1.0, -a.x * w.pvalues()[k] / hbar_prime);
  Complex total{0.0, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    const double* row = w.values().data() + j * n;
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) acc += row[k] * px[k];
    total += acc * std::polar(1.0, a.p * w.xgrid().point(j) / hbar_prime);
  }
  return total * (w.dx() * w.dp());
}

inline constexpr std::size_t kMaxKlmPoints = 64;

/// M_jk = Λ(a_j − a_k) e^{iσ(a_j, a_k)/(2ħ′)}. Positive semidefinite for
/// every finite point set whenever W is a quantum state at ħ′.
inline HermitianMatrix klm_sample_matrix(const WignerGrid& w, double hbar_prime,
                                         std::span<const PhasePoint> points) {
  detail::require_hbar(hbar_prime);
  if (points.empty() || points.size() > kMaxKlmPoints) {
    throw Error(ErrorCode::InvalidArgument,
                "finite-sample test takes 1.." + std::to_string(kMaxKlmPoints) + " points");
  }
  const double xmax = w.xgrid().half_width();
  const double pmax = w.p_max();
  for (const auto& pt : points) {
    if (!(std::abs(pt.x) <= xmax) || !(std::abs(pt.p) <= pmax)) {
      throw Error(ErrorCode::PointOutOfBox, "point (" + std::to_string(pt.x) + ", " +
                                                std::to_string(pt.p) + ") outside the grid box");
    }
  }
  const std::size_t n = points.size();
  RealMatrix re(n, n), im(n, n);
  const double origin = symplectic_fourier(w, {0.0, 0.0}, hbar_prime).real();
  for (std::size_t j = 0; j < n; ++j) {
    re(j, j) = origin;
    for (std::size_t k = 0; k < j; ++k) {
      const PhasePoint d{points[j].x - points[k].x, points[j].p - points[k].p};
      const Complex m = symplectic_fourier(w, d, hbar_prime) *
                        std::polar(1.0, symplectic_product(points[j], points[k]) / (2.0 * hbar_prime));
      re(j, k) = m.real();
      im(j, k) = m.imag();
      re(k, j) = m.real();
      im(k, j) = -m.imag();
    }
  }
  return {std::move(re), std::move(im)};
}

struct KlmSampleResult {
  bool psd = false;
  double min_eigenvalue = 0.0;
};

inline KlmSampleResult klm_sample_spectrum(const WignerGrid& w, double hbar_prime,
                                           std::span<const PhasePoint> points) {
  const auto spec = eig_hermitian(klm_sample_matrix(w, hbar_prime, points));
  return {is_psd(spec, static_cast<double>(points.size())), spec.min()};
}

inline bool klm_finite_sample(const WignerGrid& w, double hbar_prime,
                              std::span<const PhasePoint> points) {
  return klm_sample_spectrum(w, hbar_prime, points).psd;
}

/// Origin-centred cross: (i·s, 0) and (0, i·s) for i = -arm..arm.
inline std::vector<PhasePoint> cross_points(double step, int arm) {
  std::vector<PhasePoint> pts{{0.0, 0.0}};
  for (int i = -arm; i <= arm; ++i) {
    if (i == 0) continue;
    pts.push_back({i * step, 0.0});
    pts.push_back({0.0, i * step});
  }
  return pts;
}

struct KlmWitness {
  std::vector<PhasePoint> points;
  double min_eigenvalue = 0.0;
};

/// Searches origin-centred crosses of increasing step for a point set whose
/// matrix fails the positivity test. Returns the first violating set.
inline std::optional<KlmWitness> search_klm_violation(const WignerGrid& w, double hbar_prime,
                                                      int arm = 4) {
  const double box = std::min(w.xgrid().half_width(), w.p_max());
  for (double step : {0.05, 0.1, 0.2, 0.3, 0.5, 0.8, 1.2, 2.0}) {
    if (step * arm > box) break;
    auto pts = cross_points(step, arm);
    const auto res = klm_sample_spectrum(w, hbar_prime, pts);
    if (!res.psd) return KlmWitness{std::move(pts), res.min_eigenvalue};
  }
  return std::nullopt;
}

}  // namespace hbarcheck
