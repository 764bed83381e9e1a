#pragma once

// Dense real-symmetric / complex-Hermitian eigensolvers and the small amount
// of matrix algebra the rest of the library needs. Everything here operates on
// immutable inputs and returns fresh values.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hbarcheck/error.hpp"

namespace hbarcheck {

/// Row-major dense real matrix.
class RealMatrix {
 public:
  RealMatrix() = default;

  RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw Error(ErrorCode::DimensionMismatch,
                  "expected " + std::to_string(rows_ * cols_) + " entries, got " +
                      std::to_string(data_.size()));
    }
  }

  RealMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static RealMatrix identity(std::size_t n) {
    RealMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static RealMatrix diagonal(std::span<const double> d) {
    RealMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  static RealMatrix diagonal(std::initializer_list<double> d) {
    return diagonal(std::span<const double>(d.begin(), d.size()));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  bool operator==(const RealMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline RealMatrix transpose(const RealMatrix& m) {
  RealMatrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

inline RealMatrix operator*(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix product of incompatible shapes");
  }
  RealMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

inline RealMatrix operator+(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix sum of incompatible shapes");
  }
  RealMatrix c = a;
  auto cd = c.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < cd.size(); ++i) cd[i] += bd[i];
  return c;
}

inline RealMatrix operator-(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix difference of incompatible shapes");
  }
  RealMatrix c = a;
  auto cd = c.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < cd.size(); ++i) cd[i] -= bd[i];
  return c;
}

inline RealMatrix operator*(double s, const RealMatrix& a) {
  RealMatrix c = a;
  for (double& v : c.data()) v *= s;
  return c;
}

inline std::vector<double> operator*(const RealMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw Error(ErrorCode::DimensionMismatch, "matrix-vector shape");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

/// Maximum absolute row sum.
inline double norm_inf(const RealMatrix& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += std::abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

inline double max_abs(const RealMatrix& m) {
  double best = 0.0;
  for (double v : m.data()) best = std::max(best, std::abs(v));
  return best;
}

inline double trace(const RealMatrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::NotSquare, "trace of a non-square matrix");
  double t = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

/// Symmetric within `rel_tol` of the largest entry magnitude.
inline bool is_symmetric(const RealMatrix& m, double rel_tol = 1e-12) {
  if (!m.is_square()) return false;
  const double scale = std::max(max_abs(m), std::numeric_limits<double>::min());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > rel_tol * scale) return false;
  return true;
}

inline RealMatrix symmetrized(const RealMatrix& m) {
  RealMatrix s = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const double avg = 0.5 * (m(i, j) + m(j, i));
      s(i, j) = avg;
      s(j, i) = avg;
    }
  return s;
}

/// Complex Hermitian matrix stored as a (real part, imaginary part) pair.
class HermitianMatrix {
 public:
  HermitianMatrix(RealMatrix re, RealMatrix im) : re_(std::move(re)), im_(std::move(im)) {
    if (!re_.is_square() || !im_.is_square()) {
      throw Error(ErrorCode::NotSquare, "Hermitian parts must be square");
    }
    if (re_.rows() != im_.rows()) {
      throw Error(ErrorCode::DimensionMismatch, "real and imaginary parts differ in size");
    }
    const double scale =
        std::max({max_abs(re_), max_abs(im_), std::numeric_limits<double>::min()});
    const std::size_t n = re_.rows();
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(im_(i, i)) > 1e-12 * scale) {
        throw Error(ErrorCode::NotHermitian, "imaginary diagonal entry");
      }
      for (std::size_t j = i + 1; j < n; ++j) {
        if (std::abs(re_(i, j) - re_(j, i)) > 1e-12 * scale ||
            std::abs(im_(i, j) + im_(j, i)) > 1e-12 * scale) {
          throw Error(ErrorCode::NotHermitian,
                      "entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
        }
      }
    }
  }

  std::size_t dim() const noexcept { return re_.rows(); }
  const RealMatrix& re() const noexcept { return re_; }
  const RealMatrix& im() const noexcept { return im_; }

  /// Real symmetric embedding [[re, -im], [im, re]] of doubled dimension.
  RealMatrix real_embedding() const {
    const std::size_t n = dim();
    RealMatrix e(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        e(i, j) = re_(i, j);
        e(i + n, j + n) = re_(i, j);
        e(i, j + n) = -im_(i, j);
        e(i + n, j) = im_(i, j);
      }
    return e;
  }

 private:
  RealMatrix re_;
  RealMatrix im_;
};

struct SpectrumResult {
  std::vector<double> eigenvalues;          // ascending
  std::optional<RealMatrix> eigenvectors;   // columns, orthonormal

  double min() const { return eigenvalues.empty() ? 0.0 : eigenvalues.front(); }
  double max() const { return eigenvalues.empty() ? 0.0 : eigenvalues.back(); }
};

enum class Vectors { Compute, Skip };

namespace detail {

inline void sort_spectrum(std::vector<double>& d, std::optional<RealMatrix>& v) {
  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  std::vector<double> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = d[order[i]];
  d = std::move(sorted);
  if (v) {
    RealMatrix vs(n, n);
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t r = 0; r < n; ++r) vs(r, c) = (*v)(r, order[c]);
    v = std::move(vs);
  }
}

}  // namespace detail

/// Cyclic Jacobi eigensolver for real symmetric matrices.
///
/// Rotations sweep the strict upper triangle row by row; the first three
/// sweeps skip entries below a threshold, later sweeps zero any entry that is
/// negligible against both diagonal neighbours. Converges when the
/// off-diagonal mass underflows to exactly zero.
inline SpectrumResult eig_symmetric(const RealMatrix& m, Vectors vectors = Vectors::Compute) {
  if (!m.is_square()) throw Error(ErrorCode::NotSquare, "eig_symmetric requires a square matrix");
  if (!is_symmetric(m, 1e-12)) throw Error(ErrorCode::NotSymmetric, "eig_symmetric input");

  const std::size_t n = m.rows();
  RealMatrix a = symmetrized(m);
  std::optional<RealMatrix> v;
  if (vectors == Vectors::Compute) v = RealMatrix::identity(n);

  std::vector<double> d(n), b(n), z(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i] = b[i] = a(i, i);

  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr int max_sweeps = 100;

  auto rotate = [](RealMatrix& mat, double s, double tau, std::size_t i, std::size_t j,
                   std::size_t k, std::size_t l) {
    const double g = mat(i, j);
    const double h = mat(k, l);
    mat(i, j) = g - s * (h + g * tau);
    mat(k, l) = h + s * (g - h * tau);
  };

  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::abs(a(p, q));
    if (off == 0.0) {
      detail::sort_spectrum(d, v);
      return {std::move(d), std::move(v)};
    }
    const double thresh = sweep < 4 ? 0.2 * off / static_cast<double>(n * n) : 0.0;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        const double g = 100.0 * std::abs(apq);
        if (sweep > 4 && g <= eps * std::abs(d[p]) && g <= eps * std::abs(d[q])) {
          a(p, q) = 0.0;
          continue;
        }
        if (std::abs(apq) <= thresh) continue;

        double h = d[q] - d[p];
        double t;
        if (g <= eps * std::abs(h)) {
          t = apq / h;
        } else {
          const double theta = 0.5 * h / apq;
          t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        h = t * apq;
        z[p] -= h;
        z[q] += h;
        d[p] -= h;
        d[q] += h;
        a(p, q) = 0.0;
        for (std::size_t j = 0; j < p; ++j) rotate(a, s, tau, j, p, j, q);
        for (std::size_t j = p + 1; j < q; ++j) rotate(a, s, tau, p, j, j, q);
        for (std::size_t j = q + 1; j < n; ++j) rotate(a, s, tau, p, j, q, j);
        if (v) {
          for (std::size_t j = 0; j < n; ++j) rotate(*v, s, tau, j, p, j, q);
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      b[i] += z[i];
      d[i] = b[i];
      z[i] = 0.0;
    }
  }
  throw Error(ErrorCode::NoConvergence,
              "Jacobi did not converge in " + std::to_string(max_sweeps) + " sweeps");
}

/// Eigenvalues of a Hermitian matrix through its real symmetric embedding.
/// The embedding repeats every eigenvalue twice; adjacent sorted pairs are
/// averaged back into one value. Eigenvectors are not returned.
inline SpectrumResult eig_hermitian(const HermitianMatrix& h) {
  const auto doubled = eig_symmetric(h.real_embedding(), Vectors::Skip);
  const std::size_t n = h.dim();
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) {
    vals[i] = 0.5 * (doubled.eigenvalues[2 * i] + doubled.eigenvalues[2 * i + 1]);
  }
  return {std::move(vals), std::nullopt};
}

inline constexpr double kDefaultPsdTol = 1e-10;

/// True iff the smallest eigenvalue is >= -tol * max(1, scale).
inline bool is_psd(const SpectrumResult& s, double scale, double tol = kDefaultPsdTol) {
  if (s.eigenvalues.empty()) return true;
  return s.min() >= -tol * std::max(1.0, std::abs(scale));
}

inline RealMatrix sqrt_spd(const RealMatrix& m) {
  const auto spec = eig_symmetric(m, Vectors::Compute);
  const double top = std::max(spec.max(), 0.0);
  if (spec.min() <= 1e-14 * std::max(1.0, top)) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "sqrt_spd: smallest eigenvalue " + std::to_string(spec.min()));
  }
  const std::size_t n = m.rows();
  const RealMatrix& v = *spec.eigenvectors;
  RealMatrix r(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double root = std::sqrt(spec.eigenvalues[k]);
    for (std::size_t i = 0; i < n; ++i) {
      const double vik = v(i, k) * root;
      if (vik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += vik * v(j, k);
    }
  }
  return symmetrized(r);
}

/// Lower-triangular Cholesky factor L with m = L Lᵀ.
inline RealMatrix cholesky(const RealMatrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::NotSquare, "cholesky requires a square matrix");
  const std::size_t n = m.rows();
  RealMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = m(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0)) {
      throw Error(ErrorCode::NotPositiveDefinite,
                  "cholesky: non-positive pivot at " + std::to_string(j));
    }
    l(j, j) = std::sqrt(diag);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

/// Solves L Lᵀ x = b given the Cholesky factor L.
inline std::vector<double> cholesky_solve(const RealMatrix& l, std::span<const double> b) {
  const std::size_t n = l.rows();
  if (b.size() != n) throw Error(ErrorCode::DimensionMismatch, "cholesky_solve rhs");
  std::vector<double> y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) y[i] -= l(i, k) * y[k];
    y[i] /= l(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) y[i] -= l(k, i) * y[k];
    y[i] /= l(i, i);
  }
  return y;
}

/// Determinant by LU factorization with partial pivoting.
inline double det(const RealMatrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::NotSquare, "det requires a square matrix");
  const std::size_t n = m.rows();
  RealMatrix a = m;
  double result = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (a(pivot, col) == 0.0) return 0.0;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
      result = -result;
    }
    const double p = a(col, col);
    result *= p;
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / p;
      if (f == 0.0) continue;
      for (std::size_t j = col + 1; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return result;
}

}  // namespace hbarcheck
