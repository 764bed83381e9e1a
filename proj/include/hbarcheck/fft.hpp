#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>
#include <span>
#include <utility>

#include "hbarcheck/error.hpp"

namespace hbarcheck {

namespace detail {

// FFTW's planner is not re-entrant.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace detail

/// Batch of `howmany` contiguous forward DFTs of length `n`, executed in place
/// on an owned FFTW-aligned buffer.
class BatchFft {
 public:
  BatchFft(std::size_t n, std::size_t howmany) : n_(n), howmany_(howmany) {
    if (n == 0 || howmany == 0) throw Error(ErrorCode::InvalidArgument, "empty FFT batch");
    buffer_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n * howmany));
    if (buffer_ == nullptr) throw Error(ErrorCode::InvalidArgument, "fftw_malloc failed");
    const int len = static_cast<int>(n);
    std::lock_guard lock(detail::fftw_planner_mutex());
    plan_ = fftw_plan_many_dft(1, &len, static_cast<int>(howmany), buffer_, nullptr, 1, len,
                               buffer_, nullptr, 1, len, FFTW_FORWARD, FFTW_ESTIMATE);
    if (plan_ == nullptr) {
      fftw_free(buffer_);
      throw Error(ErrorCode::InvalidArgument, "FFTW could not build a plan");
    }
  }

  BatchFft(const BatchFft&) = delete;
  BatchFft& operator=(const BatchFft&) = delete;

  BatchFft(BatchFft&& other) noexcept
      : n_(other.n_),
        howmany_(other.howmany_),
        buffer_(std::exchange(other.buffer_, nullptr)),
        plan_(std::exchange(other.plan_, nullptr)) {}

  ~BatchFft() {
    if (plan_ != nullptr) {
      std::lock_guard lock(detail::fftw_planner_mutex());
      fftw_destroy_plan(plan_);
    }
    if (buffer_ != nullptr) fftw_free(buffer_);
  }

  /// Row `r` of the buffer; std::complex<double> is layout-compatible with
  /// fftw_complex.
  std::span<std::complex<double>> row(std::size_t r) {
    return {reinterpret_cast<std::complex<double>*>(buffer_ + r * n_), n_};
  }

  void execute() { fftw_execute(plan_); }

  std::size_t length() const noexcept { return n_; }
  std::size_t batch() const noexcept { return howmany_; }

 private:
  std::size_t n_;
  std::size_t howmany_;
  fftw_complex* buffer_ = nullptr;
  fftw_plan plan_ = nullptr;
};

}  // namespace hbarcheck
