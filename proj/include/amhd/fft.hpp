#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <new>
#include <vector>

#include "amhd/grid.hpp"

namespace amhd {

using Complex = std::complex<double>;

namespace detail {
void* fft_alloc(std::size_t bytes);
void fft_free(void* p) noexcept;
}  // namespace detail

/// Allocator returning SIMD-aligned storage suitable for FFTW new-array execution.
template <class T>
struct FftAllocator {
  using value_type = T;
  FftAllocator() = default;
  template <class U>
  FftAllocator(const FftAllocator<U>&) noexcept {}
  T* allocate(std::size_t n) {
    void* p = detail::fft_alloc(n * sizeof(T));
    if (p == nullptr) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { detail::fft_free(p); }
  template <class U>
  bool operator==(const FftAllocator<U>&) const noexcept { return true; }
};

template <class T>
using AlignedVector = std::vector<T, FftAllocator<T>>;

/// Real-to-complex 3D transforms for one grid. Plans are built once per grid
/// shape with a deterministic planner and shared; execution is thread-safe.
class FftPlans {
 public:
  static const FftPlans& for_grid(const Grid& grid);

  ~FftPlans();
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  /// Unnormalized forward transform: out = sum_x in(x) e^{-ik.x}.
  void forward(const double* in, Complex* out) const;
  /// Unnormalized inverse; `in` is destroyed.
  void inverse_destroy(Complex* in, double* out) const;

 private:
  explicit FftPlans(const Grid& grid);
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace amhd
