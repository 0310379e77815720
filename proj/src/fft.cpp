#include "amhd/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace amhd {

namespace detail {
void* fft_alloc(std::size_t bytes) { return fftw_malloc(bytes == 0 ? 1 : bytes); }
void fft_free(void* p) noexcept { fftw_free(p); }
}  // namespace detail

namespace {
// The FFTW planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct FftPlans::Impl {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

FftPlans::FftPlans(const Grid& grid) : impl_(std::make_unique<Impl>()) {
  AlignedVector<double> real(grid.physical_size());
  AlignedVector<Complex> spec(grid.spectral_size());
  auto* c = reinterpret_cast<fftw_complex*>(spec.data());
  // FFTW_ESTIMATE: the plan does not depend on timing, so rounding is
  // reproducible run to run.
  impl_->r2c = fftw_plan_dft_r2c_3d(grid.n1, grid.n2, grid.n3, real.data(), c, FFTW_ESTIMATE);
  impl_->c2r = fftw_plan_dft_c2r_3d(grid.n1, grid.n2, grid.n3, c, real.data(), FFTW_ESTIMATE);
}

// Only reached during static destruction, which is single-threaded.
FftPlans::~FftPlans() {
  fftw_destroy_plan(impl_->r2c);
  fftw_destroy_plan(impl_->c2r);
}

const FftPlans& FftPlans::for_grid(const Grid& grid) {
  static std::map<std::tuple<int, int, int>, std::unique_ptr<FftPlans>> cache;
  std::lock_guard lock(planner_mutex());
  auto key = std::make_tuple(grid.n1, grid.n2, grid.n3);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::unique_ptr<FftPlans>(new FftPlans(grid))).first;
  }
  return *it->second;
}

void FftPlans::forward(const double* in, Complex* out) const {
  fftw_execute_dft_r2c(impl_->r2c, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

void FftPlans::inverse_destroy(Complex* in, double* out) const {
  fftw_execute_dft_c2r(impl_->c2r, reinterpret_cast<fftw_complex*>(in), out);
}

}  // namespace amhd
