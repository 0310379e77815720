#pragma once

#include <array>
#include <span>

#include "amhd/fft.hpp"
#include "amhd/grid.hpp"

namespace amhd {

/// Real samples on the physical grid, row-major with x3 fastest.
class RealField {
 public:
  explicit RealField(const Grid& grid);

  const Grid& grid() const { return grid_; }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double& at(int i1, int i2, int i3) { return data_[grid_.physical_index(i1, i2, i3)]; }
  double at(int i1, int i2, int i3) const { return data_[grid_.physical_index(i1, i2, i3)]; }

  /// Coordinate of index i along any axis.
  double coordinate(int i, Axis a) const { return grid_.length * i / grid_.n(a); }

  /// Fills the field with fn(x1, x2, x3).
  template <class Fn>
  void fill(Fn&& fn) {
    for (int i1 = 0; i1 < grid_.n1; ++i1)
      for (int i2 = 0; i2 < grid_.n2; ++i2)
        for (int i3 = 0; i3 < grid_.n3; ++i3)
          at(i1, i2, i3) = fn(coordinate(i1, Axis::x1), coordinate(i2, Axis::x2), coordinate(i3, Axis::x3));
  }

 private:
  Grid grid_;
  AlignedVector<double> data_;
};

/// Fourier coefficients of a real scalar field, normalized so that
/// f(x) = sum_k coeff(k) e^{ik.x}. Only the k3 >= 0 half is stored; the
/// rest follows from Hermitian symmetry coeff(-k) = conj(coeff(k)).
class SpectralScalar {
 public:
  explicit SpectralScalar(const Grid& grid);

  static SpectralScalar from_physical(const RealField& field);
  RealField to_physical() const;
  /// Inverse transform into an existing buffer (avoids an allocation).
  void to_physical(RealField& out) const;

  const Grid& grid() const { return grid_; }
  std::span<Complex> coeffs() { return data_; }
  std::span<const Complex> coeffs() const { return data_; }
  Complex* data() { return data_.data(); }
  const Complex* data() const { return data_.data(); }

  /// Coefficient for integer wavenumbers (k1, k2, k3) of any sign; -n/2
  /// aliases the Nyquist index. Throws InvalidParameter outside [-n/2, n/2].
  Complex coeff(int k1, int k2, int k3) const;
  /// Sets the coefficient of k and, where stored, of -k to its conjugate.
  void set_coeff(int k1, int k2, int k3, Complex value);

  void set_zero();
  SpectralScalar& operator+=(const SpectralScalar& other);
  SpectralScalar& operator-=(const SpectralScalar& other);
  SpectralScalar& operator*=(double scale);
  /// this += a * other
  void axpy(double a, const SpectralScalar& other);

  /// Largest coefficient modulus.
  double max_abs() const;
  bool all_finite() const;

 private:
  Grid grid_;
  AlignedVector<Complex> data_;
};

SpectralScalar operator+(SpectralScalar a, const SpectralScalar& b);
SpectralScalar operator-(SpectralScalar a, const SpectralScalar& b);
SpectralScalar operator*(double s, SpectralScalar a);

/// Three scalar components on one grid (u or b).
class VectorField {
 public:
  explicit VectorField(const Grid& grid);
  VectorField(SpectralScalar c1, SpectralScalar c2, SpectralScalar c3);

  const Grid& grid() const { return components_[0].grid(); }
  SpectralScalar& operator[](int i) { return components_[static_cast<std::size_t>(i)]; }
  const SpectralScalar& operator[](int i) const { return components_[static_cast<std::size_t>(i)]; }
  SpectralScalar& operator[](Axis a) { return (*this)[index_of(a)]; }
  const SpectralScalar& operator[](Axis a) const { return (*this)[index_of(a)]; }

  void set_zero();
  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(double scale);
  void axpy(double a, const VectorField& other);
  double max_abs() const;
  bool all_finite() const;

 private:
  std::array<SpectralScalar, 3> components_;
};

VectorField operator-(VectorField a, const VectorField& b);

/// Wavevector (scaled by 2 pi / length) stored at spectral index (i1, i2, i3).
inline Wavevector wavevector_at(const Grid& g, int i1, int i2, int i3) {
  const double s = g.wavenumber_scale();
  return {s * g.mode_number(Axis::x1, i1), s * g.mode_number(Axis::x2, i2), s * i3};
}

}  // namespace amhd

#include "amhd/parallel.hpp"

namespace amhd {

/// Calls fn(i1, i2, i3, flat_index) for every stored mode; slabs of fixed i1
/// may run concurrently.
template <class Fn>
void for_each_mode(const Grid& g, Fn&& fn) {
  parallel_for(g.n1, [&](int i1) {
    for (int i2 = 0; i2 < g.n2; ++i2)
      for (int i3 = 0; i3 < g.nz_half(); ++i3) fn(i1, i2, i3, g.spectral_index(i1, i2, i3));
  });
}

/// Sum over the full spectrum of fn(i1, i2, i3, flat_index), using the
/// half-spectrum multiplicities. Deterministic for any thread count.
template <class Fn>
double sum_over_spectrum(const Grid& g, Fn&& fn) {
  return ordered_sum(g.n1, [&](int i1) {
    double s = 0.0;
    for (int i2 = 0; i2 < g.n2; ++i2)
      for (int i3 = 0; i3 < g.nz_half(); ++i3)
        s += g.hermitian_weight(i3) * fn(i1, i2, i3, g.spectral_index(i1, i2, i3));
    return s;
  });
}

}  // namespace amhd
