#pragma once

#include <array>
#include <cstddef>
#include <numbers>

namespace amhd {

enum class Axis { x1 = 0, x2 = 1, x3 = 2 };

/// Converts a 1-based axis number (1, 2, 3) to an Axis.
Axis axis_from_number(int number);

constexpr int index_of(Axis a) { return static_cast<int>(a); }

/// The two axes other than `a`, in increasing order.
std::array<Axis, 2> other_axes(Axis a);

using Wavevector = std::array<double, 3>;

/// Periodic box [0, length)^3 sampled on n1 x n2 x n3 points.
///
/// Spectral data uses the real-to-complex half layout: (i1, i2, i3) with
/// i3 in [0, n3/2]. Integer wavenumbers run over {-n/2+1, ..., n/2}.
struct Grid {
  int n1 = 32;
  int n2 = 32;
  int n3 = 32;
  double length = 2.0 * std::numbers::pi;

  static Grid cube(int n, double length = 2.0 * std::numbers::pi) { return Grid{n, n, n, length}; }

  /// Throws InvalidParameter unless every n is even and >= 8 and length > 0.
  void validate() const;

  int n(Axis a) const;
  int nz_half() const { return n3 / 2 + 1; }
  std::size_t physical_size() const { return std::size_t(n1) * n2 * n3; }
  std::size_t spectral_size() const { return std::size_t(n1) * n2 * nz_half(); }
  std::size_t slab_size() const { return std::size_t(n2) * nz_half(); }

  double wavenumber_scale() const { return 2.0 * std::numbers::pi / length; }
  double volume() const { return length * length * length; }
  double cell_volume() const { return volume() / double(physical_size()); }

  /// Signed integer wavenumber stored at array index i along axis a.
  int mode_number(Axis a, int i) const {
    const int m = n(a);
    return i <= m / 2 ? i : i - m;
  }
  bool is_nyquist(Axis a, int i) const { return i == n(a) / 2; }

  /// Largest |k| retained by the 2/3 rule along axis a.
  int dealias_cutoff(Axis a) const { return n(a) / 3; }

  std::size_t spectral_index(int i1, int i2, int i3) const {
    return (std::size_t(i1) * n2 + i2) * nz_half() + i3;
  }
  std::size_t physical_index(int i1, int i2, int i3) const {
    return (std::size_t(i1) * n2 + i2) * n3 + i3;
  }

  /// Half-spectrum multiplicity: modes with 0 < i3 < n3/2 stand for a
  /// conjugate pair.
  double hermitian_weight(int i3) const { return (i3 == 0 || 2 * i3 == n3) ? 1.0 : 2.0; }

  friend bool operator==(const Grid&, const Grid&) = default;
};

}  // namespace amhd
