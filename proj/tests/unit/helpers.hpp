#pragma once

#include <cmath>
#include <functional>

#include "amhd/field.hpp"
#include "amhd/inequality_lab.hpp"
#include "amhd/spectral_ops.hpp"

namespace testing {

using amhd::Grid;
using amhd::RealField;
using amhd::SpectralScalar;
using amhd::VectorField;

inline SpectralScalar from_function(const Grid& g, const std::function<double(double, double, double)>& fn) {
  RealField r(g);
  r.fill(fn);
  return SpectralScalar::from_physical(r);
}

/// max |a(x) - b(x)| over the grid.
inline double physical_distance(const SpectralScalar& a, const SpectralScalar& b) {
  const RealField ra = a.to_physical();
  const RealField rb = b.to_physical();
  double m = 0.0;
  for (std::size_t i = 0; i < ra.values().size(); ++i) m = std::max(m, std::abs(ra.values()[i] - rb.values()[i]));
  return m;
}

inline double physical_max(const SpectralScalar& a) {
  double m = 0.0;
  for (double v : a.to_physical().values()) m = std::max(m, std::abs(v));
  return m;
}

inline double coeff_distance(const SpectralScalar& a, const SpectralScalar& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) m = std::max(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return m;
}

inline SpectralScalar random_field(const Grid& g, std::uint64_t seed, int band = 4, double decay = 1.0) {
  return amhd::generate_field(amhd::RandomFieldSpec{g, band, seed, decay});
}

inline VectorField random_vector(const Grid& g, std::uint64_t seed, int band = 4) {
  return VectorField(random_field(g, 3 * seed, band), random_field(g, 3 * seed + 1, band),
                     random_field(g, 3 * seed + 2, band));
}

/// Direct physical-space sum of f(x) g(x) dV.
inline double quadrature(const SpectralScalar& f, const SpectralScalar& g) {
  const RealField a = f.to_physical();
  const RealField b = g.to_physical();
  double s = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) s += a.values()[i] * b.values()[i];
  return s * f.grid().cell_volume();
}

constexpr double kTwoPi = 2.0 * M_PI;
inline const double kBox = kTwoPi * kTwoPi * kTwoPi;

}  // namespace testing
