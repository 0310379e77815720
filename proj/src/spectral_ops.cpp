#include "amhd/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "amhd/errors.hpp"

namespace amhd {

namespace {
void require_non_negative(double s, const char* what) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidParameter(std::string(what) + " must be finite and >= 0");
}

// |k|^p with the convention 0^0 = 1.
double abs_pow(double k, double p) { return p == 0.0 ? 1.0 : std::pow(std::abs(k), p); }
}  // namespace

SpectralScalar directional_fractional(const SpectralScalar& f, Axis axis, double s) {
  require_non_negative(s, "fractional order");
  SpectralScalar out = f;
  const int a = index_of(axis);
  apply_multiplier(out, [&](const Wavevector& k) { return abs_pow(k[a], s); });
  return out;
}

SpectralScalar fractional_laplacian(const SpectralScalar& f, double beta) {
  require_non_negative(beta, "fractional Laplacian order");
  SpectralScalar out = f;
  apply_multiplier(out, [&](const Wavevector& k) {
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    return beta == 0.0 ? 1.0 : std::pow(k2, beta);
  });
  return out;
}

SpectralScalar partial_derivative(const SpectralScalar& f, Axis axis, int order) {
  if (order < 1) throw InvalidParameter("derivative order must be >= 1");
  SpectralScalar out = f;
  const Grid& g = f.grid();
  const int a = index_of(axis);
  const bool odd = order % 2 != 0;
  // (i k)^order = i^order k^order
  static constexpr Complex kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex phase = kIPowers[order % 4];
  Complex* c = out.data();
  for_each_mode(g, [&](int i1, int i2, int i3, std::size_t idx) {
    const int i = a == 0 ? i1 : (a == 1 ? i2 : i3);
    if (odd && g.is_nyquist(axis, i)) {
      c[idx] = 0.0;
      return;
    }
    const double k = wavevector_at(g, i1, i2, i3)[a];
    c[idx] *= phase * std::pow(k, order);
  });
  return out;
}

void dealias_in_place(SpectralScalar& f) {
  const Grid& g = f.grid();
  const int c1 = g.dealias_cutoff(Axis::x1);
  const int c2 = g.dealias_cutoff(Axis::x2);
  const int c3 = g.dealias_cutoff(Axis::x3);
  Complex* c = f.data();
  for_each_mode(g, [&](int i1, int i2, int i3, std::size_t idx) {
    if (std::abs(g.mode_number(Axis::x1, i1)) > c1 || std::abs(g.mode_number(Axis::x2, i2)) > c2 || i3 > c3) {
      c[idx] = 0.0;
    }
  });
}

SpectralScalar dealias(const SpectralScalar& f) {
  SpectralScalar out = f;
  dealias_in_place(out);
  return out;
}

bool is_dealiased(const SpectralScalar& f) {
  const Grid& g = f.grid();
  const double outside = ordered_max(g.n1, 0.0, [&](int i1) {
    double m = 0.0;
    const bool cut1 = std::abs(g.mode_number(Axis::x1, i1)) > g.dealias_cutoff(Axis::x1);
    for (int i2 = 0; i2 < g.n2; ++i2) {
      const bool cut2 = std::abs(g.mode_number(Axis::x2, i2)) > g.dealias_cutoff(Axis::x2);
      for (int i3 = 0; i3 < g.nz_half(); ++i3) {
        if (cut1 || cut2 || i3 > g.dealias_cutoff(Axis::x3)) m = std::max(m, std::abs(f.data()[g.spectral_index(i1, i2, i3)]));
      }
    }
    return m;
  });
  return outside == 0.0;
}

void leray_project_in_place(VectorField& v) {
  const Grid& g = v.grid();
  Complex* c[3] = {v[0].data(), v[1].data(), v[2].data()};
  for_each_mode(g, [&](int i1, int i2, int i3, std::size_t idx) {
    const Wavevector k = wavevector_at(g, i1, i2, i3);
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (k2 == 0.0) return;
    const Complex kv = k[0] * c[0][idx] + k[1] * c[1][idx] + k[2] * c[2][idx];
    const Complex s = kv / k2;
    for (int a = 0; a < 3; ++a) c[a][idx] -= k[a] * s;
  });
}

VectorField leray_project(const VectorField& v) {
  VectorField out = v;
  leray_project_in_place(out);
  return out;
}

double inner_product(const SpectralScalar& f, const SpectralScalar& g) {
  if (!(f.grid() == g.grid())) throw GridMismatch();
  const Complex* a = f.data();
  const Complex* b = g.data();
  const double sum = sum_over_spectrum(f.grid(), [&](int, int, int, std::size_t idx) {
    return a[idx].real() * b[idx].real() + a[idx].imag() * b[idx].imag();
  });
  return f.grid().volume() * sum;
}

double inner_product(const VectorField& f, const VectorField& g) {
  return inner_product(f[0], g[0]) + inner_product(f[1], g[1]) + inner_product(f[2], g[2]);
}

SpectralScalar divergence(const VectorField& v) {
  SpectralScalar out = partial_derivative(v[0], Axis::x1, 1);
  out += partial_derivative(v[1], Axis::x2, 1);
  out += partial_derivative(v[2], Axis::x3, 1);
  return out;
}

double divergence_residual(const VectorField& v) {
  const Grid& g = v.grid();
  const Complex* c[3] = {v[0].data(), v[1].data(), v[2].data()};
  return ordered_max(g.n1, 0.0, [&](int i1) {
    double m = 0.0;
    for (int i2 = 0; i2 < g.n2; ++i2) {
      for (int i3 = 0; i3 < g.nz_half(); ++i3) {
        const std::size_t idx = g.spectral_index(i1, i2, i3);
        const Wavevector k = wavevector_at(g, i1, i2, i3);
        const Complex kv = k[0] * c[0][idx] + k[1] * c[1][idx] + k[2] * c[2][idx];
        const double mag = std::sqrt(std::norm(c[0][idx]) + std::norm(c[1][idx]) + std::norm(c[2][idx]));
        m = std::max(m, std::abs(kv) / std::max(1.0, mag));
      }
    }
    return m;
  });
}

double hermitian_residual(const SpectralScalar& f) {
  const SpectralScalar back = SpectralScalar::from_physical(f.to_physical());
  double diff = 0.0;
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) diff = std::max(diff, std::abs(back.coeffs()[i] - f.coeffs()[i]));
  const double scale = f.max_abs();
  return scale == 0.0 ? diff : diff / scale;
}

}  // namespace amhd
