#pragma once

#include "amhd/field.hpp"

namespace amhd {

/// Directional fractional operator: multiplies coefficient k by |k_axis|^s.
SpectralScalar directional_fractional(const SpectralScalar& f, Axis axis, double s);

/// Fractional Laplacian (-Delta)^beta: multiplier |k|^{2 beta}.
SpectralScalar fractional_laplacian(const SpectralScalar& f, double beta);

/// d^order/dx_axis^order: multiplier (i k_axis)^order. Odd orders zero the
/// Nyquist plane of that axis, where i k has no real counterpart.
SpectralScalar partial_derivative(const SpectralScalar& f, Axis axis, int order);

/// 2/3-rule truncation: zeroes every mode with |k_axis| > n_axis / 3.
SpectralScalar dealias(const SpectralScalar& f);
void dealias_in_place(SpectralScalar& f);
bool is_dealiased(const SpectralScalar& f);

/// Orthogonal projection onto divergence-free fields, u <- u - k (k.u)/|k|^2;
/// the mean mode is left unchanged.
VectorField leray_project(const VectorField& v);
void leray_project_in_place(VectorField& v);

/// L2 inner product over the box, via Parseval.
double inner_product(const SpectralScalar& f, const SpectralScalar& g);
double inner_product(const VectorField& f, const VectorField& g);

/// Spectral divergence, and the solenoidality metric
/// max_k |k.v(k)| / max(1, |v(k)|).
SpectralScalar divergence(const VectorField& v);
double divergence_residual(const VectorField& v);

/// Size of the non-Hermitian part left by a round trip through physical space,
/// relative to the largest coefficient.
double hermitian_residual(const SpectralScalar& f);

/// Multiplies each stored mode by fn(k), k the scaled wavevector. fn must
/// be even in k (fn(-k) = conj(fn(k))) for the output to stay real.
template <class Fn>
void apply_multiplier(SpectralScalar& f, Fn&& fn) {
  const Grid& g = f.grid();
  Complex* c = f.data();
  for_each_mode(g, [&](int i1, int i2, int i3, std::size_t idx) { c[idx] *= fn(wavevector_at(g, i1, i2, i3)); });
}

}  // namespace amhd
