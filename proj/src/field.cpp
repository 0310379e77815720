#include "amhd/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "amhd/errors.hpp"

namespace amhd {

BlowUpError::BlowUpError(double time, double max_amplitude)
    : std::runtime_error("non-finite state at t=" + std::to_string(time) +
                         " (max amplitude before failure " + std::to_string(max_amplitude) + ")"),
      time_(time),
      max_amplitude_(max_amplitude) {}

Axis axis_from_number(int number) {
  if (number < 1 || number > 3) throw InvalidParameter("axis must be 1, 2 or 3, got " + std::to_string(number));
  return static_cast<Axis>(number - 1);
}

std::array<Axis, 2> other_axes(Axis a) {
  switch (a) {
    case Axis::x1: return {Axis::x2, Axis::x3};
    case Axis::x2: return {Axis::x1, Axis::x3};
    default: return {Axis::x1, Axis::x2};
  }
}

void Grid::validate() const {
  for (int m : {n1, n2, n3}) {
    if (m < 8 || m % 2 != 0) throw InvalidParameter("grid sizes must be even and >= 8, got " + std::to_string(m));
  }
  if (!(length > 0.0) || !std::isfinite(length)) throw InvalidParameter("box length must be positive");
}

int Grid::n(Axis a) const {
  switch (a) {
    case Axis::x1: return n1;
    case Axis::x2: return n2;
    default: return n3;
  }
}

RealField::RealField(const Grid& grid) : grid_(grid), data_(grid.physical_size(), 0.0) {}

SpectralScalar::SpectralScalar(const Grid& grid) : grid_(grid), data_(grid.spectral_size(), Complex{}) {
  grid_.validate();
}

SpectralScalar SpectralScalar::from_physical(const RealField& field) {
  SpectralScalar out(field.grid());
  FftPlans::for_grid(field.grid()).forward(field.data(), out.data());
  const double scale = 1.0 / double(field.grid().physical_size());
  for (auto& c : out.data_) c *= scale;
  return out;
}

RealField SpectralScalar::to_physical() const {
  RealField out(grid_);
  to_physical(out);
  return out;
}

void SpectralScalar::to_physical(RealField& out) const {
  if (!(out.grid() == grid_)) throw GridMismatch();
  AlignedVector<Complex> scratch(data_);
  FftPlans::for_grid(grid_).inverse_destroy(scratch.data(), out.data());
}

namespace {
int wrap_index(int k, int n, const char* axis) {
  if (k < -n / 2 || k > n / 2) {
    throw InvalidParameter(std::string("wavenumber out of range on axis ") + axis + ": " + std::to_string(k));
  }
  return k >= 0 ? k : k + n;
}
}  // namespace

Complex SpectralScalar::coeff(int k1, int k2, int k3) const {
  if (k3 < 0) return std::conj(coeff(-k1, -k2, -k3));
  const int i1 = wrap_index(k1, grid_.n1, "1");
  const int i2 = wrap_index(k2, grid_.n2, "2");
  if (k3 > grid_.n3 / 2) throw InvalidParameter("wavenumber out of range on axis 3: " + std::to_string(k3));
  return data_[grid_.spectral_index(i1, i2, k3)];
}

void SpectralScalar::set_coeff(int k1, int k2, int k3, Complex value) {
  if (k3 < 0) {
    set_coeff(-k1, -k2, -k3, std::conj(value));
    return;
  }
  if (k3 > grid_.n3 / 2) throw InvalidParameter("wavenumber out of range on axis 3: " + std::to_string(k3));
  const int i1 = wrap_index(k1, grid_.n1, "1");
  const int i2 = wrap_index(k2, grid_.n2, "2");
  data_[grid_.spectral_index(i1, i2, k3)] = value;
  if (k3 == 0 || 2 * k3 == grid_.n3) {
    // The k3 = 0 and Nyquist planes hold both k and -k.
    const int j1 = (grid_.n1 - i1) % grid_.n1;
    const int j2 = (grid_.n2 - i2) % grid_.n2;
    if (j1 == i1 && j2 == i2) {
      data_[grid_.spectral_index(i1, i2, k3)] = Complex(value.real(), 0.0);
    } else {
      data_[grid_.spectral_index(j1, j2, k3)] = std::conj(value);
    }
  }
}

void SpectralScalar::set_zero() { std::fill(data_.begin(), data_.end(), Complex{}); }

SpectralScalar& SpectralScalar::operator+=(const SpectralScalar& other) {
  axpy(1.0, other);
  return *this;
}

SpectralScalar& SpectralScalar::operator-=(const SpectralScalar& other) {
  axpy(-1.0, other);
  return *this;
}

SpectralScalar& SpectralScalar::operator*=(double scale) {
  for (auto& c : data_) c *= scale;
  return *this;
}

void SpectralScalar::axpy(double a, const SpectralScalar& other) {
  if (!(other.grid_ == grid_)) throw GridMismatch();
  const std::size_t n = data_.size();
  for (std::size_t i = 0; i < n; ++i) data_[i] += a * other.data_[i];
}

double SpectralScalar::max_abs() const {
  double m = 0.0;
  for (const auto& c : data_) m = std::max(m, std::abs(c));
  return m;
}

bool SpectralScalar::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

SpectralScalar operator+(SpectralScalar a, const SpectralScalar& b) { return a += b; }
SpectralScalar operator-(SpectralScalar a, const SpectralScalar& b) { return a -= b; }
SpectralScalar operator*(double s, SpectralScalar a) { return a *= s; }

VectorField::VectorField(const Grid& grid)
    : components_{SpectralScalar(grid), SpectralScalar(grid), SpectralScalar(grid)} {}

VectorField::VectorField(SpectralScalar c1, SpectralScalar c2, SpectralScalar c3)
    : components_{std::move(c1), std::move(c2), std::move(c3)} {
  if (!(components_[0].grid() == components_[1].grid()) || !(components_[0].grid() == components_[2].grid())) {
    throw GridMismatch();
  }
}

void VectorField::set_zero() {
  for (auto& c : components_) c.set_zero();
}

VectorField& VectorField::operator+=(const VectorField& other) {
  axpy(1.0, other);
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
  axpy(-1.0, other);
  return *this;
}

VectorField& VectorField::operator*=(double scale) {
  for (auto& c : components_) c *= scale;
  return *this;
}

void VectorField::axpy(double a, const VectorField& other) {
  for (int i = 0; i < 3; ++i) (*this)[i].axpy(a, other[i]);
}

double VectorField::max_abs() const {
  return std::max({components_[0].max_abs(), components_[1].max_abs(), components_[2].max_abs()});
}

bool VectorField::all_finite() const {
  return components_[0].all_finite() && components_[1].all_finite() && components_[2].all_finite();
}

VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }

}  // namespace amhd
