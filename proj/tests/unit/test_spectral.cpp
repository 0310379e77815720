#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "amhd/errors.hpp"
#include "amhd/snapshot.hpp"
#include "amhd/spectral_ops.hpp"
#include "helpers.hpp"

using namespace amhd;
using namespace testing;

TEST_CASE("grid validation and wavenumbers") {
  CHECK_NOTHROW(Grid::cube(8).validate());
  CHECK_THROWS_AS(Grid::cube(6).validate(), InvalidParameter);
  CHECK_THROWS_AS((Grid{16, 15, 16}).validate(), InvalidParameter);
  CHECK_THROWS_AS((Grid{16, 16, 16, -1.0}).validate(), InvalidParameter);
  const Grid g = Grid::cube(16);
  CHECK(g.mode_number(Axis::x1, 0) == 0);
  CHECK(g.mode_number(Axis::x1, 8) == 8);
  CHECK(g.mode_number(Axis::x1, 9) == -7);
  CHECK(g.mode_number(Axis::x1, 15) == -1);
  CHECK(g.dealias_cutoff(Axis::x2) == 5);
  const Grid half{16, 16, 16, M_PI};
  CHECK(half.wavenumber_scale() == doctest::Approx(2.0));
}

TEST_CASE("coefficient normalization and Hermitian storage") {
  const Grid g = Grid::cube(16);
  const SpectralScalar f = from_function(g, [](double x, double, double) { return std::sin(x); });
  CHECK(std::abs(f.coeff(1, 0, 0) - Complex(0, -0.5)) < 1e-15);
  CHECK(std::abs(f.coeff(-1, 0, 0) - Complex(0, 0.5)) < 1e-15);
  const SpectralScalar h = from_function(g, [](double, double, double z) { return std::cos(3 * z); });
  CHECK(std::abs(h.coeff(0, 0, 3) - 0.5) < 1e-15);
  CHECK(std::abs(h.coeff(0, 0, -3) - 0.5) < 1e-15);
  CHECK_THROWS_AS(f.coeff(20, 0, 0), InvalidParameter);

  SpectralScalar s(g);
  s.set_coeff(2, -3, 0, Complex(1.0, 2.0));
  CHECK(s.coeff(-2, 3, 0) == Complex(1.0, -2.0));
  CHECK(hermitian_residual(s) < 1e-12);
  const RealField r = s.to_physical();
  CHECK(r.at(1, 2, 3) == doctest::Approx(2.0 * (std::cos(2 * r.coordinate(1, Axis::x1) - 3 * r.coordinate(2, Axis::x2)) -
                                                2.0 * std::sin(2 * r.coordinate(1, Axis::x1) - 3 * r.coordinate(2, Axis::x2))))
                             .epsilon(1e-12));
}

TEST_CASE("transform round trip") {
  for (const Grid& g : {Grid::cube(16), Grid{8, 12, 16}, Grid::cube(32)}) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    RealField r(g);
    for (double& v : r.values()) v = nd(rng);
    const RealField back = SpectralScalar::from_physical(r).to_physical();
    double err = 0.0, mag = 0.0;
    for (std::size_t i = 0; i < r.values().size(); ++i) {
      err = std::max(err, std::abs(back.values()[i] - r.values()[i]));
      mag = std::max(mag, std::abs(r.values()[i]));
    }
    CHECK(err / mag < 1e-12);
    const SpectralScalar f = random_field(g, 11, 2);
    CHECK(coeff_distance(SpectralScalar::from_physical(f.to_physical()), f) < 1e-12 * f.max_abs());
  }
}

TEST_CASE("forward transform agrees with a direct DFT sum") {
  const Grid g{8, 8, 8};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ud(-1, 1);
  RealField r(g);
  for (double& v : r.values()) v = ud(rng);
  const SpectralScalar f = SpectralScalar::from_physical(r);
  for (const auto& k : {std::array<int, 3>{1, 2, 3}, {-3, 0, 2}, {0, 0, 0}, {4, -1, 4}, {2, 2, 0}}) {
    Complex direct(0, 0);
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b)
        for (int c = 0; c < 8; ++c) {
          const double phase = -(k[0] * r.coordinate(a, Axis::x1) + k[1] * r.coordinate(b, Axis::x2) +
                                 k[2] * r.coordinate(c, Axis::x3));
          direct += r.at(a, b, c) * std::polar(1.0, phase);
        }
    direct /= double(g.physical_size());
    CHECK(std::abs(f.coeff(k[0], k[1], k[2]) - direct) < 1e-14);
  }
}

TEST_CASE("directional fractional operator") {
  const Grid g = Grid::cube(16);
  const auto s1 = from_function(g, [](double x, double, double) { return std::sin(x); });
  const auto s2 = from_function(g, [](double x, double, double) { return std::sin(2 * x); });
  CHECK(physical_distance(directional_fractional(s1, Axis::x1, 0.75), s1) < 1e-12);
  CHECK(physical_distance(directional_fractional(s2, Axis::x1, 0.75), std::pow(2.0, 0.75) * s2) < 1e-12);
  CHECK(physical_max(directional_fractional(s1, Axis::x2, 0.6)) < 1e-14);
  CHECK(physical_distance(directional_fractional(s1, Axis::x2, 0.0), s1) < 1e-14);
  CHECK_THROWS_AS(directional_fractional(s1, Axis::x1, -0.1), InvalidParameter);

  const SpectralScalar f = random_field(g, 5);
  const SpectralScalar d = directional_fractional(f, Axis::x3, 1.0);
  for (int k3 = 0; k3 <= 4; ++k3) CHECK(std::abs(d.coeff(2, -1, k3) - double(k3) * f.coeff(2, -1, k3)) < 1e-15);
  CHECK(hermitian_residual(directional_fractional(f, Axis::x1, 0.55)) < 1e-12);
}

TEST_CASE("fractional laplacian") {
  const Grid g = Grid::cube(16);
  const auto c = from_function(g, [](double, double, double) { return 3.0; });
  CHECK(physical_max(fractional_laplacian(c, 0.7)) < 1e-14);
  const auto f = from_function(g, [](double x, double y, double) { return std::sin(x) + std::sin(y); });
  CHECK(physical_distance(fractional_laplacian(f, 1.0), f) < 1e-12);
  CHECK_THROWS_AS(fractional_laplacian(f, -1.0), InvalidParameter);

  // Direct mode-by-mode oracle for beta = 0.6.
  const SpectralScalar r = random_field(g, 9, 5);
  const SpectralScalar out = fractional_laplacian(r, 0.6);
  double err = 0.0;
  for (int k1 = -5; k1 <= 5; ++k1)
    for (int k2 = -5; k2 <= 5; ++k2)
      for (int k3 = -5; k3 <= 5; ++k3) {
        const double k2sum = k1 * k1 + k2 * k2 + k3 * k3;
        const Complex expect = (k2sum == 0 ? 0.0 : std::pow(k2sum, 0.6)) * r.coeff(k1, k2, k3);
        err = std::max(err, std::abs(out.coeff(k1, k2, k3) - expect));
      }
  CHECK(err < 1e-12 * out.max_abs());

  // (-Delta)^1 = -sum_i d_i^2
  SpectralScalar lap(g);
  for (Axis a : {Axis::x1, Axis::x2, Axis::x3}) lap -= partial_derivative(r, a, 2);
  CHECK(coeff_distance(lap, fractional_laplacian(r, 1.0)) < 1e-12 * lap.max_abs());
}

TEST_CASE("partial derivatives") {
  const Grid g = Grid::cube(16);
  const auto s1 = from_function(g, [](double x, double, double) { return std::sin(x); });
  const auto mc1 = from_function(g, [](double x, double, double) { return -std::cos(x); });
  CHECK(physical_distance(partial_derivative(s1, Axis::x1, 3), mc1) < 1e-12);
  const auto c2 = from_function(g, [](double, double y, double) { return std::cos(2 * y); });
  const auto ds = from_function(g, [](double, double y, double) { return -2 * std::sin(2 * y); });
  CHECK(physical_distance(partial_derivative(c2, Axis::x2, 1), ds) < 1e-12);
  CHECK(physical_max(partial_derivative(s1, Axis::x3, 1)) < 1e-14);
  CHECK_THROWS_AS(partial_derivative(s1, Axis::x1, 0), InvalidParameter);

  const auto poly = from_function(g, [](double x, double y, double z) { return std::sin(3 * x + y) * std::cos(2 * z); });
  const auto d = from_function(g, [](double x, double y, double z) { return -2 * 3 * std::cos(3 * x + y) * std::sin(2 * z); });
  CHECK(physical_distance(partial_derivative(partial_derivative(poly, Axis::x1, 1), Axis::x3, 1), d) < 1e-11);
  CHECK(hermitian_residual(partial_derivative(random_field(g, 4), Axis::x2, 3)) < 1e-12);
}

TEST_CASE("operators commute") {
  const Grid g = Grid::cube(16);
  const SpectralScalar f = random_field(g, 21, 5);
  const auto a = directional_fractional(fractional_laplacian(f, 0.6), Axis::x2, 0.8);
  const auto b = fractional_laplacian(directional_fractional(f, Axis::x2, 0.8), 0.6);
  CHECK(coeff_distance(a, b) < 1e-13 * a.max_abs());
  const auto c = partial_derivative(directional_fractional(f, Axis::x1, 1.0), Axis::x3, 2);
  const auto d = directional_fractional(partial_derivative(f, Axis::x3, 2), Axis::x1, 1.0);
  CHECK(coeff_distance(c, d) < 1e-13 * c.max_abs());
}

TEST_CASE("dealiasing") {
  const Grid g = Grid::cube(16);
  RealField sq(g);
  sq.fill([](double x, double, double) { return std::sin(x) * std::sin(x); });
  const auto prod = dealias(SpectralScalar::from_physical(sq));
  const auto expect = from_function(g, [](double x, double, double) { return 0.5 * (1 - std::cos(2 * x)); });
  CHECK(physical_distance(prod, expect) < 1e-14);
  CHECK(is_dealiased(prod));

  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  RealField r(g);
  for (double& v : r.values()) v = nd(rng);
  const SpectralScalar full = SpectralScalar::from_physical(r);
  CHECK_FALSE(is_dealiased(full));
  const SpectralScalar cut = dealias(full);
  CHECK(coeff_distance(dealias(cut), cut) == 0.0);
  // Removed energy equals the direct sum over truncated modes.
  double removed = 0.0;
  for (int k1 = -7; k1 <= 8; ++k1)
    for (int k2 = -7; k2 <= 8; ++k2)
      for (int k3 = -7; k3 <= 8; ++k3) {
        if (std::abs(k1) > 5 || std::abs(k2) > 5 || std::abs(k3) > 5) {
          // coeff() folds k3 < 0 through symmetry; a Nyquist index is its own partner.
          removed += std::norm(full.coeff(k1, k2, k3));
        }
      }
  removed *= g.volume();
  const double drop = inner_product(full, full) - inner_product(cut, cut);
  CHECK(drop == doctest::Approx(removed).epsilon(1e-12));
}

TEST_CASE("leray projection") {
  const Grid g = Grid::cube(16);
  const auto phi_x = from_function(g, [](double x, double y, double) { return std::cos(x + y); });
  VectorField grad(phi_x, phi_x, SpectralScalar(g));
  CHECK(leray_project(grad).max_abs() < 1e-15);

  VectorField shear(from_function(g, [](double, double y, double) { return std::sin(y); }), SpectralScalar(g),
                    SpectralScalar(g));
  CHECK(physical_distance(leray_project(shear)[0], shear[0]) < 1e-15);

  const VectorField v = random_vector(g, 3);
  const VectorField p = leray_project(v);
  CHECK(divergence_residual(p) < 1e-14);
  CHECK((leray_project(p) - p).max_abs() < 1e-13 * p.max_abs());
  const VectorField w = leray_project(random_vector(g, 8));
  CHECK(inner_product(p, w) == doctest::Approx(inner_product(v, w)).epsilon(1e-12));

  VectorField mean(g);
  mean[0].set_coeff(0, 0, 0, 2.5);
  CHECK(leray_project(mean)[0].coeff(0, 0, 0) == Complex(2.5, 0.0));
}

TEST_CASE("inner products") {
  const Grid g = Grid::cube(16);
  const auto s = from_function(g, [](double x, double, double) { return std::sin(x); });
  const auto c = from_function(g, [](double x, double, double) { return std::cos(x); });
  CHECK(inner_product(s, s) == doctest::Approx(kBox / 2).epsilon(1e-14));
  CHECK(std::abs(inner_product(s, c)) < 1e-12);
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto f = random_field(g, seed, 5);
    const auto h = random_field(g, seed + 10, 5);
    CHECK(inner_product(f, h) == doctest::Approx(quadrature(f, h)).epsilon(1e-11));
  }
  CHECK_THROWS_AS(inner_product(s, SpectralScalar(Grid::cube(8))), GridMismatch);
}

TEST_CASE("divergence residual metric") {
  const Grid g = Grid::cube(16);
  VectorField v(g);
  v[0].set_coeff(1, 0, 0, Complex(0.0, 2.0));
  CHECK(divergence_residual(v) == doctest::Approx(1.0));
  CHECK(divergence_residual(VectorField(g)) == 0.0);
}

TEST_CASE("snapshot round trip") {
  const Grid g{8, 12, 16};
  const VectorField v = random_vector(g, 4, 2);
  const auto path = std::filesystem::temp_directory_path() / "amhd_unit_snapshot.snap";
  write_snapshot(path, v, 1.25);
  double t = 0.0;
  const VectorField back = read_vector_snapshot(path, &t);
  CHECK(t == 1.25);
  CHECK((back - v).max_abs() < 1e-15 * 1e3 * v.max_abs());
  const Snapshot snap = read_snapshot(path);
  CHECK(snap.grid == g);
  CHECK(snap.components.size() == 3);

  std::ifstream in(path, std::ios::binary);
  char magic[5];
  in.read(magic, 5);
  CHECK(std::string(magic, 5) == "AMHD1");
  unsigned char dims[4];
  in.read(reinterpret_cast<char*>(dims), 4);
  CHECK(dims[0] == 8);
  CHECK(dims[1] == 0);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_snapshot(path), IoError);
}
