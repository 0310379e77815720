#include <doctest.h>

#include <cmath>

#include "amhd/dynamics.hpp"
#include "amhd/errors.hpp"
#include "amhd/parallel.hpp"
#include "amhd/spectral_ops.hpp"
#include "helpers.hpp"

using namespace amhd;
using namespace testing;

namespace {

MhdState random_state(const Grid& g, std::uint64_t seed, double amp, int band = 4) {
  VectorField u = leray_project(random_vector(g, seed, band));
  VectorField b = leray_project(random_vector(g, seed + 100, band));
  u *= amp / u.max_abs();
  b *= amp / b.max_abs();
  return MhdState(u, b);
}

// Physical-space product a * b, dealiased.
SpectralScalar product(const SpectralScalar& a, const SpectralScalar& b) {
  const RealField ra = a.to_physical();
  const RealField rb = b.to_physical();
  RealField out(a.grid());
  for (std::size_t i = 0; i < out.values().size(); ++i) out.values()[i] = ra.values()[i] * rb.values()[i];
  return dealias(SpectralScalar::from_physical(out));
}

// (v . grad) w, component c.
SpectralScalar advect(const VectorField& v, const VectorField& w, int c) {
  SpectralScalar s(v.grid());
  for (Axis a : {Axis::x1, Axis::x2, Axis::x3}) s += product(v[a], partial_derivative(w[c], a, 1));
  return s;
}

using Vec6 = std::array<Complex, 6>;

// y' = A y for the projected single-mode linear operator, written out directly.
Vec6 linear_rhs(const DissipationSpec& spec, const Wavevector& k, const Vec6& y) {
  const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
  auto project = [&](std::array<Complex, 3> v) {
    const Complex kv = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
    for (int i = 0; i < 3; ++i) v[std::size_t(i)] -= k[std::size_t(i)] * kv / k2;
    return v;
  };
  const double du = velocity_dissipation_symbol(spec, k);
  const std::array<Complex, 3> u{y[0], y[1], y[2]};
  const std::array<Complex, 3> b{y[3], y[4], y[5]};
  const auto pu = project(u);
  const auto pb = project(b);
  std::array<Complex, 3> dbb;
  for (int i = 0; i < 3; ++i) dbb[std::size_t(i)] = magnetic_dissipation_symbol(spec, Axis(i), k) * pb[std::size_t(i)];
  const auto pdbb = project(dbb);
  const Complex ik3(0.0, k[2]);
  Vec6 out;
  for (std::size_t i = 0; i < 3; ++i) {
    out[i] = -du * pu[i] + ik3 * pb[i];
    out[3 + i] = -pdbb[i] + ik3 * pu[i];
  }
  return out;
}

Vec6 fine_rk4(const DissipationSpec& spec, const Wavevector& k, Vec6 y, double t, int steps) {
  const double h = t / steps;
  auto axpy = [](const Vec6& a, double s, const Vec6& b) {
    Vec6 o;
    for (std::size_t i = 0; i < 6; ++i) o[i] = a[i] + s * b[i];
    return o;
  };
  for (int n = 0; n < steps; ++n) {
    const Vec6 k1 = linear_rhs(spec, k, y);
    const Vec6 k2 = linear_rhs(spec, k, axpy(y, h / 2, k1));
    const Vec6 k3 = linear_rhs(spec, k, axpy(y, h / 2, k2));
    const Vec6 k4 = linear_rhs(spec, k, axpy(y, h, k3));
    for (std::size_t i = 0; i < 6; ++i) y[i] += h / 6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return y;
}

Vec6 solenoidal_amplitudes(const Wavevector& k) {
  // Two vectors orthogonal to k, with complex entries.
  const std::array<double, 3> a{k[1], -k[0], 0.0};
  const std::array<double, 3> c{k[0] * k[2], k[1] * k[2], -(k[0] * k[0] + k[1] * k[1])};
  const bool degenerate = k[0] == 0.0 && k[1] == 0.0;
  const std::array<double, 3> e1 = degenerate ? std::array<double, 3>{1, 0, 0} : a;
  const std::array<double, 3> e2 = degenerate ? std::array<double, 3>{0, 1, 0} : c;
  Vec6 y;
  for (std::size_t i = 0; i < 3; ++i) {
    y[i] = Complex(0.3, -0.7) * e1[i] + Complex(0.2, 0.1) * e2[i];
    y[3 + i] = Complex(-0.5, 0.4) * e1[i] + Complex(0.9, 0.3) * e2[i];
  }
  return y;
}

double max_diff(const Vec6& a, const Vec6& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < 6; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double l2_sq(const MhdState& s) { return inner_product(s.u, s.u) + inner_product(s.b, s.b); }

}  // namespace

TEST_CASE("dissipation spec validation") {
  CHECK_NOTHROW(DissipationSpec{}.validate());
  DissipationSpec s;
  s.alpha = 0.5;
  CHECK_THROWS_AS(s.validate(), InvalidParameter);
  s.experimental_override = true;
  CHECK_NOTHROW(s.validate());
  s = DissipationSpec{};
  s.beta = 1.1;
  CHECK_THROWS_AS(s.validate(), InvalidParameter);
  s = DissipationSpec{};
  s.sigma = 2;
  CHECK_THROWS_AS(s.validate(), InvalidParameter);
  s = DissipationSpec{};
  s.nu2 = -1;
  CHECK_THROWS_AS(s.validate(), InvalidParameter);
  const auto v = DissipationSpec::vanishing_vertical(0.03, 0.75, 0.8);
  CHECK(v.nu3 == 0.03);
  CHECK(v.sigma == 1);
  CHECK(DissipationSpec::vanishing_vertical(0.0, 1, 1).sigma == 0);
}

TEST_CASE("dissipation symbols") {
  DissipationSpec s;
  s.sigma = 0;
  CHECK(velocity_dissipation_symbol(s, {0, 0, 5}) == 0.0);
  s.sigma = 1;
  CHECK(velocity_dissipation_symbol(s, {1, 2, 3}) == doctest::Approx(14.0).epsilon(1e-15));
  s.alpha = 0.75;
  CHECK(velocity_dissipation_symbol(s, {2, 0, 0}) == doctest::Approx(2.8284271247461903).epsilon(1e-15));

  DissipationSpec m;
  CHECK(magnetic_dissipation_symbol(m, Axis::x1, {7, 0, 0}) == 0.0);
  CHECK(magnetic_dissipation_symbol(m, Axis::x3, {1, 1, 0}) == doctest::Approx(2.0));
  m.beta = 0.8;
  m.mu = 0.5;
  CHECK(magnetic_dissipation_symbol(m, Axis::x2, {3, 5, 2}) ==
        doctest::Approx(0.5 * (std::pow(3.0, 1.6) + std::pow(2.0, 1.6))).epsilon(1e-14));

  // sigma = 1 dissipates at least as much as sigma = 0, mode by mode.
  DissipationSpec on, off;
  off.sigma = 0;
  on.alpha = off.alpha = 0.7;
  for (int k1 = -3; k1 <= 3; ++k1)
    for (int k3 = -3; k3 <= 3; ++k3) {
      const Wavevector k{double(k1), 1.0, double(k3)};
      CHECK(std::exp(-velocity_dissipation_symbol(on, k)) <= std::exp(-velocity_dissipation_symbol(off, k)));
    }
}

TEST_CASE("nonlinear rhs examples") {
  const Grid g = Grid::cube(16);
  const Tendency zero = nonlinear_rhs(MhdState(g));
  CHECK(zero.du.max_abs() == 0.0);
  CHECK(zero.db.max_abs() == 0.0);

  MhdState s(g);
  s.b[0] = from_function(g, [](double, double, double z) { return std::sin(z); });
  const Tendency t = nonlinear_rhs(s);
  CHECK(physical_distance(t.du[0], from_function(g, [](double, double, double z) { return std::cos(z); })) < 1e-14);
  CHECK(t.du[1].max_abs() < 1e-16);
  CHECK(t.du[2].max_abs() < 1e-16);
  CHECK(t.db.max_abs() < 1e-16);

  MhdState bad(g);
  bad.u[0] = from_function(g, [](double x, double, double) { return std::sin(x); });
  CHECK_THROWS_AS(nonlinear_rhs(bad), InvalidParameter);
}

TEST_CASE("nonlinear rhs matches physical-space products and cancels in L2") {
  const Grid g = Grid::cube(16);
  const MhdState s = random_state(g, 4, 0.3, 5);
  for (NonlinearForm form : {NonlinearForm::kFlux, NonlinearForm::kConvective}) {
    const Tendency t = nonlinear_rhs(s, RhsOptions{true, true, form});
    VectorField fu(g), fb(g);
    for (int c = 0; c < 3; ++c) {
      fu[c] = advect(s.b, s.b, c) - advect(s.u, s.u, c) + partial_derivative(s.b[c], Axis::x3, 1);
      fb[c] = advect(s.b, s.u, c) - advect(s.u, s.b, c) + partial_derivative(s.u[c], Axis::x3, 1);
    }
    leray_project_in_place(fu);
    leray_project_in_place(fb);
    CHECK((t.du - fu).max_abs() < 1e-13 * fu.max_abs());
    CHECK((t.db - fb).max_abs() < 1e-13 * fb.max_abs());
    CHECK(divergence_residual(t.du) < 1e-12);
    CHECK(divergence_residual(t.db) < 1e-12);

    // <du, u> + <db, b> = 0, evaluated by physical quadrature.
    double total = 0.0, scale = 0.0;
    for (int c = 0; c < 3; ++c) {
      total += quadrature(t.du[c], s.u[c]) + quadrature(t.db[c], s.b[c]);
      scale += std::abs(quadrature(t.du[c], s.u[c])) + std::abs(quadrature(t.db[c], s.b[c]));
    }
    CHECK(std::abs(total) <= 1e-10 * scale);
  }
  const Tendency flux = nonlinear_rhs(s, RhsOptions{true, true, NonlinearForm::kFlux});
  const Tendency conv = nonlinear_rhs(s, RhsOptions{true, true, NonlinearForm::kConvective});
  CHECK((flux.du - conv.du).max_abs() < 1e-13 * flux.du.max_abs());
  CHECK((flux.db - conv.db).max_abs() < 1e-13 * flux.db.max_abs());
}

TEST_CASE("pressure recovery") {
  const Grid g = Grid::cube(16);
  const DissipationSpec spec;
  CHECK(recover_pressure(MhdState(g), spec).max_abs() == 0.0);
  MhdState shear(g);
  shear.u[0] = from_function(g, [](double, double y, double) { return std::sin(y); });
  CHECK(recover_pressure(shear, spec).max_abs() < 1e-16);

  const MhdState s = random_state(g, 9, 0.5, 5);
  const SpectralScalar p = recover_pressure(s, spec);
  VectorField f(g);
  for (int c = 0; c < 3; ++c) {
    f[c] = advect(s.b, s.b, c) - advect(s.u, s.u, c) + partial_derivative(s.b[c], Axis::x3, 1);
    f[c] -= partial_derivative(p, Axis(c), 1);
  }
  CHECK(divergence_residual(f) < 1e-10 * std::max(1.0, f.max_abs()));
  CHECK(std::abs(p.coeff(0, 0, 0)) == 0.0);
  // Without the pressure, F is not solenoidal.
  VectorField raw(g);
  for (int c = 0; c < 3; ++c) raw[c] = advect(s.b, s.b, c) - advect(s.u, s.u, c);
  CHECK(divergence_residual(raw) > 1e-6);
}

TEST_CASE("stepping: zero state, exact dissipation, blow-up") {
  const Grid g = Grid::cube(16);
  const DissipationSpec spec;
  MhdState z(g);
  const IfRk4Stepper stepper(g, spec, 0.01);
  stepper.step(z);
  CHECK(z.u.max_abs() == 0.0);
  CHECK(z.b.max_abs() == 0.0);
  CHECK(z.t == doctest::Approx(0.01));

  // Pure dissipation: u decays by exp(-D dt) exactly.
  MhdState s(g);
  const Wavevector k{2, -1, 3};
  const Vec6 amp = solenoidal_amplitudes(k);
  for (int c = 0; c < 3; ++c) {
    s.u[c].set_coeff(2, -1, 3, amp[std::size_t(c)]);
    s.b[c].set_coeff(2, -1, 3, amp[std::size_t(3 + c)]);
  }
  const double dt = 0.05;
  const IfRk4Stepper diss(g, spec, dt, RhsOptions{false, false});
  MhdState t = s;
  diss.step(t);
  const double decay = std::exp(-velocity_dissipation_symbol(spec, k) * dt);
  for (int c = 0; c < 3; ++c) {
    CHECK(std::abs(t.u[c].coeff(2, -1, 3) - decay * amp[std::size_t(c)]) < 1e-15);
  }
  // Magnetic part: the exact projected propagator, compared with the oracle (k3 = 0, no coupling).
  MhdState m(g);
  const Wavevector kh{1, 2, 0};
  const Vec6 amph = solenoidal_amplitudes(kh);
  for (int c = 0; c < 3; ++c) m.b[c].set_coeff(1, 2, 0, amph[std::size_t(3 + c)]);
  diss.step(m);
  Vec6 init{};
  for (std::size_t c = 0; c < 3; ++c) init[3 + c] = amph[3 + c];
  const ModeAmplitudes exact = linear_mode_oracle(spec, kh, init, dt);
  for (int c = 0; c < 3; ++c) CHECK(std::abs(m.b[c].coeff(1, 2, 0) - exact[std::size_t(3 + c)]) < 1e-14);

  MhdState huge = random_state(g, 2, 1e200);
  CHECK_THROWS_AS(IfRk4Stepper(g, spec, 1e-3).step(huge), BlowUpError);
  try {
    MhdState h2 = random_state(g, 2, 1e200);
    IfRk4Stepper(g, spec, 1e-3).step(h2);
  } catch (const BlowUpError& e) {
    CHECK(e.time() == 0.0);
    CHECK(e.max_amplitude() > 1e199);
  }
  CHECK_THROWS_AS(IfRk4Stepper(g, spec, 0.0), InvalidParameter);
  CHECK_THROWS_AS(IfRk4Stepper(Grid::cube(8), spec, 1e-3).step(z), GridMismatch);
}

TEST_CASE("linearized stepping matches the oracle for k = (1, 0, 1)") {
  const Grid g = Grid::cube(16);
  DissipationSpec spec;
  spec.alpha = 0.8;
  spec.beta = 0.9;
  spec.mu = 0.7;
  const Wavevector k{1, 0, 1};
  const Vec6 amp = solenoidal_amplitudes(k);
  MhdState s(g);
  for (int c = 0; c < 3; ++c) {
    s.u[c].set_coeff(1, 0, 1, amp[std::size_t(c)]);
    s.b[c].set_coeff(1, 0, 1, amp[std::size_t(3 + c)]);
  }
  const IfRk4Stepper stepper(g, spec, 1e-3, RhsOptions{false, true});
  for (int n = 0; n < 1000; ++n) stepper.step(s);
  const ModeAmplitudes exact = linear_mode_oracle(spec, k, amp, 1.0);
  for (int c = 0; c < 3; ++c) {
    CHECK(std::abs(s.u[c].coeff(1, 0, 1) - exact[std::size_t(c)]) < 1e-8);
    CHECK(std::abs(s.b[c].coeff(1, 0, 1) - exact[std::size_t(3 + c)]) < 1e-8);
  }
}

TEST_CASE("linear mode oracle") {
  DissipationSpec spec;
  const Wavevector k{1, 2, 1};
  const Vec6 init = solenoidal_amplitudes(k);
  CHECK(linear_mode_oracle(spec, k, init, 0.0) == init);
  CHECK_THROWS_AS(linear_mode_oracle(spec, {0, 0, 0}, init, 1.0), InvalidParameter);
  Vec6 bad = init;
  bad[0] += 1.0;
  CHECK_THROWS_AS(linear_mode_oracle(spec, k, bad, 1.0), InvalidParameter);

  spec.alpha = 0.75;
  spec.beta = 0.6;
  spec.nu2 = 0.4;
  spec.mu = 1.3;
  CHECK(max_diff(linear_mode_oracle(spec, k, init, 0.5), fine_rk4(spec, k, init, 0.5, 5000)) < 1e-10);

  DissipationSpec still;
  still.nu1 = still.nu2 = still.nu3 = still.mu = 0.0;
  const Wavevector kh{2, 1, 0};
  const Vec6 ih = solenoidal_amplitudes(kh);
  CHECK(max_diff(linear_mode_oracle(still, kh, ih, 3.0), ih) < 1e-13);

  // Skew coupling alone conserves the amplitude norm.
  auto norm = [](const Vec6& y) {
    double s = 0.0;
    for (const auto& c : y) s += std::norm(c);
    return std::sqrt(s);
  };
  const Vec6 rev = linear_mode_oracle(still, k, init, 2.7);
  CHECK(norm(rev) == doctest::Approx(norm(init)).epsilon(1e-12));
  CHECK(max_diff(rev, init) > 1e-3);
}

TEST_CASE("solenoidality and energy identity over steps") {
  const Grid g = Grid::cube(16);
  for (int sigma : {0, 1}) {
    DissipationSpec spec;
    spec.sigma = sigma;
    double residual[3];
    for (int level = 0; level < 3; ++level) {
      const double dt = 1e-3 / (1 << level);
      MhdState s = random_state(g, 5, 0.05);
      const double e0 = l2_sq(s);
      const IfRk4Stepper stepper(g, spec, dt);
      double diss = 0.0;
      for (int n = 0; n < (100 << level); ++n) {
        diss += stepper.step(s).l2_dissipation;
        CHECK(divergence_residual(s.u) <= 1e-10);
        CHECK(divergence_residual(s.b) <= 1e-10);
      }
      residual[level] = std::abs(0.5 * (e0 - l2_sq(s)) - diss) / (0.5 * e0 * 0.1);
    }
    CHECK(residual[0] <= 1e-6);
    CHECK(residual[0] / residual[2] >= 8.0);
  }
}

TEST_CASE("zero velocity and zero magnetic perturbation stay zero") {
  const Grid g = Grid::cube(16);
  MhdState s(g);
  const IfRk4Stepper stepper(g, DissipationSpec{}, 1e-2);
  for (int n = 0; n < 5; ++n) stepper.step(s);
  CHECK(s.u.max_abs() == 0.0);
  CHECK(s.b.max_abs() == 0.0);
}

TEST_CASE("steps are identical across thread counts") {
  const Grid g = Grid::cube(16);
  const MhdState init = random_state(g, 12, 0.2);
  const int saved = thread_count();
  std::vector<MhdState> results;
  for (int threads : {1, 2, 3}) {
    set_thread_count(threads);
    MhdState s = init;
    const IfRk4Stepper stepper(g, DissipationSpec{}, 1e-3);
    for (int n = 0; n < 3; ++n) stepper.step(s);
    results.push_back(s);
  }
  set_thread_count(saved);
  for (std::size_t i = 1; i < results.size(); ++i) {
    CHECK((results[i].u - results[0].u).max_abs() == 0.0);
    CHECK((results[i].b - results[0].b).max_abs() == 0.0);
  }
}

TEST_CASE("step_ifrk4 convenience matches the stepper") {
  const Grid g = Grid::cube(16);
  const MhdState init = random_state(g, 3, 0.1);
  MhdState a = init;
  IfRk4Stepper(g, DissipationSpec{}, 2e-3).step(a);
  const MhdState b = step_ifrk4(init, DissipationSpec{}, 2e-3);
  CHECK((a.u - b.u).max_abs() == 0.0);
  CHECK(b.t == doctest::Approx(2e-3));
}
