#include "amhd/dynamics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "amhd/errors.hpp"
#include "amhd/spectral_ops.hpp"

namespace amhd {

namespace {
constexpr double kSolenoidalTolerance = 1e-8;

double abs_pow(double k, double p) { return p == 0.0 ? 1.0 : std::pow(std::abs(k), p); }

// i k with the Nyquist plane of each axis zeroed (odd-order derivative).
std::array<double, 3> derivative_wavevector(const Grid& g, int i1, int i2, int i3) {
  Wavevector k = wavevector_at(g, i1, i2, i3);
  if (g.is_nyquist(Axis::x1, i1)) k[0] = 0.0;
  if (g.is_nyquist(Axis::x2, i2)) k[1] = 0.0;
  if (g.is_nyquist(Axis::x3, i3)) k[2] = 0.0;
  return k;
}

void require_solenoidal(const VectorField& v, const char* name) {
  const double r = divergence_residual(v);
  if (r > kSolenoidalTolerance) {
    throw InvalidParameter(std::string(name) + " is not solenoidal (divergence residual " + std::to_string(r) + ")");
  }
}

}  // namespace

namespace detail {

/// Scratch buffers and transforms for the non-dissipative right-hand side.
class RhsWorkspace {
 public:
  explicit RhsWorkspace(const Grid& grid) : grid_(grid) {}

  /// Writes the unprojected tendencies into out; returns max |u| in physical space
  /// (0 when the nonlinear terms are off).
  double evaluate(const VectorField& u, const VectorField& b, const RhsOptions& options, Tendency& out) {
    out.du.set_zero();
    out.db.set_zero();
    double max_u = 0.0;
    if (options.nonlinear) {
      max_u = options.form == NonlinearForm::kFlux ? flux_terms(u, b, out) : convective_terms(u, b, out);
    }
    if (options.coupling) add_coupling(u, b, out);
    return max_u;
  }

 private:
  void ensure_buffers(std::size_t n_real, std::size_t n_spec) {
    while (real_.size() < n_real) real_.emplace_back(grid_);
    while (spec_.size() < n_spec) spec_.emplace_back(grid_);
  }

  void to_physical(const VectorField& v, int offset) {
    parallel_for(3, [&](int c) { v[c].to_physical(real_[std::size_t(offset + c)]); });
  }

  double max_abs_u() const {
    const std::size_t n = grid_.physical_size();
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = real_[0].data()[i] * real_[0].data()[i] + real_[1].data()[i] * real_[1].data()[i] +
                       real_[2].data()[i] * real_[2].data()[i];
      m = std::max(m, s);
    }
    return std::sqrt(m);
  }

  // Forward-transforms products_[first, first + count) into spec_ and applies the 2/3 rule.
  void forward_products(int first, int count) {
    const double scale = 1.0 / double(grid_.physical_size());
    parallel_for(count, [&](int c) {
      SpectralScalar& s = spec_[std::size_t(c)];
      FftPlans::for_grid(grid_).forward(real_[std::size_t(first + c)].data(), s.data());
      s *= scale;
      dealias_in_place(s);
    });
  }

  double flux_terms(const VectorField& u, const VectorField& b, Tendency& out) {
    // real_: 0-2 u, 3-5 b, 6-11 T_ij = b_i b_j - u_i u_j (11,12,13,22,23,33), 12-14 M_12, M_13, M_23
    ensure_buffers(15, 9);
    to_physical(u, 0);
    to_physical(b, 3);
    const double max_u = max_abs_u();
    const std::size_t n = grid_.physical_size();
    double* p[15];
    for (int i = 0; i < 15; ++i) p[i] = real_[std::size_t(i)].data();
    parallel_for(grid_.n1, [&](int i1) {
      const std::size_t begin = std::size_t(i1) * grid_.n2 * grid_.n3;
      const std::size_t end = begin + std::size_t(grid_.n2) * grid_.n3;
      for (std::size_t x = begin; x < end && x < n; ++x) {
        const double u1 = p[0][x], u2 = p[1][x], u3 = p[2][x];
        const double b1 = p[3][x], b2 = p[4][x], b3 = p[5][x];
        p[6][x] = b1 * b1 - u1 * u1;
        p[7][x] = b1 * b2 - u1 * u2;
        p[8][x] = b1 * b3 - u1 * u3;
        p[9][x] = b2 * b2 - u2 * u2;
        p[10][x] = b2 * b3 - u2 * u3;
        p[11][x] = b3 * b3 - u3 * u3;
        // M_ij = b_j u_i - u_j b_i
        p[12][x] = b2 * u1 - u2 * b1;
        p[13][x] = b3 * u1 - u3 * b1;
        p[14][x] = b3 * u2 - u3 * b2;
      }
    });
    forward_products(6, 9);
    const Complex* t11 = spec_[0].data();
    const Complex* t12 = spec_[1].data();
    const Complex* t13 = spec_[2].data();
    const Complex* t22 = spec_[3].data();
    const Complex* t23 = spec_[4].data();
    const Complex* t33 = spec_[5].data();
    const Complex* m12 = spec_[6].data();
    const Complex* m13 = spec_[7].data();
    const Complex* m23 = spec_[8].data();
    Complex* du[3] = {out.du[0].data(), out.du[1].data(), out.du[2].data()};
    Complex* db[3] = {out.db[0].data(), out.db[1].data(), out.db[2].data()};
    const Complex I(0.0, 1.0);
    for_each_mode(grid_, [&](int i1, int i2, int i3, std::size_t idx) {
      const auto k = derivative_wavevector(grid_, i1, i2, i3);
      const Complex ik1 = I * k[0], ik2 = I * k[1], ik3 = I * k[2];
      du[0][idx] += ik1 * t11[idx] + ik2 * t12[idx] + ik3 * t13[idx];
      du[1][idx] += ik1 * t12[idx] + ik2 * t22[idx] + ik3 * t23[idx];
      du[2][idx] += ik1 * t13[idx] + ik2 * t23[idx] + ik3 * t33[idx];
      db[0][idx] += ik2 * m12[idx] + ik3 * m13[idx];
      db[1][idx] += -ik1 * m12[idx] + ik3 * m23[idx];
      db[2][idx] += -ik1 * m13[idx] - ik2 * m23[idx];
    });
    return max_u;
  }

  double convective_terms(const VectorField& u, const VectorField& b, Tendency& out) {
    // real_: 0-2 u, 3-5 b, 6-14 d_j u_i (6 + 3i + j), 15-23 d_j b_i, 24-29 products
    ensure_buffers(30, 6);
    to_physical(u, 0);
    to_physical(b, 3);
    const double max_u = max_abs_u();
    parallel_for(18, [&](int n) {
      const VectorField& v = n < 9 ? u : b;
      const int i = (n % 9) / 3;
      const int j = n % 3;
      partial_derivative(v[i], static_cast<Axis>(j), 1).to_physical(real_[std::size_t(6 + n)]);
    });
    double* p[30];
    for (int i = 0; i < 30; ++i) p[i] = real_[std::size_t(i)].data();
    const std::size_t n = grid_.physical_size();
    parallel_for(grid_.n1, [&](int i1) {
      const std::size_t begin = std::size_t(i1) * grid_.n2 * grid_.n3;
      const std::size_t end = std::min(n, begin + std::size_t(grid_.n2) * grid_.n3);
      for (std::size_t x = begin; x < end; ++x) {
        for (int i = 0; i < 3; ++i) {
          double nu = 0.0, nb = 0.0;
          for (int j = 0; j < 3; ++j) {
            const double uj = p[j][x], bj = p[3 + j][x];
            const double dui = p[6 + 3 * i + j][x], dbi = p[15 + 3 * i + j][x];
            nu += -uj * dui + bj * dbi;
            nb += -uj * dbi + bj * dui;
          }
          p[24 + i][x] = nu;
          p[27 + i][x] = nb;
        }
      }
    });
    forward_products(24, 6);
    for (int i = 0; i < 3; ++i) {
      out.du[i] += spec_[std::size_t(i)];
      out.db[i] += spec_[std::size_t(3 + i)];
    }
    return max_u;
  }

  void add_coupling(const VectorField& u, const VectorField& b, Tendency& out) {
    const Complex* uc[3] = {u[0].data(), u[1].data(), u[2].data()};
    const Complex* bc[3] = {b[0].data(), b[1].data(), b[2].data()};
    Complex* du[3] = {out.du[0].data(), out.du[1].data(), out.du[2].data()};
    Complex* db[3] = {out.db[0].data(), out.db[1].data(), out.db[2].data()};
    for_each_mode(grid_, [&](int i1, int i2, int i3, std::size_t idx) {
      const Complex ik3(0.0, derivative_wavevector(grid_, i1, i2, i3)[2]);
      for (int c = 0; c < 3; ++c) {
        du[c][idx] += ik3 * bc[c][idx];
        db[c][idx] += ik3 * uc[c][idx];
      }
    });
  }

  Grid grid_;
  std::vector<RealField> real_;
  std::vector<SpectralScalar> spec_;
};

}  // namespace detail

using detail::RhsWorkspace;

void DissipationSpec::validate() const {
  auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!finite_nonneg(nu1) || !finite_nonneg(nu2) || !finite_nonneg(nu3) || !finite_nonneg(mu)) {
    throw InvalidParameter("viscosities and magnetic diffusivity must be finite and >= 0");
  }
  if (sigma != 0 && sigma != 1) throw InvalidParameter("sigma must be 0 or 1");
  if (!std::isfinite(alpha) || !std::isfinite(beta) || alpha < 0.0 || beta < 0.0) {
    throw InvalidParameter("alpha and beta must be finite and >= 0");
  }
  const bool in_range = alpha > 0.5 && alpha <= 1.0 && beta > 0.5 && beta <= 1.0;
  if (!in_range && !experimental_override) {
    throw InvalidParameter("alpha and beta must lie in (1/2, 1] unless experimental_override is set");
  }
}

DissipationSpec DissipationSpec::vanishing_vertical(double nu, double alpha, double beta) {
  DissipationSpec s;
  s.alpha = alpha;
  s.beta = beta;
  s.nu1 = s.nu2 = s.mu = 1.0;
  s.nu3 = nu;
  s.sigma = nu > 0.0 ? 1 : 0;
  return s;
}

double velocity_dissipation_symbol(const DissipationSpec& spec, const Wavevector& k) {
  const double p = 2.0 * spec.alpha;
  double d = spec.nu1 * abs_pow(k[0], p) + spec.nu2 * abs_pow(k[1], p);
  if (spec.sigma != 0) d += spec.nu3 * abs_pow(k[2], p);
  return d;
}

double magnetic_dissipation_symbol(const DissipationSpec& spec, Axis component, const Wavevector& k) {
  const double p = 2.0 * spec.beta;
  const auto [j, l] = other_axes(component);
  return spec.mu * (abs_pow(k[std::size_t(index_of(j))], p) + abs_pow(k[std::size_t(index_of(l))], p));
}

Tendency nonlinear_rhs(const MhdState& state, const RhsOptions& options) {
  require_solenoidal(state.u, "u");
  require_solenoidal(state.b, "b");
  const Grid& g = state.grid();
  Tendency out{VectorField(g), VectorField(g)};
  RhsWorkspace eval(g);
  eval.evaluate(state.u, state.b, options, out);
  leray_project_in_place(out.du);
  leray_project_in_place(out.db);
  return out;
}

SpectralScalar recover_pressure(const MhdState& state, const DissipationSpec& spec, NonlinearForm form) {
  const Grid& g = state.grid();
  Tendency f{VectorField(g), VectorField(g)};
  RhsWorkspace eval(g);
  eval.evaluate(state.u, state.b, RhsOptions{true, true, form}, f);
  // F also carries -D_u u; it is solenoidal and drops out of k.F, but is kept
  // so the relation holds for the full velocity right-hand side.
  SpectralScalar p(g);
  Complex* pc = p.data();
  const Complex* fc[3] = {f.du[0].data(), f.du[1].data(), f.du[2].data()};
  const Complex* uc[3] = {state.u[0].data(), state.u[1].data(), state.u[2].data()};
  for_each_mode(g, [&](int i1, int i2, int i3, std::size_t idx) {
    const Wavevector k = wavevector_at(g, i1, i2, i3);
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (k2 == 0.0) {
      pc[idx] = 0.0;
      return;
    }
    const double d = velocity_dissipation_symbol(spec, k);
    Complex kf = 0.0;
    for (int a = 0; a < 3; ++a) kf += k[std::size_t(a)] * (fc[a][idx] - d * uc[a][idx]);
    pc[idx] = Complex(0.0, -1.0) * kf / k2;
  });
  return p;
}

IfRk4Stepper::IfRk4Stepper(const Grid& grid, const DissipationSpec& spec, double dt, RhsOptions options)
    : grid_(grid), spec_(spec), dt_(dt), options_(options) {
  grid_.validate();
  spec_.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParameter("dt must be positive");
  const std::size_t n = grid_.spectral_size();
  du_.resize(n);
  db_.resize(n);
  eu_half_.resize(n);
  eb_half_.resize(n);
  const double h = 0.5 * dt;
  for_each_mode(grid_, [&](int i1, int i2, int i3, std::size_t idx) {
    const Wavevector k = wavevector_at(grid_, i1, i2, i3);
    const double d_u = velocity_dissipation_symbol(spec_, k);
    const std::array<double, 3> d_b = {magnetic_dissipation_symbol(spec_, Axis::x1, k),
                                       magnetic_dissipation_symbol(spec_, Axis::x2, k),
                                       magnetic_dissipation_symbol(spec_, Axis::x3, k)};
    du_[idx] = d_u;
    db_[idx] = d_b;
    eu_half_[idx] = std::exp(-h * d_u);

    const double kk = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (kk == 0.0) {
      eb_half_[idx] = {1, 1, 1, 0, 0, 0};
      return;
    }
    // Orthonormal basis (e1, e2) of the plane orthogonal to k.
    const double kn = std::sqrt(kk);
    const std::array<double, 3> kh = {k[0] / kn, k[1] / kn, k[2] / kn};
    int least = 0;
    for (int a = 1; a < 3; ++a)
      if (std::abs(kh[std::size_t(a)]) < std::abs(kh[std::size_t(least)])) least = a;
    std::array<double, 3> ref{0, 0, 0};
    ref[std::size_t(least)] = 1.0;
    std::array<double, 3> e1 = {kh[1] * ref[2] - kh[2] * ref[1], kh[2] * ref[0] - kh[0] * ref[2],
                                kh[0] * ref[1] - kh[1] * ref[0]};
    const double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
    for (auto& x : e1) x /= n1;
    const std::array<double, 3> e2 = {kh[1] * e1[2] - kh[2] * e1[1], kh[2] * e1[0] - kh[0] * e1[2],
                                      kh[0] * e1[1] - kh[1] * e1[0]};
    // A = E^T D_b E restricted to the plane (2x2 symmetric).
    double a11 = 0, a22 = 0, a12 = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      a11 += d_b[i] * e1[i] * e1[i];
      a22 += d_b[i] * e2[i] * e2[i];
      a12 += d_b[i] * e1[i] * e2[i];
    }
    // exp(-hA) = e^{-hm} [cosh(hq) I - sinh(hq)/q (A - m I)]
    const double m = 0.5 * (a11 + a22);
    const double q = std::sqrt(0.25 * (a11 - a22) * (a11 - a22) + a12 * a12);
    const double hq = h * q;
    const double ch = std::cosh(hq);
    const double sh_q = hq < 1e-8 ? h * (1.0 + hq * hq / 6.0) : std::sinh(hq) / q;
    const double em = std::exp(-h * m);
    const double x11 = em * (ch - sh_q * (a11 - m));
    const double x22 = em * (ch - sh_q * (a22 - m));
    const double x12 = -em * sh_q * a12;
    // Lift to 3x3: M = sum_ab X_ab e_a e_b^T
    auto entry = [&](std::size_t r, std::size_t c) {
      return x11 * e1[r] * e1[c] + x22 * e2[r] * e2[c] + x12 * (e1[r] * e2[c] + e2[r] * e1[c]);
    };
    eb_half_[idx] = {entry(0, 0), entry(1, 1), entry(2, 2), entry(0, 1), entry(0, 2), entry(1, 2)};
  });
  const double s = grid_.wavenumber_scale();
  const double c1 = grid_.dealias_cutoff(Axis::x1), c2 = grid_.dealias_cutoff(Axis::x2),
               c3 = grid_.dealias_cutoff(Axis::x3);
  kmax_ = s * std::sqrt(c1 * c1 + c2 * c2 + c3 * c3);
  workspace_ = std::make_shared<RhsWorkspace>(grid_);
}

void IfRk4Stepper::apply_half_factor(VectorField& u, VectorField& b) const {
  Complex* uc[3] = {u[0].data(), u[1].data(), u[2].data()};
  Complex* bc[3] = {b[0].data(), b[1].data(), b[2].data()};
  for_each_mode(grid_, [&](int, int, int, std::size_t idx) {
    const double e = eu_half_[idx];
    uc[0][idx] *= e;
    uc[1][idx] *= e;
    uc[2][idx] *= e;
    const auto& m = eb_half_[idx];
    const Complex x = bc[0][idx], y = bc[1][idx], z = bc[2][idx];
    bc[0][idx] = m[0] * x + m[3] * y + m[4] * z;
    bc[1][idx] = m[3] * x + m[1] * y + m[5] * z;
    bc[2][idx] = m[4] * x + m[5] * y + m[2] * z;
  });
}

double IfRk4Stepper::l2_dissipation_rate(const MhdState& state) const {
  const Complex* uc[3] = {state.u[0].data(), state.u[1].data(), state.u[2].data()};
  const Complex* bc[3] = {state.b[0].data(), state.b[1].data(), state.b[2].data()};
  const double sum = sum_over_spectrum(grid_, [&](int, int, int, std::size_t idx) {
    const auto& d = db_[idx];
    return du_[idx] * (std::norm(uc[0][idx]) + std::norm(uc[1][idx]) + std::norm(uc[2][idx])) +
           d[0] * std::norm(bc[0][idx]) + d[1] * std::norm(bc[1][idx]) + d[2] * std::norm(bc[2][idx]);
  });
  return grid_.volume() * sum;
}

StepInfo IfRk4Stepper::step(MhdState& state) const {
  if (!(state.grid() == grid_)) throw GridMismatch();
  RhsWorkspace& ws = *workspace_;
  const double dt = dt_;
  const double amplitude = std::max(state.u.max_abs(), state.b.max_abs());
  StepInfo info;

  auto rhs = [&](const VectorField& u, const VectorField& b, Tendency& out) {
    const double max_u = ws.evaluate(u, b, options_, out);
    leray_project_in_place(out.du);
    leray_project_in_place(out.db);
    return max_u;
  };

  Tendency k1{VectorField(grid_), VectorField(grid_)};
  Tendency k2 = k1;
  Tendency k3 = k1;
  MhdState stage(grid_);

  // Stage 1 at y_n.
  const double d1 = l2_dissipation_rate(state);
  info.cfl = dt * rhs(state.u, state.b, k1) * kmax_;

  // Stage 2: y_a = E_h (y_n + dt/2 k1)
  stage.u = state.u;
  stage.b = state.b;
  stage.u.axpy(0.5 * dt, k1.du);
  stage.b.axpy(0.5 * dt, k1.db);
  apply_half_factor(stage.u, stage.b);
  const double d2 = l2_dissipation_rate(stage);
  rhs(stage.u, stage.b, k2);

  // acc = y_n + dt/6 k1; k1 is free afterwards.
  MhdState acc = state;
  acc.u.axpy(dt / 6.0, k1.du);
  acc.b.axpy(dt / 6.0, k1.db);

  // Stage 3: y_b = E_h y_n + dt/2 k2
  MhdState half = state;
  apply_half_factor(half.u, half.b);
  stage.u = half.u;
  stage.b = half.b;
  stage.u.axpy(0.5 * dt, k2.du);
  stage.b.axpy(0.5 * dt, k2.db);
  const double d3 = l2_dissipation_rate(stage);
  rhs(stage.u, stage.b, k3);

  // Stage 4: y_c = E_h (E_h y_n + dt k3)
  stage.u = half.u;
  stage.b = half.b;
  stage.u.axpy(dt, k3.du);
  stage.b.axpy(dt, k3.db);
  apply_half_factor(stage.u, stage.b);
  const double d4 = l2_dissipation_rate(stage);
  Tendency& k4 = k1;
  rhs(stage.u, stage.b, k4);

  // y_{n+1} = E_h (E_h (y_n + dt/6 k1) + dt/3 (k2 + k3)) + dt/6 k4
  apply_half_factor(acc.u, acc.b);
  acc.u.axpy(dt / 3.0, k2.du);
  acc.u.axpy(dt / 3.0, k3.du);
  acc.b.axpy(dt / 3.0, k2.db);
  acc.b.axpy(dt / 3.0, k3.db);
  apply_half_factor(acc.u, acc.b);
  acc.u.axpy(dt / 6.0, k4.du);
  acc.b.axpy(dt / 6.0, k4.db);

  if (!acc.u.all_finite() || !acc.b.all_finite()) throw BlowUpError(state.t, amplitude);

  state.u = std::move(acc.u);
  state.b = std::move(acc.b);
  state.t += dt;
  info.l2_dissipation = dt / 6.0 * (d1 + 2.0 * d2 + 2.0 * d3 + d4);
  return info;
}

MhdState step_ifrk4(const MhdState& state, const DissipationSpec& spec, double dt, RhsOptions options) {
  IfRk4Stepper stepper(state.grid(), spec, dt, options);
  MhdState next = state;
  stepper.step(next);
  return next;
}

ModeAmplitudes linear_mode_oracle(const DissipationSpec& spec, const Wavevector& k, const ModeAmplitudes& init,
                                  double t) {
  using Mat6 = Eigen::Matrix<Complex, 6, 6>;
  using Vec6 = Eigen::Matrix<Complex, 6, 1>;
  const double kk = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
  if (kk == 0.0) throw InvalidParameter("linear_mode_oracle: k = 0 has no dynamics");
  if (!(t >= 0.0)) throw InvalidParameter("linear_mode_oracle: t must be >= 0");
  const double kn = std::sqrt(kk);
  for (int f = 0; f < 2; ++f) {
    Complex kv = 0.0;
    double mag = 0.0;
    for (std::size_t a = 0; a < 3; ++a) {
      kv += k[a] * init[std::size_t(3 * f) + a];
      mag += std::norm(init[std::size_t(3 * f) + a]);
    }
    if (std::abs(kv) > 1e-10 * kn * std::max(1.0, std::sqrt(mag))) {
      throw InvalidParameter("linear_mode_oracle: initial amplitudes are not solenoidal");
    }
  }
  Vec6 y;
  for (int i = 0; i < 6; ++i) y(i) = init[std::size_t(i)];
  if (t == 0.0) return init;

  Eigen::Matrix3d proj = Eigen::Matrix3d::Identity();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) proj(r, c) -= k[std::size_t(r)] * k[std::size_t(c)] / kk;
  Eigen::Matrix3d db = Eigen::Matrix3d::Zero();
  for (int c = 0; c < 3; ++c) db(c, c) = magnetic_dissipation_symbol(spec, static_cast<Axis>(c), k);
  const double du = velocity_dissipation_symbol(spec, k);

  Mat6 a = Mat6::Zero();
  const Complex ik3(0.0, k[2]);
  a.block<3, 3>(0, 0) = (-du * proj).cast<Complex>();
  a.block<3, 3>(0, 3) = ik3 * proj.cast<Complex>();
  a.block<3, 3>(3, 0) = ik3 * proj.cast<Complex>();
  a.block<3, 3>(3, 3) = (-(proj * db * proj)).cast<Complex>();
  a *= t;

  // Scaling and squaring with a Taylor series: ||A / 2^s||_1 <= 1/2.
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 0.5) squarings = int(std::ceil(std::log2(norm1 / 0.5)));
  const Mat6 scaled = a / std::ldexp(1.0, squarings);
  Mat6 result = Mat6::Identity();
  Mat6 term = Mat6::Identity();
  for (int n = 1; n < 40; ++n) {
    term = term * scaled / double(n);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;

  const Vec6 out = result * y;
  ModeAmplitudes r;
  for (int i = 0; i < 6; ++i) r[std::size_t(i)] = out(i);
  return r;
}

}  // namespace amhd
