#pragma once

#include <array>
#include <memory>
#include <vector>

#include "amhd/field.hpp"

namespace amhd {

namespace detail {
class RhsWorkspace;
}

/// Coefficients of the perturbation system. sigma = 1 keeps the vertical
/// velocity dissipation, sigma = 0 drops it.
struct DissipationSpec {
  double alpha = 1.0;
  double beta = 1.0;
  double nu1 = 1.0;
  double nu2 = 1.0;
  double nu3 = 1.0;
  int sigma = 1;
  double mu = 1.0;
  /// Accept alpha, beta outside (1/2, 1].
  bool experimental_override = false;

  void validate() const;

  /// nu1 = nu2 = mu = 1, nu3 = nu, sigma = 1; nu = 0 gives the sigma = 0 limit system.
  static DissipationSpec vanishing_vertical(double nu, double alpha, double beta);

  friend bool operator==(const DissipationSpec&, const DissipationSpec&) = default;
};

/// nu1 |k1|^{2a} + nu2 |k2|^{2a} + sigma nu3 |k3|^{2a}
double velocity_dissipation_symbol(const DissipationSpec& spec, const Wavevector& k);

/// mu (|k_j|^{2b} + |k_l|^{2b}) for {component, j, l} = {1, 2, 3}.
double magnetic_dissipation_symbol(const DissipationSpec& spec, Axis component, const Wavevector& k);

struct MhdState {
  VectorField u;
  VectorField b;
  double t = 0.0;

  explicit MhdState(const Grid& grid) : u(grid), b(grid) {}
  MhdState(VectorField u_, VectorField b_, double t_ = 0.0) : u(std::move(u_)), b(std::move(b_)), t(t_) {}

  const Grid& grid() const { return u.grid(); }
};

enum class NonlinearForm {
  kFlux,        ///< d_j(u_i u_j) and d_j(b_j u_i - u_j b_i)
  kConvective,  ///< u.grad u, u.grad b, b.grad u from physical-space gradients
};

struct RhsOptions {
  bool nonlinear = true;
  bool coupling = true;
  NonlinearForm form = NonlinearForm::kFlux;
};

struct Tendency {
  VectorField du;
  VectorField db;
};

/// Non-dissipative part of the right-hand side:
///   du = P(-u.grad u + b.grad b + d3 b),  db = P(-u.grad b + b.grad u + d3 u),
/// with 2/3 dealiased pseudo-spectral products. Throws InvalidParameter for
/// non-solenoidal input.
Tendency nonlinear_rhs(const MhdState& state, const RhsOptions& options = {});

/// Pressure p with F - grad p solenoidal, F the velocity right-hand side
/// before projection. Mean mode is zero.
SpectralScalar recover_pressure(const MhdState& state, const DissipationSpec& spec,
                                NonlinearForm form = NonlinearForm::kFlux);

struct StepInfo {
  /// integral over the step of sum_k (D_u |u_k|^2 + b_k^* D_b b_k) * volume,
  /// accumulated with the Runge-Kutta stage weights.
  double l2_dissipation = 0.0;
  /// dt * max|u| * max|k| at the start of the step.
  double cfl = 0.0;
};

/// Integrating-factor (Lawson) RK4. Dissipation is integrated exactly per
/// mode; coupling and nonlinear terms explicitly. The velocity factor is
/// exp(-D_u h); the magnetic factor is exp(-h P D_b P), the exact propagator of
/// the projected magnetic diffusion.
class IfRk4Stepper {
 public:
  IfRk4Stepper(const Grid& grid, const DissipationSpec& spec, double dt, RhsOptions options = {});

  /// Advances state by dt. Throws BlowUpError on non-finite output.
  StepInfo step(MhdState& state) const;

  double dt() const { return dt_; }
  const DissipationSpec& spec() const { return spec_; }
  const RhsOptions& options() const { return options_; }

  /// Instantaneous L2 dissipation rate sum_k (D_u |u|^2 + b^* D_b b) * volume.
  double l2_dissipation_rate(const MhdState& state) const;

 private:
  void apply_half_factor(VectorField& u, VectorField& b) const;

  Grid grid_;
  DissipationSpec spec_;
  double dt_;
  RhsOptions options_;
  std::vector<double> du_;          // D_u per mode
  std::vector<std::array<double, 3>> db_;  // D_b diagonal per mode
  std::vector<double> eu_half_;     // exp(-D_u dt/2)
  std::vector<std::array<double, 6>> eb_half_;  // exp(-dt/2 P D_b P), symmetric: xx yy zz xy xz yz
  double kmax_ = 0.0;
  // Scratch reused across steps; a stepper must not be stepped from two threads at once.
  std::shared_ptr<detail::RhsWorkspace> workspace_;
};

/// One step with a freshly built stepper.
MhdState step_ifrk4(const MhdState& state, const DissipationSpec& spec, double dt, RhsOptions options = {});

using ModeAmplitudes = std::array<Complex, 6>;

/// Exact solution of the linearized single-mode system
///   d/dt (u, b) = (-D_u P u + i k3 P b, -P D_b P b + i k3 P u)
/// by a dense matrix exponential. init must satisfy k.u = k.b = 0.
ModeAmplitudes linear_mode_oracle(const DissipationSpec& spec, const Wavevector& k, const ModeAmplitudes& init,
                                  double t);

}  // namespace amhd
