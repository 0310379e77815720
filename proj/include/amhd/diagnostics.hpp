#pragma once

#include <filesystem>
#include <fstream>
#include <limits>
#include <vector>

#include "amhd/dynamics.hpp"
#include "amhd/field.hpp"

namespace amhd {

/// Weight of |f_k|^2 in a squared Sobolev norm of integer order m.
enum class SobolevWeight {
  kAxisDerivative,  ///< 1 + sum_i k_i^{2m}, i.e. ||f||^2 + sum_i ||d_i^m f||^2
  kBessel,          ///< (1 + |k|^2)^m
};

double sobolev_weight(const Wavevector& k, int order, SobolevWeight weight = SobolevWeight::kAxisDerivative);

/// Sobolev norm of order 0 (L2), 1 or 3, evaluated in Fourier space.
double h_s_norm(const SpectralScalar& f, int order, SobolevWeight weight = SobolevWeight::kAxisDerivative);
double h_s_norm(const VectorField& v, int order, SobolevWeight weight = SobolevWeight::kAxisDerivative);

/// sqrt(||Lambda_j^beta b_i||_{H^m}^2 + ||Lambda_l^beta b_i||_{H^m}^2), {i, j, l} = {1, 2, 3}.
double anisotropic_pair_norm(const SpectralScalar& b_component, Axis component, double beta, int order = 3);

/// Instantaneous integrands of the dissipation terms of the energy functional.
struct DissipationIntegrands {
  double horizontal = 0.0;  ///< ||(nu1^{1/2} L1^a, nu2^{1/2} L2^a) u||_{H^m}^2
  double vertical = 0.0;    ///< sigma nu3 ||L3^a u||_{H^m}^2
  double magnetic = 0.0;    ///< mu sum_i ||(L_j^b, L_l^b) b_i||_{H^m}^2
  double total() const { return horizontal + vertical + magnetic; }
};

DissipationIntegrands dissipation_integrands(const MhdState& state, const DissipationSpec& spec, int order = 3);

struct LedgerRow {
  double time = 0.0;
  double h3_sq_u = 0.0;
  double h3_sq_b = 0.0;
  double h1_sq_u = 0.0;
  double h1_sq_b = 0.0;
  DissipationIntegrands rates;
  double horiz_diss = 0.0;
  double vert_diss = 0.0;
  double mag_diss = 0.0;
  double sup_h3_sq = 0.0;
  double energy_E = 0.0;
  double div_residual_u = 0.0;
  double div_residual_b = 0.0;
  double c_bootstrap = 0.0;
};

struct BootstrapReport {
  double t = 0.0;
  double e0 = 0.0;
  double et = 0.0;
  /// (E(t) - E(0)) / E(t)^{3/2}; zero when E(t) = 0.
  double c_est = 0.0;
  bool flagged = false;
};

/// Time series of the energy functional
///   E(t) = sup_{tau <= t} ||(u, b)||_{H3}^2 + accumulated dissipation integrals,
/// with trapezoidal time quadrature.
class EnergyLedger {
 public:
  EnergyLedger() = default;

  /// Appends the norms of `state` and advances the integrals by a trapezoid of
  /// width dt. The first call only records; later calls require
  /// state.t == last time + dt.
  void accumulate(const MhdState& state, const DissipationSpec& spec, double dt);

  /// Continues a ledger whose last recorded row is `last`, with E(0) = e0.
  static EnergyLedger resume(const LedgerRow& last, double e0);

  const std::vector<LedgerRow>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }
  const LedgerRow& back() const { return rows_.back(); }
  double e0() const { return e0_; }

  /// Energy functional at the last recorded time <= t.
  double energy_at(double t) const;
  BootstrapReport bootstrap_ratio(double t, double threshold = std::numeric_limits<double>::infinity()) const;

 private:
  const LedgerRow& row_at(double t) const;

  std::vector<LedgerRow> rows_;
  double e0_ = 0.0;
};

/// Diagnostics CSV: mandatory header, 17 significant digits.
class DiagnosticsCsv {
 public:
  explicit DiagnosticsCsv(const std::filesystem::path& path);
  void write(const LedgerRow& row);

  static const char* header();

 private:
  std::ofstream os_;
};

std::vector<LedgerRow> read_diagnostics_csv(const std::filesystem::path& path);

}  // namespace amhd
