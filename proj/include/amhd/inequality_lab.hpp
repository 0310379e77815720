#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "amhd/field.hpp"

namespace amhd {

/// Seeded band-limited random field: modes with max_i |k_i| <= band, amplitude
/// envelope |k|^{-amplitude_decay}. The coefficients depend only on
/// (band, seed, amplitude_decay), so the same field can be laid on any grid that
/// resolves the band.
struct RandomFieldSpec {
  Grid grid;
  int band = 4;
  std::uint64_t seed = 0;
  double amplitude_decay = 1.0;

  void validate() const;
};

/// Real, mean-zero, Hermitian-symmetric, deterministic given the seed.
SpectralScalar generate_field(const RandomFieldSpec& spec);

/// sqrt(volume * sum_k prod_a |k_a|^{2 e_a} |f_k|^2): the L2 norm of
/// d-monomials and directional fractional powers combined.
double monomial_norm(const SpectralScalar& f, const std::array<double, 3>& exponents);

/// ||f||_{H^m} with weight 1 + sum_i k_i^{2m} for any integer m >= 0.
double axis_sobolev_norm(const SpectralScalar& f, int order);

struct InequalityReport {
  std::string name;
  std::size_t trials = 0;
  double max_ratio = 0.0;
  std::size_t violations = 0;
  double tolerance = 0.0;
  std::uint64_t seed_first = 0;
  std::uint64_t seed_last = 0;
  Grid grid;
  bool reconstructed = false;
  /// Constant-1 laws count ratio > 1 + tolerance as a violation; ratio laws
  /// count only non-finite ratios.
  bool hard = false;

  void record(double ratio);
};

nlohmann::json to_json(const InequalityReport& report);
nlohmann::json to_json(const std::vector<InequalityReport>& reports);

/// L = ||d_i^{m+1} d_j^n L_j^s f||, R = ||d_j^{n+1} d_i^m L_i^s f||^s ||d_j^n d_i^{m+1} L_i^s f||^{1-s},
/// H = ||L_i^s f||_{H^{m+n+1}}.
struct AnisotropicInterpolation {
  double lhs = 0.0;
  double middle = 0.0;
  double sobolev = 0.0;
  double interpolation_ratio() const;  ///< L / R (0 when both vanish)
  double sobolev_ratio() const;        ///< R / H (0 when both vanish)
};

AnisotropicInterpolation check_lemma_2_4(const SpectralScalar& f, Axis i, Axis j, int m, int n, double s);

struct RatioCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  ///< lhs / rhs, 0 when lhs = 0
};

/// ||f||_{L^q} against ||f||^{1-theta} ||Lambda^s f||^theta, theta = (3/s)(1/2 - 1/q).
/// q = infinity is allowed.
RatioCheck check_interpolation_Lq(const SpectralScalar& f, double q, double s);

/// Reconstructed triple-product forms.
enum class TripleProductForm {
  /// all three factors ||.||^{1-1/(2e)} ||Lambda_axis^e .||^{1/(2e)}
  kFractional,
  /// f, g fractional; h carries ||h||^{1/2} ||d_k h||^{1/2}
  kMixed,
};

const char* to_string(TripleProductForm form);

/// int |f g h| dx against the reconstructed right-hand side with unit constant.
RatioCheck check_triple_product(const SpectralScalar& f, const SpectralScalar& g, const SpectralScalar& h,
                                const std::array<Axis, 3>& axes, const std::array<double, 3>& exponents,
                                TripleProductForm form = TripleProductForm::kFractional);

/// Seeded trial drivers.
struct TrialConfig {
  Grid grid = Grid::cube(16);
  int band = 4;
  double amplitude_decay = 1.0;
  std::uint64_t seed = 1;
  std::size_t trials = 1000;
};

/// Cycles (m, n) over {0,1,2}^2, s over {0.55, 0.75, 1 - 1e-9} and the six
/// ordered axis pairs. Returns the interpolation and Sobolev-bound reports.
std::array<InequalityReport, 2> lemma_2_4_trials(const TrialConfig& config, double tolerance = 1e-12);

/// Cycles (q, s) over valid pairs including q = infinity.
InequalityReport interpolation_trials(const TrialConfig& config);

/// Cycles the six permutations with eps_ijk != 0 and exponents in (1/2, 1].
InequalityReport triple_product_trials(const TrialConfig& config, TripleProductForm form);

}  // namespace amhd
