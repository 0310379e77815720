#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "amhd/config.hpp"
#include "amhd/diagnostics.hpp"
#include "amhd/dynamics.hpp"

namespace amhd {

/// Seeded band-limited solenoidal mean-zero vector field (Leray-projected).
VectorField random_solenoidal_field(const Grid& grid, int band, std::uint64_t seed, double amplitude_decay);

/// Random (u, b) with ||(u, b)||_{H^3} = epsilon. epsilon = 0 gives the zero state.
MhdState make_initial_data(const InitParams& init, const Grid& grid);

/// One stepped simulation: state, stepper, per-step energy ledger and the
/// RK4-weighted L2 dissipation integral.
class Simulation {
 public:
  Simulation(const RunConfig& config, MhdState initial);

  /// Advances one step and records a ledger row. Throws BlowUpError.
  void advance();

  const RunConfig& config() const { return config_; }
  const MhdState& state() const { return state_; }
  const EnergyLedger& ledger() const { return ledger_; }
  long long step() const { return step_; }
  double l2_dissipated() const { return l2_dissipated_; }
  double max_cfl() const { return max_cfl_; }

  /// Restores a simulation from checkpoint data.
  static Simulation restore(const RunConfig& config, MhdState state, long long step, const LedgerRow& last_row,
                            double e0, double l2_dissipated);

 private:
  RunConfig config_;
  IfRk4Stepper stepper_;
  MhdState state_;
  EnergyLedger ledger_;
  long long step_ = 0;
  double l2_dissipated_ = 0.0;
  double max_cfl_ = 0.0;
};

struct BlowUpRecord {
  double time = 0.0;
  long long step = 0;
  double max_amplitude = 0.0;
};

struct RunResult {
  EnergyLedger ledger;
  /// Rows written to the diagnostics CSV.
  std::vector<LedgerRow> samples;
  MhdState final_state;
  long long steps = 0;
  double l2_dissipated = 0.0;
  std::optional<BlowUpRecord> blow_up;
  std::filesystem::path last_checkpoint;
};

/// Writes <outputs>/diagnostics.csv, checkpoint_<step>/ directories and, on
/// blow-up, blowup.json. A blow-up is reported in the result, not thrown.
RunResult run(const RunConfig& config);

/// Continues from a checkpoint directory to the configured t_end (or
/// t_end_override). Rows of the existing diagnostics CSV up to the checkpoint
/// time are kept.
RunResult resume(const std::filesystem::path& checkpoint, std::optional<double> t_end_override = std::nullopt);

/// Checkpoint directory: u.snap, b.snap (field snapshots), state.bin (exact
/// spectral coefficients) and checkpoint.json.
void write_checkpoint(const std::filesystem::path& dir, const Simulation& sim);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;  ///< log10 of the prefactor
  double residual = 0.0;   ///< RMS of log10 residuals
  double slope_stderr = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares of log10 y on log10 x. Needs >= 3 points with
/// positive values and two distinct x.
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct StabilityEntry {
  double epsilon = 0.0;
  double e0 = 0.0;
  double sup_energy = 0.0;
  /// sup_t E(t) / epsilon^2; zero for epsilon = 0.
  double scaled_sup = 0.0;
  bool bounded = false;
  std::optional<BlowUpRecord> blow_up;
};

struct ScalingCheck {
  double eps_a = 0.0;
  double eps_b = 0.0;
  double observed = 0.0;  ///< sup E(eps_b) / sup E(eps_a)
  double expected = 0.0;  ///< (eps_b / eps_a)^2
  double relative_error = 0.0;
};

struct StabilityResult {
  std::vector<StabilityEntry> entries;
  double bound_factor = 4.0;
  std::vector<ScalingCheck> scaling;
  bool bounded = false;
  std::optional<double> failed_epsilon;
};

/// Runs base with each epsilon (outputs in <outputs>/eps_<i>).
StabilityResult stability_sweep(const RunConfig& base, const std::vector<double>& epsilons, double bound_factor = 4.0);
nlohmann::json to_json(const StabilityResult& result);

struct InviscidResult {
  std::vector<double> nus;
  std::vector<double> sup_diff_h1;
  std::optional<SlopeFit> fit;
  std::string fit_error;
  std::vector<std::string> warnings;
  std::optional<BlowUpRecord> blow_up;
  std::optional<double> blow_up_nu;  ///< 0 for the reference run
};

/// Lock-step runs of the sigma = 1, nu3 = nu systems and the sigma = 0
/// reference from the same initial data; sup over samples of
/// ||(u^nu - u^0, b^nu - b^0)||_{H^1} and a log-log fit against nu.
InviscidResult inviscid_sweep(const RunConfig& base, const std::vector<double>& nus);
/// {param, sup_diff_h1, slope, intercept, residual}
nlohmann::json sweep_summary_json(const InviscidResult& result);
nlohmann::json to_json(const InviscidResult& result);

struct ContinuousDependenceResult {
  double delta = 0.0;
  double sup_diff_h1 = 0.0;
  double ratio = 0.0;  ///< sup_diff_h1 / delta, zero when delta = 0
  double factor = 10.0;
  bool bounded = false;
  std::vector<double> times;
  std::vector<double> diff_h1;
  std::optional<BlowUpRecord> blow_up;
};

/// Two lock-step runs whose initial data differ by a solenoidal perturbation
/// of H^1 size delta.
ContinuousDependenceResult continuous_dependence(const RunConfig& base, double delta, double factor = 10.0);
nlohmann::json to_json(const ContinuousDependenceResult& result);

struct LinearValidationResult {
  std::vector<Wavevector> modes;
  std::vector<double> errors;
  double max_error = 0.0;
};

/// Steps the linearized system (dissipation and coupling only) with random
/// solenoidal amplitudes on `count` distinct modes with max_i |k_i| <= band and
/// compares each mode with linear_mode_oracle. Errors are relative to the
/// largest initial amplitude.
LinearValidationResult linear_validate(const Grid& grid, const DissipationSpec& spec, int count, int band,
                                       std::uint64_t seed, double dt, double t_end);
nlohmann::json to_json(const LinearValidationResult& result);

nlohmann::json to_json(const LedgerRow& row);
LedgerRow ledger_row_from_json(const nlohmann::json& doc);

}  // namespace amhd
