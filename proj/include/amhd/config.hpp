#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "amhd/dynamics.hpp"
#include "amhd/grid.hpp"

namespace amhd {

struct InitParams {
  std::uint64_t seed = 1;
  int band = 4;
  /// Target ||(u, b)||_{H^3}; zero gives the zero state.
  double epsilon = 1e-2;
  double amplitude_decay = 1.0;
};

struct RunConfig {
  Grid grid;
  DissipationSpec spec;
  double dt = 1e-3;
  double t_end = 1.0;
  int sample_every = 10;
  InitParams init;
  std::filesystem::path outputs = "out";
  /// Steps between checkpoints; 0 writes only the final one.
  int checkpoint_every = 0;
  NonlinearForm nonlinear_form = NonlinearForm::kFlux;

  void validate() const;
  /// Number of steps to t_end (t_end must be a multiple of dt to 1e-9).
  long long total_steps() const;
};

/// Parses a config document. Unknown keys anywhere raise InvalidParameter.
RunConfig config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const RunConfig& config);
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const DissipationSpec& spec);
DissipationSpec dissipation_from_json(const nlohmann::json& doc);

const char* to_string(NonlinearForm form);
NonlinearForm nonlinear_form_from_string(const std::string& name);

}  // namespace amhd
