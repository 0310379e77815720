#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "amhd/config.hpp"
#include "amhd/diagnostics.hpp"
#include "amhd/errors.hpp"
#include "amhd/experiments.hpp"
#include "amhd/inequality_lab.hpp"
#include "amhd/parallel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_json(const fs::path& path, const json& doc) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw amhd::IoError("cannot write " + path.string());
  os << doc.dump(2) << '\n';
}

int summarize_run(const amhd::RunResult& r) {
  const amhd::LedgerRow& last = r.ledger.back();
  std::printf("steps %lld  t %.6g  E %.6e  E0 %.6e  div_u %.2e  div_b %.2e\n", r.steps, last.time, last.energy_E,
              r.ledger.e0(), last.div_residual_u, last.div_residual_b);
  if (r.blow_up) {
    std::printf("BLOW-UP at t=%.6g (step %lld, max amplitude %.3e)\n", r.blow_up->time, r.blow_up->step,
                r.blow_up->max_amplitude);
    return 1;
  }
  std::printf("checkpoint %s\n", r.last_checkpoint.string().c_str());
  return 0;
}

int cmd_report(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw amhd::IoError("not a directory: " + dir.string());
  bool found = false;
  const fs::path csv = dir / "diagnostics.csv";
  if (fs::exists(csv)) {
    found = true;
    const auto rows = amhd::read_diagnostics_csv(csv);
    double div_u = 0.0, div_b = 0.0;
    for (const auto& r : rows) {
      div_u = std::max(div_u, r.div_residual_u);
      div_b = std::max(div_b, r.div_residual_b);
    }
    std::printf("diagnostics.csv: %zu rows\n", rows.size());
    if (!rows.empty()) {
      const auto& f = rows.front();
      const auto& l = rows.back();
      std::printf("  t %.6g -> %.6g\n  E(0) %.6e  E(t) %.6e  E(t)/E(0) %.6g\n", f.time, l.time, f.energy_E, l.energy_E,
                  f.energy_E > 0.0 ? l.energy_E / f.energy_E : 0.0);
      std::printf("  dissipation: horizontal %.6e  vertical %.6e  magnetic %.6e\n", l.horiz_diss, l.vert_diss,
                  l.mag_diss);
      std::printf("  max divergence residual: u %.3e  b %.3e\n  bootstrap c_est %.6e\n", div_u, div_b, l.c_bootstrap);
    }
  }
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path());
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error&) {
      std::printf("%s: unreadable JSON\n", entry.path().filename().string().c_str());
      continue;
    }
    found = true;
    std::printf("%s:\n", entry.path().filename().string().c_str());
    if (doc.contains("slope") && doc.contains("param")) {
      std::printf("  params %s\n  sup_diff_h1 %s\n  slope %s  intercept %s  residual %s\n", doc["param"].dump().c_str(),
                  doc["sup_diff_h1"].dump().c_str(), doc["slope"].dump().c_str(), doc["intercept"].dump().c_str(),
                  doc["residual"].dump().c_str());
    } else {
      for (const char* key : {"kind", "bounded", "ratio", "max_error", "failed_epsilon", "passed"}) {
        if (doc.is_object() && doc.contains(key)) std::printf("  %s %s\n", key, doc[key].dump().c_str());
      }
    }
  }
  if (!found) {
    std::fprintf(stderr, "no diagnostics.csv or JSON results in %s\n", dir.string().c_str());
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic MHD perturbation solver and experiments"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Thread count (overrides AMHD_THREADS)");

  std::string config_path, checkpoint_path, report_dir, out_path;
  std::optional<double> t_end;
  std::vector<double> eps, nus, deltas;
  double bound_factor = 4.0, cd_factor = 10.0;

  auto* run = app.add_subcommand("run", "Run a simulation from a JSON config");
  run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);

  auto* res = app.add_subcommand("resume", "Continue from a checkpoint directory");
  res->add_option("checkpoint", checkpoint_path, "Checkpoint directory")->required()->check(CLI::ExistingDirectory);
  res->add_option("--t-end", t_end, "Override t_end");

  auto* stab = app.add_subcommand("sweep-stability", "Energy boundedness over a list of epsilons");
  stab->add_option("config", config_path)->required()->check(CLI::ExistingFile);
  stab->add_option("--eps", eps, "Initial H3 sizes")->required();
  stab->add_option("--bound-factor", bound_factor, "Allowed sup E / E(0)");

  auto* inv = app.add_subcommand("sweep-inviscid", "Vanishing vertical viscosity sweep");
  inv->add_option("config", config_path)->required()->check(CLI::ExistingFile);
  inv->add_option("--nu", nus, "Vertical viscosities (> 0)")->required();

  auto* cd = app.add_subcommand("continuous-dependence", "Growth of initial-data perturbations");
  cd->add_option("config", config_path)->required()->check(CLI::ExistingFile);
  cd->add_option("--delta", deltas, "Perturbation H1 sizes")->required();
  cd->add_option("--factor", cd_factor, "Allowed sup difference / delta");

  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  int ineq_grid = 16;
  auto* ver = app.add_subcommand("verify-inequalities", "Randomized checks of the functional inequalities");
  ver->add_option("--trials", trials, "Trials per inequality");
  ver->add_option("--seed", seed, "First seed");
  ver->add_option("--grid", ineq_grid, "Cube grid size");
  ver->add_option("-o,--output", out_path, "Write the JSON report here");

  int lv_modes = 50, lv_band = 5, lv_grid = 16;
  double lv_dt = 1e-3, lv_t = 1.0, lv_tol = 1e-8, lv_alpha = 1.0, lv_beta = 1.0;
  std::uint64_t lv_seed = 1;
  auto* lin = app.add_subcommand("linear-validate", "Linearized stepper against the exact mode propagator");
  lin->add_option("--modes", lv_modes);
  lin->add_option("--band", lv_band);
  lin->add_option("--grid", lv_grid);
  lin->add_option("--dt", lv_dt);
  lin->add_option("--t-end", lv_t);
  lin->add_option("--alpha", lv_alpha);
  lin->add_option("--beta", lv_beta);
  lin->add_option("--seed", lv_seed);
  lin->add_option("--tolerance", lv_tol);
  lin->add_option("-o,--output", out_path);

  auto* rep = app.add_subcommand("report", "Summarize the outputs in a directory");
  rep->add_option("dir", report_dir)->required();

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) amhd::set_thread_count(threads);

  try {
    if (*run) return summarize_run(amhd::run(amhd::load_config(config_path)));
    if (*res) return summarize_run(amhd::resume(checkpoint_path, t_end));

    if (*stab) {
      const amhd::RunConfig cfg = amhd::load_config(config_path);
      const auto r = amhd::stability_sweep(cfg, eps, bound_factor);
      const json doc = amhd::to_json(r);
      write_json(cfg.outputs / "stability.json", doc);
      for (const auto& e : r.entries) {
        std::printf("eps %.3e  E0 %.6e  sup E %.6e  sup E/eps^2 %.6g  %s\n", e.epsilon, e.e0, e.sup_energy, e.scaled_sup,
                    e.bounded ? "bounded" : "UNBOUNDED");
      }
      for (const auto& s : r.scaling) {
        std::printf("scaling %.3e -> %.3e: observed %.6g expected %.6g (rel err %.3g)\n", s.eps_a, s.eps_b, s.observed,
                    s.expected, s.relative_error);
      }
      return r.bounded ? 0 : 1;
    }

    if (*inv) {
      const amhd::RunConfig cfg = amhd::load_config(config_path);
      const auto r = amhd::inviscid_sweep(cfg, nus);
      write_json(cfg.outputs / "sweep_summary.json", amhd::sweep_summary_json(r));
      write_json(cfg.outputs / "inviscid_report.json", amhd::to_json(r));
      for (std::size_t i = 0; i < r.nus.size(); ++i) std::printf("nu %.3e  sup diff H1 %.6e\n", r.nus[i], r.sup_diff_h1[i]);
      for (const auto& w : r.warnings) std::printf("warning: %s\n", w.c_str());
      if (!r.fit) {
        std::printf("fit rejected: %s\n", r.fit_error.c_str());
        return 1;
      }
      std::printf("slope %.6f +- %.6f  intercept %.6f  residual %.6f\n", r.fit->slope, r.fit->slope_stderr,
                  r.fit->intercept, r.fit->residual);
      return 0;
    }

    if (*cd) {
      const amhd::RunConfig cfg = amhd::load_config(config_path);
      json all = json::array();
      bool ok = true;
      for (double d : deltas) {
        const auto r = amhd::continuous_dependence(cfg, d, cd_factor);
        all.push_back(amhd::to_json(r));
        std::printf("delta %.3e  sup diff H1 %.6e  ratio %.6g  %s\n", d, r.sup_diff_h1, r.ratio,
                    r.bounded ? "bounded" : "UNBOUNDED");
        ok = ok && r.bounded;
      }
      write_json(cfg.outputs / "continuous_dependence.json", all);
      return ok ? 0 : 1;
    }

    if (*ver) {
      amhd::TrialConfig tc;
      tc.grid = amhd::Grid::cube(ineq_grid);
      tc.seed = seed;
      tc.trials = trials;
      std::vector<amhd::InequalityReport> reports;
      for (const auto& r : amhd::lemma_2_4_trials(tc)) reports.push_back(r);
      reports.push_back(amhd::interpolation_trials(tc));
      reports.push_back(amhd::triple_product_trials(tc, amhd::TripleProductForm::kFractional));
      reports.push_back(amhd::triple_product_trials(tc, amhd::TripleProductForm::kMixed));
      bool ok = true;
      for (const auto& r : reports) {
        std::printf("%-42s trials %zu  max ratio %.6g  violations %zu%s%s\n", r.name.c_str(), r.trials, r.max_ratio,
                    r.violations, r.hard ? "  [hard]" : "", r.reconstructed ? "  [reconstructed]" : "");
        if (r.hard && r.violations > 0) ok = false;
      }
      if (!out_path.empty()) write_json(out_path, amhd::to_json(reports));
      return ok ? 0 : 1;
    }

    if (*lin) {
      amhd::DissipationSpec spec;
      spec.alpha = lv_alpha;
      spec.beta = lv_beta;
      const auto r = amhd::linear_validate(amhd::Grid::cube(lv_grid), spec, lv_modes, lv_band, lv_seed, lv_dt, lv_t);
      json doc = amhd::to_json(r);
      doc["tolerance"] = lv_tol;
      doc["passed"] = r.max_error <= lv_tol;
      if (!out_path.empty()) write_json(out_path, doc);
      std::printf("modes %zu  max amplitude error %.3e  tolerance %.1e  %s\n", r.errors.size(), r.max_error, lv_tol,
                  r.max_error <= lv_tol ? "PASS" : "FAIL");
      return r.max_error <= lv_tol ? 0 : 1;
    }

    if (*rep) return cmd_report(report_dir);
  } catch (const amhd::BlowUpError& e) {
    std::fprintf(stderr, "blow-up at t=%g: %s\n", e.time(), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
