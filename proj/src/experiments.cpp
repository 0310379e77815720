#include "amhd/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include "amhd/errors.hpp"
#include "amhd/inequality_lab.hpp"
#include "amhd/snapshot.hpp"
#include "amhd/spectral_ops.hpp"

namespace amhd {

using nlohmann::json;
namespace fs = std::filesystem;

VectorField random_solenoidal_field(const Grid& grid, int band, std::uint64_t seed, double amplitude_decay) {
  VectorField v(grid);
  for (int c = 0; c < 3; ++c) {
    v[c] = generate_field(RandomFieldSpec{grid, band, seed * 4 + std::uint64_t(c), amplitude_decay});
  }
  leray_project_in_place(v);
  return v;
}

namespace {

double h1_pair(const VectorField& u, const VectorField& b) {
  const double a = h_s_norm(u, 1);
  const double c = h_s_norm(b, 1);
  return std::sqrt(a * a + c * c);
}

double h3_pair(const VectorField& u, const VectorField& b) {
  const double a = h_s_norm(u, 3);
  const double c = h_s_norm(b, 3);
  return std::sqrt(a * a + c * c);
}

RhsOptions options_for(const RunConfig& c) { return RhsOptions{true, true, c.nonlinear_form}; }

}  // namespace

MhdState make_initial_data(const InitParams& init, const Grid& grid) {
  if (!(init.epsilon >= 0.0)) throw InvalidParameter("epsilon must be >= 0");
  MhdState state(grid);
  if (init.epsilon == 0.0) return state;
  state.u = random_solenoidal_field(grid, init.band, 2 * init.seed, init.amplitude_decay);
  state.b = random_solenoidal_field(grid, init.band, 2 * init.seed + 1, init.amplitude_decay);
  const double norm = h3_pair(state.u, state.b);
  if (!(norm > 0.0)) throw InvalidParameter("random initial data vanished; increase the band");
  state.u *= init.epsilon / norm;
  state.b *= init.epsilon / norm;
  return state;
}

Simulation::Simulation(const RunConfig& config, MhdState initial)
    : config_(config),
      stepper_(config.grid, config.spec, config.dt, options_for(config)),
      state_(std::move(initial)) {
  config_.validate();
  if (!(state_.grid() == config_.grid)) throw GridMismatch();
  ledger_.accumulate(state_, config_.spec, config_.dt);
}

void Simulation::advance() {
  const StepInfo info = stepper_.step(state_);
  ++step_;
  l2_dissipated_ += info.l2_dissipation;
  max_cfl_ = std::max(max_cfl_, info.cfl);
  ledger_.accumulate(state_, config_.spec, config_.dt);
}

Simulation Simulation::restore(const RunConfig& config, MhdState state, long long step, const LedgerRow& last_row,
                               double e0, double l2_dissipated) {
  Simulation sim(config, std::move(state));
  sim.ledger_ = EnergyLedger::resume(last_row, e0);
  sim.step_ = step;
  sim.l2_dissipated_ = l2_dissipated;
  return sim;
}

json to_json(const LedgerRow& r) {
  return json{{"time", r.time},
              {"h3_sq_u", r.h3_sq_u},
              {"h3_sq_b", r.h3_sq_b},
              {"h1_sq_u", r.h1_sq_u},
              {"h1_sq_b", r.h1_sq_b},
              {"rate_horizontal", r.rates.horizontal},
              {"rate_vertical", r.rates.vertical},
              {"rate_magnetic", r.rates.magnetic},
              {"horiz_diss", r.horiz_diss},
              {"vert_diss", r.vert_diss},
              {"mag_diss", r.mag_diss},
              {"sup_h3_sq", r.sup_h3_sq},
              {"energy_E", r.energy_E},
              {"div_residual_u", r.div_residual_u},
              {"div_residual_b", r.div_residual_b},
              {"c_bootstrap", r.c_bootstrap}};
}

LedgerRow ledger_row_from_json(const json& d) {
  LedgerRow r;
  r.time = d.at("time").get<double>();
  r.h3_sq_u = d.at("h3_sq_u").get<double>();
  r.h3_sq_b = d.at("h3_sq_b").get<double>();
  r.h1_sq_u = d.at("h1_sq_u").get<double>();
  r.h1_sq_b = d.at("h1_sq_b").get<double>();
  r.rates.horizontal = d.at("rate_horizontal").get<double>();
  r.rates.vertical = d.at("rate_vertical").get<double>();
  r.rates.magnetic = d.at("rate_magnetic").get<double>();
  r.horiz_diss = d.at("horiz_diss").get<double>();
  r.vert_diss = d.at("vert_diss").get<double>();
  r.mag_diss = d.at("mag_diss").get<double>();
  r.sup_h3_sq = d.at("sup_h3_sq").get<double>();
  r.energy_E = d.at("energy_E").get<double>();
  r.div_residual_u = d.at("div_residual_u").get<double>();
  r.div_residual_b = d.at("div_residual_b").get<double>();
  r.c_bootstrap = d.at("c_bootstrap").get<double>();
  return r;
}

namespace {

constexpr char kStateMagic[8] = {'A', 'M', 'H', 'D', 'S', 'T', '1', '\0'};

void write_state_bin(const fs::path& path, const MhdState& s) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  const Grid& g = s.grid();
  const std::int32_t dims[3] = {g.n1, g.n2, g.n3};
  os.write(kStateMagic, sizeof kStateMagic);
  os.write(reinterpret_cast<const char*>(dims), sizeof dims);
  os.write(reinterpret_cast<const char*>(&g.length), sizeof g.length);
  os.write(reinterpret_cast<const char*>(&s.t), sizeof s.t);
  for (const VectorField* v : {&s.u, &s.b}) {
    for (int c = 0; c < 3; ++c) {
      os.write(reinterpret_cast<const char*>((*v)[c].data()), std::streamsize(g.spectral_size() * sizeof(Complex)));
    }
  }
  if (!os) throw IoError("short write to " + path.string());
}

MhdState read_state_bin(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read " + path.string());
  char magic[8];
  std::int32_t dims[3];
  Grid g;
  double t = 0.0;
  is.read(magic, sizeof magic);
  is.read(reinterpret_cast<char*>(dims), sizeof dims);
  is.read(reinterpret_cast<char*>(&g.length), sizeof g.length);
  is.read(reinterpret_cast<char*>(&t), sizeof t);
  if (!is || !std::equal(magic, magic + 8, kStateMagic)) throw IoError("not a state file: " + path.string());
  g.n1 = dims[0];
  g.n2 = dims[1];
  g.n3 = dims[2];
  g.validate();
  MhdState s(g);
  s.t = t;
  for (VectorField* v : {&s.u, &s.b}) {
    for (int c = 0; c < 3; ++c) {
      is.read(reinterpret_cast<char*>((*v)[c].data()), std::streamsize(g.spectral_size() * sizeof(Complex)));
    }
  }
  if (!is) throw IoError("truncated state file " + path.string());
  return s;
}

fs::path checkpoint_dir(const fs::path& outputs, long long step) {
  char name[40];
  std::snprintf(name, sizeof name, "checkpoint_%08lld", step);
  return outputs / name;
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  os << doc.dump(2) << '\n';
  if (!os) throw IoError("short write to " + path.string());
}

json blow_up_json(const BlowUpRecord& r) {
  return json{{"time", r.time}, {"step", r.step}, {"max_amplitude", r.max_amplitude}};
}

// Steps sim to total_steps, sampling into csv and writing checkpoints.
void drive(Simulation& sim, DiagnosticsCsv& csv, RunResult& result, long long total_steps) {
  const RunConfig& c = sim.config();
  while (sim.step() < total_steps) {
    try {
      sim.advance();
    } catch (const BlowUpError& e) {
      result.blow_up = BlowUpRecord{e.time(), sim.step() + 1, e.max_amplitude()};
      json doc = blow_up_json(*result.blow_up);
      doc["last_finite_row"] = to_json(sim.ledger().back());
      write_json(c.outputs / "blowup.json", doc);
      break;
    }
    const long long step = sim.step();
    if (step % c.sample_every == 0 || step == total_steps) {
      csv.write(sim.ledger().back());
      result.samples.push_back(sim.ledger().back());
    }
    if (c.checkpoint_every > 0 && step % c.checkpoint_every == 0 && step != total_steps) {
      write_checkpoint(checkpoint_dir(c.outputs, step), sim);
    }
  }
  if (!result.blow_up) {
    result.last_checkpoint = checkpoint_dir(c.outputs, sim.step());
    write_checkpoint(result.last_checkpoint, sim);
  }
  result.ledger = sim.ledger();
  result.final_state = sim.state();
  result.steps = sim.step();
  result.l2_dissipated = sim.l2_dissipated();
}

void create_outputs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace

void write_checkpoint(const fs::path& dir, const Simulation& sim) {
  create_outputs(dir);
  const MhdState& s = sim.state();
  write_snapshot(dir / "u.snap", s.u, s.t);
  write_snapshot(dir / "b.snap", s.b, s.t);
  write_state_bin(dir / "state.bin", s);
  const json doc{{"config", to_json(sim.config())},
                 {"dissipation", to_json(sim.config().spec)},
                 {"step", sim.step()},
                 {"seed", sim.config().init.seed},
                 {"time", s.t},
                 {"e0", sim.ledger().e0()},
                 {"l2_dissipated", sim.l2_dissipated()},
                 {"ledger", to_json(sim.ledger().back())},
                 {"files", {{"u", "u.snap"}, {"b", "b.snap"}, {"state", "state.bin"}}}};
  write_json(dir / "checkpoint.json", doc);
}

RunResult run(const RunConfig& config) {
  config.validate();
  create_outputs(config.outputs);
  Simulation sim(config, make_initial_data(config.init, config.grid));
  DiagnosticsCsv csv(config.outputs / "diagnostics.csv");
  RunResult result{EnergyLedger{}, {}, MhdState(config.grid), 0, 0.0, std::nullopt, {}};
  csv.write(sim.ledger().back());
  result.samples.push_back(sim.ledger().back());
  drive(sim, csv, result, config.total_steps());
  return result;
}

RunResult resume(const fs::path& checkpoint, std::optional<double> t_end_override) {
  const fs::path sidecar = checkpoint / "checkpoint.json";
  std::ifstream in(sidecar);
  if (!in) throw IoError("cannot open " + sidecar.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(sidecar.string() + ": " + e.what());
  }
  RunConfig config = config_from_json(doc.at("config"));
  if (t_end_override) config.t_end = *t_end_override;
  config.validate();

  MhdState state(config.grid);
  if (fs::exists(checkpoint / "state.bin")) {
    state = read_state_bin(checkpoint / "state.bin");
  } else {
    double t = 0.0;
    state.u = read_vector_snapshot(checkpoint / "u.snap", &t, config.grid.length);
    state.b = read_vector_snapshot(checkpoint / "b.snap", nullptr, config.grid.length);
    state.t = t;
    for (VectorField* v : {&state.u, &state.b}) {
      for (int c = 0; c < 3; ++c) dealias_in_place((*v)[c]);
      leray_project_in_place(*v);
    }
  }
  if (!(state.grid() == config.grid)) throw GridMismatch();

  const long long step = doc.at("step").get<long long>();
  const long long total = config.total_steps();
  if (step > total) throw InvalidParameter("checkpoint lies beyond t_end");
  const LedgerRow last = ledger_row_from_json(doc.at("ledger"));
  Simulation sim = Simulation::restore(config, std::move(state), step, last, doc.at("e0").get<double>(),
                                       doc.at("l2_dissipated").get<double>());

  create_outputs(config.outputs);
  const fs::path csv_path = config.outputs / "diagnostics.csv";
  std::vector<LedgerRow> kept;
  if (fs::exists(csv_path)) {
    for (const LedgerRow& r : read_diagnostics_csv(csv_path)) {
      if (r.time <= last.time * (1.0 + 1e-12)) kept.push_back(r);
    }
  }
  if (kept.empty() || kept.back().time < last.time * (1.0 - 1e-12)) kept.push_back(last);
  DiagnosticsCsv csv(csv_path);
  RunResult result{EnergyLedger{}, {}, MhdState(config.grid), 0, 0.0, std::nullopt, {}};
  for (const LedgerRow& r : kept) {
    csv.write(r);
    result.samples.push_back(r);
  }
  drive(sim, csv, result, total);
  return result;
}

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidParameter("fit: x and y differ in length");
  if (x.size() < 3) throw InvalidParameter("fit: at least 3 points required");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw InvalidParameter("fit: values must be positive and finite (degenerate data)");
    }
    lx[i] = std::log10(x[i]);
    ly[i] = std::log10(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidParameter("fit: x values must not all coincide");
  SlopeFit fit;
  fit.points = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / double(n));
  fit.slope_stderr = n > 2 ? std::sqrt(ss / double(n - 2) / sxx) : 0.0;
  return fit;
}

StabilityResult stability_sweep(const RunConfig& base, const std::vector<double>& epsilons, double bound_factor) {
  if (epsilons.size() < 2) throw InvalidParameter("stability sweep needs at least 2 epsilons");
  if (!(bound_factor > 0.0)) throw InvalidParameter("bound_factor must be positive");
  StabilityResult out;
  out.bound_factor = bound_factor;
  out.bounded = true;
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    RunConfig cfg = base;
    cfg.init.epsilon = epsilons[i];
    cfg.outputs = base.outputs / ("eps_" + std::to_string(i));
    const RunResult r = run(cfg);
    StabilityEntry e;
    e.epsilon = epsilons[i];
    e.e0 = r.ledger.e0();
    for (const LedgerRow& row : r.ledger.rows()) e.sup_energy = std::max(e.sup_energy, row.energy_E);
    e.scaled_sup = e.epsilon > 0.0 ? e.sup_energy / (e.epsilon * e.epsilon) : 0.0;
    e.blow_up = r.blow_up;
    e.bounded = !e.blow_up && e.sup_energy <= bound_factor * e.e0;
    if (!e.bounded) {
      out.bounded = false;
      if (!out.failed_epsilon) out.failed_epsilon = e.epsilon;
    }
    out.entries.push_back(e);
  }
  for (std::size_t i = 0; i + 1 < out.entries.size(); ++i) {
    const StabilityEntry& a = out.entries[i];
    const StabilityEntry& b = out.entries[i + 1];
    if (!(a.epsilon > 0.0) || !(b.epsilon > 0.0) || !(a.sup_energy > 0.0)) continue;
    ScalingCheck s{a.epsilon, b.epsilon, b.sup_energy / a.sup_energy, (b.epsilon / a.epsilon) * (b.epsilon / a.epsilon),
                   0.0};
    s.relative_error = std::abs(s.observed / s.expected - 1.0);
    out.scaling.push_back(s);
  }
  return out;
}

json to_json(const StabilityResult& r) {
  json entries = json::array();
  for (const StabilityEntry& e : r.entries) {
    json j{{"epsilon", e.epsilon},
           {"e0", e.e0},
           {"sup_energy", e.sup_energy},
           {"sup_energy_over_eps2", e.scaled_sup},
           {"bounded", e.bounded}};
    j["blow_up"] = e.blow_up ? blow_up_json(*e.blow_up) : json(nullptr);
    entries.push_back(j);
  }
  json scaling = json::array();
  for (const ScalingCheck& s : r.scaling) {
    scaling.push_back({{"eps_a", s.eps_a},
                       {"eps_b", s.eps_b},
                       {"observed_ratio", s.observed},
                       {"expected_ratio", s.expected},
                       {"relative_error", s.relative_error}});
  }
  json doc{{"kind", "stability"},
           {"bound_factor", r.bound_factor},
           {"bounded", r.bounded},
           {"entries", entries},
           {"scaling", scaling}};
  doc["failed_epsilon"] = r.failed_epsilon ? json(*r.failed_epsilon) : json(nullptr);
  return doc;
}

InviscidResult inviscid_sweep(const RunConfig& base, const std::vector<double>& nus) {
  if (nus.size() < 3) throw InvalidParameter("inviscid sweep needs at least 3 values of nu");
  for (double nu : nus) {
    if (!(nu > 0.0) || !std::isfinite(nu)) throw InvalidParameter("inviscid sweep: every nu must be positive");
  }
  base.validate();
  const long long total = base.total_steps();
  const RhsOptions options = options_for(base);

  DissipationSpec ref_spec = base.spec;
  ref_spec.sigma = 0;
  std::vector<IfRk4Stepper> steppers;
  steppers.emplace_back(base.grid, ref_spec, base.dt, options);
  for (double nu : nus) {
    DissipationSpec s = base.spec;
    s.sigma = 1;
    s.nu3 = nu;
    s.validate();
    steppers.emplace_back(base.grid, s, base.dt, options);
  }
  const MhdState init = make_initial_data(base.init, base.grid);
  std::vector<MhdState> states(steppers.size(), init);

  InviscidResult out;
  out.nus = nus;
  out.sup_diff_h1.assign(nus.size(), 0.0);
  for (long long step = 1; step <= total && !out.blow_up; ++step) {
    for (std::size_t r = 0; r < steppers.size(); ++r) {
      try {
        steppers[r].step(states[r]);
      } catch (const BlowUpError& e) {
        out.blow_up = BlowUpRecord{e.time(), step, e.max_amplitude()};
        out.blow_up_nu = r == 0 ? 0.0 : nus[r - 1];
        break;
      }
    }
    if (out.blow_up) break;
    if (step % base.sample_every == 0 || step == total) {
      for (std::size_t i = 0; i < nus.size(); ++i) {
        const double d = h1_pair(states[i + 1].u - states[0].u, states[i + 1].b - states[0].b);
        out.sup_diff_h1[i] = std::max(out.sup_diff_h1[i], d);
      }
    }
  }
  if (out.blow_up) {
    out.fit_error = "blow-up";
    return out;
  }

  std::vector<std::size_t> order(nus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return nus[a] < nus[b]; });
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    if (out.sup_diff_h1[order[i + 1]] < out.sup_diff_h1[order[i]]) {
      out.warnings.push_back("sup difference not monotone in nu between nu=" + std::to_string(nus[order[i]]) +
                             " and nu=" + std::to_string(nus[order[i + 1]]));
    }
  }
  try {
    out.fit = fit_loglog(nus, out.sup_diff_h1);
  } catch (const InvalidParameter& e) {
    out.fit_error = e.what();
  }
  return out;
}

json sweep_summary_json(const InviscidResult& r) {
  json doc{{"param", r.nus}, {"sup_diff_h1", r.sup_diff_h1}};
  doc["slope"] = r.fit ? json(r.fit->slope) : json(nullptr);
  doc["intercept"] = r.fit ? json(r.fit->intercept) : json(nullptr);
  doc["residual"] = r.fit ? json(r.fit->residual) : json(nullptr);
  return doc;
}

json to_json(const InviscidResult& r) {
  json doc = sweep_summary_json(r);
  doc["kind"] = "inviscid";
  doc["slope_stderr"] = r.fit ? json(r.fit->slope_stderr) : json(nullptr);
  doc["prefactor"] = r.fit ? json(std::pow(10.0, r.fit->intercept)) : json(nullptr);
  doc["fit_error"] = r.fit_error;
  doc["warnings"] = r.warnings;
  doc["blow_up"] = r.blow_up ? blow_up_json(*r.blow_up) : json(nullptr);
  doc["blow_up_nu"] = r.blow_up_nu ? json(*r.blow_up_nu) : json(nullptr);
  return doc;
}

ContinuousDependenceResult continuous_dependence(const RunConfig& base, double delta, double factor) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw InvalidParameter("delta must be >= 0");
  if (!(factor > 0.0)) throw InvalidParameter("factor must be positive");
  base.validate();
  const long long total = base.total_steps();
  const IfRk4Stepper stepper(base.grid, base.spec, base.dt, options_for(base));

  MhdState a = make_initial_data(base.init, base.grid);
  MhdState b = a;
  if (delta > 0.0) {
    VectorField pu = random_solenoidal_field(base.grid, base.init.band, ~(2 * base.init.seed), 1.0);
    VectorField pb = random_solenoidal_field(base.grid, base.init.band, ~(2 * base.init.seed + 1), 1.0);
    const double size = h1_pair(pu, pb);
    b.u.axpy(delta / size, pu);
    b.b.axpy(delta / size, pb);
  }

  ContinuousDependenceResult out;
  out.delta = delta;
  out.factor = factor;
  auto sample = [&] {
    const double d = h1_pair(b.u - a.u, b.b - a.b);
    out.times.push_back(a.t);
    out.diff_h1.push_back(d);
    out.sup_diff_h1 = std::max(out.sup_diff_h1, d);
  };
  sample();
  for (long long step = 1; step <= total; ++step) {
    try {
      stepper.step(a);
      stepper.step(b);
    } catch (const BlowUpError& e) {
      out.blow_up = BlowUpRecord{e.time(), step, e.max_amplitude()};
      break;
    }
    if (step % base.sample_every == 0 || step == total) sample();
  }
  out.ratio = delta > 0.0 ? out.sup_diff_h1 / delta : 0.0;
  out.bounded = !out.blow_up && out.ratio <= factor;
  return out;
}

json to_json(const ContinuousDependenceResult& r) {
  json doc{{"kind", "continuous_dependence"},
           {"delta", r.delta},
           {"sup_diff_h1", r.sup_diff_h1},
           {"ratio", r.ratio},
           {"factor", r.factor},
           {"bounded", r.bounded},
           {"times", r.times},
           {"diff_h1", r.diff_h1}};
  doc["blow_up"] = r.blow_up ? blow_up_json(*r.blow_up) : json(nullptr);
  return doc;
}

LinearValidationResult linear_validate(const Grid& grid, const DissipationSpec& spec, int count, int band,
                                       std::uint64_t seed, double dt, double t_end) {
  grid.validate();
  spec.validate();
  const int limit = std::min({grid.dealias_cutoff(Axis::x1), grid.dealias_cutoff(Axis::x2),
                              grid.dealias_cutoff(Axis::x3)});
  if (band < 1 || band > limit) throw InvalidParameter("linear_validate: band outside the resolved range");
  const long long available = (2LL * band + 1) * (2LL * band + 1) * (2LL * band + 1) / 2;
  if (count < 1 || count > available) throw InvalidParameter("linear_validate: invalid mode count");
  if (!(dt > 0.0) || !(t_end >= 0.0)) throw InvalidParameter("linear_validate: invalid time parameters");
  const long long steps = std::llround(t_end / dt);
  if (std::abs(double(steps) * dt - t_end) > 1e-9 * std::max(1.0, t_end)) {
    throw InvalidParameter("linear_validate: t_end must be a multiple of dt");
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(-band, band);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::set<std::array<int, 3>> chosen;
  std::vector<std::array<int, 3>> modes;
  std::vector<ModeAmplitudes> inits;
  MhdState state(grid);
  const double scale = grid.wavenumber_scale();
  while (int(modes.size()) < count) {
    const std::array<int, 3> m{pick(rng), pick(rng), std::abs(pick(rng))};
    const bool representative = m[2] > 0 || (m[2] == 0 && (m[1] > 0 || (m[1] == 0 && m[0] > 0)));
    if (!representative || !chosen.insert(m).second) continue;
    const Wavevector k{scale * m[0], scale * m[1], scale * m[2]};
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    ModeAmplitudes amp{};
    double largest = 0.0;
    for (int f = 0; f < 2; ++f) {
      std::array<Complex, 3> v;
      for (auto& x : v) x = Complex(normal(rng), normal(rng));
      const Complex kv = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
      for (int c = 0; c < 3; ++c) {
        amp[std::size_t(3 * f + c)] = v[std::size_t(c)] - k[std::size_t(c)] * kv / k2;
        largest = std::max(largest, std::abs(amp[std::size_t(3 * f + c)]));
      }
    }
    for (auto& x : amp) x /= largest;
    for (int c = 0; c < 3; ++c) {
      state.u[c].set_coeff(m[0], m[1], m[2], amp[std::size_t(c)]);
      state.b[c].set_coeff(m[0], m[1], m[2], amp[std::size_t(3 + c)]);
    }
    modes.push_back(m);
    inits.push_back(amp);
  }

  const IfRk4Stepper stepper(grid, spec, dt, RhsOptions{false, true, NonlinearForm::kFlux});
  for (long long s = 0; s < steps; ++s) stepper.step(state);

  LinearValidationResult out;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const auto& m = modes[i];
    const Wavevector k{scale * m[0], scale * m[1], scale * m[2]};
    const ModeAmplitudes exact = linear_mode_oracle(spec, k, inits[i], double(steps) * dt);
    double err = 0.0;
    for (int c = 0; c < 3; ++c) {
      err = std::max(err, std::abs(state.u[c].coeff(m[0], m[1], m[2]) - exact[std::size_t(c)]));
      err = std::max(err, std::abs(state.b[c].coeff(m[0], m[1], m[2]) - exact[std::size_t(3 + c)]));
    }
    out.modes.push_back(k);
    out.errors.push_back(err);
    out.max_error = std::max(out.max_error, err);
  }
  return out;
}

json to_json(const LinearValidationResult& r) {
  json modes = json::array();
  for (const Wavevector& k : r.modes) modes.push_back({k[0], k[1], k[2]});
  return json{{"kind", "linear_validation"}, {"modes", modes}, {"errors", r.errors}, {"max_error", r.max_error}};
}

}  // namespace amhd
