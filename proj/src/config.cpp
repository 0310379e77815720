#include "amhd/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>

#include "amhd/errors.hpp"

namespace amhd {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw InvalidParameter(where + ": expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!keys.contains(item.key())) throw InvalidParameter(where + ": unknown key '" + item.key() + "'");
  }
}

template <class T>
T required(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) throw InvalidParameter(where + ": missing key '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidParameter(where + "." + key + ": " + e.what());
  }
}

template <class T>
T optional(const json& obj, const std::string& where, const char* key, T fallback) {
  return obj.contains(key) ? required<T>(obj, where, key) : fallback;
}

}  // namespace

const char* to_string(NonlinearForm form) { return form == NonlinearForm::kFlux ? "flux" : "convective"; }

NonlinearForm nonlinear_form_from_string(const std::string& name) {
  if (name == "flux") return NonlinearForm::kFlux;
  if (name == "convective") return NonlinearForm::kConvective;
  throw InvalidParameter("nonlinear_form must be 'flux' or 'convective', got '" + name + "'");
}

void RunConfig::validate() const {
  grid.validate();
  spec.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParameter("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InvalidParameter("t_end must be non-negative");
  if (sample_every < 1) throw InvalidParameter("sample_every must be >= 1");
  if (checkpoint_every < 0) throw InvalidParameter("checkpoint_every must be >= 0");
  if (!(init.epsilon >= 0.0) || !std::isfinite(init.epsilon)) throw InvalidParameter("init.epsilon must be >= 0");
  if (init.band < 1 || init.band > std::min({grid.dealias_cutoff(Axis::x1), grid.dealias_cutoff(Axis::x2),
                                             grid.dealias_cutoff(Axis::x3)})) {
    throw InvalidParameter("init.band must lie within the dealiasing cutoff");
  }
  total_steps();
}

long long RunConfig::total_steps() const {
  const double steps = t_end / dt;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
    throw InvalidParameter("t_end must be an integer multiple of dt");
  }
  return static_cast<long long>(rounded);
}

json to_json(const DissipationSpec& s) {
  return json{{"alpha", s.alpha}, {"beta", s.beta}, {"nu1", s.nu1},   {"nu2", s.nu2},
              {"nu3", s.nu3},     {"sigma", s.sigma}, {"mu", s.mu}, {"experimental_override", s.experimental_override}};
}

DissipationSpec dissipation_from_json(const json& doc) {
  const std::string where = "dissipation";
  reject_unknown(doc, where, {"alpha", "beta", "nu1", "nu2", "nu3", "sigma", "mu", "experimental_override"});
  DissipationSpec s;
  s.alpha = optional(doc, where, "alpha", s.alpha);
  s.beta = optional(doc, where, "beta", s.beta);
  s.nu1 = optional(doc, where, "nu1", s.nu1);
  s.nu2 = optional(doc, where, "nu2", s.nu2);
  s.nu3 = optional(doc, where, "nu3", s.nu3);
  s.sigma = optional(doc, where, "sigma", s.sigma);
  s.mu = optional(doc, where, "mu", s.mu);
  s.experimental_override = optional(doc, where, "experimental_override", s.experimental_override);
  if (s.sigma != 0 && s.sigma != 1) throw InvalidParameter("dissipation.sigma must be 0 or 1");
  return s;
}

RunConfig config_from_json(const json& doc) {
  reject_unknown(doc, "config",
                 {"grid", "dissipation", "dt", "t_end", "sample_every", "init", "outputs", "checkpoint_every",
                  "nonlinear_form"});
  RunConfig c;

  const json& g = doc.contains("grid") ? doc.at("grid") : throw InvalidParameter("config: missing key 'grid'");
  reject_unknown(g, "grid", {"n1", "n2", "n3", "length"});
  c.grid.n1 = required<int>(g, "grid", "n1");
  c.grid.n2 = required<int>(g, "grid", "n2");
  c.grid.n3 = required<int>(g, "grid", "n3");
  c.grid.length = optional(g, "grid", "length", c.grid.length);

  if (doc.contains("dissipation")) c.spec = dissipation_from_json(doc.at("dissipation"));
  c.dt = required<double>(doc, "config", "dt");
  c.t_end = required<double>(doc, "config", "t_end");
  c.sample_every = optional(doc, "config", "sample_every", c.sample_every);

  const json& init = doc.contains("init") ? doc.at("init") : throw InvalidParameter("config: missing key 'init'");
  reject_unknown(init, "init", {"seed", "band", "epsilon", "amplitude_decay"});
  c.init.seed = required<std::uint64_t>(init, "init", "seed");
  c.init.band = optional(init, "init", "band", c.init.band);
  c.init.epsilon = required<double>(init, "init", "epsilon");
  c.init.amplitude_decay = optional(init, "init", "amplitude_decay", c.init.amplitude_decay);

  c.outputs = required<std::string>(doc, "config", "outputs");
  c.checkpoint_every = optional(doc, "config", "checkpoint_every", c.checkpoint_every);
  if (doc.contains("nonlinear_form")) {
    c.nonlinear_form = nonlinear_form_from_string(required<std::string>(doc, "config", "nonlinear_form"));
  }
  c.validate();
  return c;
}

json to_json(const RunConfig& c) {
  return json{
      {"grid", {{"n1", c.grid.n1}, {"n2", c.grid.n2}, {"n3", c.grid.n3}, {"length", c.grid.length}}},
      {"dissipation", to_json(c.spec)},
      {"dt", c.dt},
      {"t_end", c.t_end},
      {"sample_every", c.sample_every},
      {"init",
       {{"seed", c.init.seed},
        {"band", c.init.band},
        {"epsilon", c.init.epsilon},
        {"amplitude_decay", c.init.amplitude_decay}}},
      {"outputs", c.outputs.string()},
      {"checkpoint_every", c.checkpoint_every},
      {"nonlinear_form", to_string(c.nonlinear_form)},
  };
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidParameter("config " + path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

}  // namespace amhd
