#include "amhd/diagnostics.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "amhd/errors.hpp"
#include "amhd/spectral_ops.hpp"

namespace amhd {

namespace {
double abs_pow(double k, double p) { return p == 0.0 ? 1.0 : std::pow(std::abs(k), p); }

void check_order(int order) {
  if (order != 0 && order != 1 && order != 3) {
    throw InvalidParameter("unsupported Sobolev order " + std::to_string(order) + " (expected 0, 1 or 3)");
  }
}

// |k_a|^p per grid index along each axis; spectral sums look these up instead of calling pow per mode.
struct AxisPowers {
  std::array<std::vector<double>, 3> table;

  AxisPowers(const Grid& g, double p) {
    for (Axis a : {Axis::x1, Axis::x2, Axis::x3}) {
      auto& t = table[std::size_t(index_of(a))];
      t.resize(std::size_t(g.n(a)));
      for (int i = 0; i < g.n(a); ++i) t[std::size_t(i)] = abs_pow(g.wavenumber_scale() * g.mode_number(a, i), p);
    }
  }
  double operator()(int axis, int i) const { return table[std::size_t(axis)][std::size_t(i)]; }
  double sum(int i1, int i2, int i3) const { return table[0][std::size_t(i1)] + table[1][std::size_t(i2)] + table[2][std::size_t(i3)]; }
};

// Weight of order m as a lookup: 1 + sum_i k_i^{2m}, or the Bessel weight.
class WeightTable {
 public:
  WeightTable(const Grid& g, int order, SobolevWeight weight)
      : grid_(g), order_(order), weight_(weight), powers_(g, 2.0 * order) {}

  double operator()(int i1, int i2, int i3) const {
    if (order_ == 0) return 1.0;
    if (weight_ == SobolevWeight::kBessel) return sobolev_weight(wavevector_at(grid_, i1, i2, i3), order_, weight_);
    return 1.0 + powers_.sum(i1, i2, i3);
  }

 private:
  Grid grid_;
  int order_;
  SobolevWeight weight_;
  AxisPowers powers_;
};

double weighted_energy(const SpectralScalar& f, const WeightTable& w) {
  const Grid& g = f.grid();
  const Complex* c = f.data();
  const double s = sum_over_spectrum(g, [&](int i1, int i2, int i3, std::size_t idx) {
    return w(i1, i2, i3) * std::norm(c[idx]);
  });
  return g.volume() * s;
}
}  // namespace

double sobolev_weight(const Wavevector& k, int order, SobolevWeight weight) {
  if (order == 0) return 1.0;
  if (weight == SobolevWeight::kBessel) {
    return std::pow(1.0 + k[0] * k[0] + k[1] * k[1] + k[2] * k[2], order);
  }
  const double p = 2.0 * order;
  return 1.0 + std::pow(k[0], p) + std::pow(k[1], p) + std::pow(k[2], p);
}

double h_s_norm(const SpectralScalar& f, int order, SobolevWeight weight) {
  check_order(order);
  return std::sqrt(weighted_energy(f, WeightTable(f.grid(), order, weight)));
}

double h_s_norm(const VectorField& v, int order, SobolevWeight weight) {
  check_order(order);
  const WeightTable w(v.grid(), order, weight);
  return std::sqrt(weighted_energy(v[0], w) + weighted_energy(v[1], w) + weighted_energy(v[2], w));
}

double anisotropic_pair_norm(const SpectralScalar& b_component, Axis component, double beta, int order) {
  check_order(order);
  if (!(beta >= 0.0)) throw InvalidParameter("beta must be >= 0");
  const auto [j, l] = other_axes(component);
  const Grid& g = b_component.grid();
  const Complex* c = b_component.data();
  const AxisPowers kp(g, 2.0 * beta);
  const WeightTable w(g, order, SobolevWeight::kAxisDerivative);
  const int aj = index_of(j), al = index_of(l);
  const double s = sum_over_spectrum(g, [&](int i1, int i2, int i3, std::size_t idx) {
    const int i[3] = {i1, i2, i3};
    return (kp(aj, i[aj]) + kp(al, i[al])) * w(i1, i2, i3) * std::norm(c[idx]);
  });
  return std::sqrt(g.volume() * s);
}

DissipationIntegrands dissipation_integrands(const MhdState& state, const DissipationSpec& spec, int order) {
  check_order(order);
  const Grid& g = state.grid();
  const Complex* uc[3] = {state.u[0].data(), state.u[1].data(), state.u[2].data()};
  const Complex* bc[3] = {state.b[0].data(), state.b[1].data(), state.b[2].data()};
  const AxisPowers ka(g, 2.0 * spec.alpha);
  const AxisPowers kb(g, 2.0 * spec.beta);
  const WeightTable w(g, order, SobolevWeight::kAxisDerivative);
  // Three separate fixed-order sums keep each integrand reproducible.
  auto sum = [&](auto&& integrand) {
    return g.volume() * sum_over_spectrum(g, [&](int i1, int i2, int i3, std::size_t idx) {
             return w(i1, i2, i3) * integrand(i1, i2, i3, idx);
           });
  };
  auto u_sq = [&](std::size_t idx) { return std::norm(uc[0][idx]) + std::norm(uc[1][idx]) + std::norm(uc[2][idx]); };
  DissipationIntegrands out;
  out.horizontal = sum([&](int i1, int i2, int, std::size_t idx) {
    return (spec.nu1 * ka(0, i1) + spec.nu2 * ka(1, i2)) * u_sq(idx);
  });
  if (spec.sigma != 0 && spec.nu3 != 0.0) {
    out.vertical = sum([&](int, int, int i3, std::size_t idx) { return spec.nu3 * ka(2, i3) * u_sq(idx); });
  }
  out.magnetic = sum([&](int i1, int i2, int i3, std::size_t idx) {
    const double a1 = kb(0, i1), a2 = kb(1, i2), a3 = kb(2, i3);
    return spec.mu * ((a2 + a3) * std::norm(bc[0][idx]) + (a1 + a3) * std::norm(bc[1][idx]) +
                      (a1 + a2) * std::norm(bc[2][idx]));
  });
  return out;
}

void EnergyLedger::accumulate(const MhdState& state, const DissipationSpec& spec, double dt) {
  LedgerRow row;
  row.time = state.t;
  const double h3u = h_s_norm(state.u, 3);
  const double h3b = h_s_norm(state.b, 3);
  const double h1u = h_s_norm(state.u, 1);
  const double h1b = h_s_norm(state.b, 1);
  row.h3_sq_u = h3u * h3u;
  row.h3_sq_b = h3b * h3b;
  row.h1_sq_u = h1u * h1u;
  row.h1_sq_b = h1b * h1b;
  row.rates = dissipation_integrands(state, spec, 3);
  row.div_residual_u = divergence_residual(state.u);
  row.div_residual_b = divergence_residual(state.b);
  const double h3 = row.h3_sq_u + row.h3_sq_b;

  if (rows_.empty()) {
    e0_ = h3;
    row.sup_h3_sq = h3;
  } else {
    const LedgerRow& last = rows_.back();
    if (!(state.t > last.time)) throw InvalidParameter("ledger time must increase");
    if (!(dt > 0.0) || std::abs(state.t - (last.time + dt)) > 1e-9 * (1.0 + std::abs(state.t))) {
      throw InvalidParameter("ledger step dt does not match the state time");
    }
    row.horiz_diss = last.horiz_diss + 0.5 * dt * (last.rates.horizontal + row.rates.horizontal);
    row.vert_diss = last.vert_diss + 0.5 * dt * (last.rates.vertical + row.rates.vertical);
    row.mag_diss = last.mag_diss + 0.5 * dt * (last.rates.magnetic + row.rates.magnetic);
    row.sup_h3_sq = std::max(last.sup_h3_sq, h3);
  }
  row.energy_E = row.sup_h3_sq + row.horiz_diss + row.vert_diss + row.mag_diss;
  row.c_bootstrap = row.energy_E > 0.0 ? (row.energy_E - e0_) / std::pow(row.energy_E, 1.5) : 0.0;
  rows_.push_back(row);
}

EnergyLedger EnergyLedger::resume(const LedgerRow& last, double e0) {
  EnergyLedger ledger;
  ledger.rows_.push_back(last);
  ledger.e0_ = e0;
  return ledger;
}

const LedgerRow& EnergyLedger::row_at(double t) const {
  if (rows_.empty()) throw InvalidParameter("ledger is empty");
  const double slack = 1e-12 * (1.0 + std::abs(t));
  if (t < rows_.front().time - slack || t > rows_.back().time + slack) {
    throw InvalidParameter("time " + std::to_string(t) + " outside the recorded range");
  }
  const LedgerRow* found = &rows_.front();
  for (const auto& r : rows_) {
    if (r.time <= t + slack) found = &r;
  }
  return *found;
}

double EnergyLedger::energy_at(double t) const { return row_at(t).energy_E; }

BootstrapReport EnergyLedger::bootstrap_ratio(double t, double threshold) const {
  const LedgerRow& r = row_at(t);
  BootstrapReport rep;
  rep.t = r.time;
  rep.e0 = e0_;
  rep.et = r.energy_E;
  rep.c_est = rep.et > 0.0 ? (rep.et - rep.e0) / std::pow(rep.et, 1.5) : 0.0;
  rep.flagged = rep.c_est > threshold;
  return rep;
}

const char* DiagnosticsCsv::header() {
  return "time,h3_sq_u,h3_sq_b,h1_sq_u,h1_sq_b,horiz_diss,vert_diss,mag_diss,energy_E,div_residual_u,div_residual_b,"
         "c_bootstrap";
}

DiagnosticsCsv::DiagnosticsCsv(const std::filesystem::path& path) : os_(path, std::ios::trunc) {
  if (!os_) throw IoError("cannot open " + path.string() + " for writing");
  os_ << header() << '\n';
}

void DiagnosticsCsv::write(const LedgerRow& r) {
  const double values[] = {r.time,      r.h3_sq_u,   r.h3_sq_b,  r.h1_sq_u,        r.h1_sq_b,        r.horiz_diss,
                           r.vert_diss, r.mag_diss,  r.energy_E, r.div_residual_u, r.div_residual_b, r.c_bootstrap};
  char buf[32];
  bool first = true;
  for (double v : values) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    if (!first) os_ << ',';
    os_ << buf;
    first = false;
  }
  os_ << '\n';
  os_.flush();
  if (!os_) throw IoError("failed writing diagnostics row");
}

std::vector<LedgerRow> read_diagnostics_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line) || line != DiagnosticsCsv::header()) {
    throw IoError(path.string() + ": diagnostics header mismatch");
  }
  std::vector<LedgerRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double x = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') throw IoError(path.string() + ": bad number '" + cell + "'");
      v.push_back(x);
    }
    if (v.size() != 12) throw IoError(path.string() + ": expected 12 columns");
    LedgerRow r;
    r.time = v[0];
    r.h3_sq_u = v[1];
    r.h3_sq_b = v[2];
    r.h1_sq_u = v[3];
    r.h1_sq_b = v[4];
    r.horiz_diss = v[5];
    r.vert_diss = v[6];
    r.mag_diss = v[7];
    r.energy_E = v[8];
    r.div_residual_u = v[9];
    r.div_residual_b = v[10];
    r.c_bootstrap = v[11];
    rows.push_back(r);
  }
  return rows;
}

}  // namespace amhd
