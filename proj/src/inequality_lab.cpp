#include "amhd/inequality_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "amhd/errors.hpp"
#include "amhd/spectral_ops.hpp"

namespace amhd {

namespace {
double abs_pow(double k, double p) { return p == 0.0 ? 1.0 : std::pow(std::abs(k), p); }

// A single representative of each +-k pair.
bool is_representative(int k1, int k2, int k3) {
  if (k3 != 0) return k3 > 0;
  if (k2 != 0) return k2 > 0;
  return k1 > 0;
}

double ratio_or_zero(double lhs, double rhs) {
  if (lhs == 0.0) return 0.0;
  return lhs / rhs;
}

double l2_norm(const SpectralScalar& f) { return monomial_norm(f, {0.0, 0.0, 0.0}); }
}  // namespace

void RandomFieldSpec::validate() const {
  grid.validate();
  const int limit = std::min({grid.n1, grid.n2, grid.n3}) / 3;
  if (band < 1 || band > limit) {
    throw InvalidParameter("band must lie in [1, " + std::to_string(limit) + "], got " + std::to_string(band));
  }
  if (!(amplitude_decay >= 0.0)) throw InvalidParameter("amplitude_decay must be >= 0");
}

SpectralScalar generate_field(const RandomFieldSpec& spec) {
  spec.validate();
  SpectralScalar f(spec.grid);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int b = spec.band;
  for (int k1 = -b; k1 <= b; ++k1) {
    for (int k2 = -b; k2 <= b; ++k2) {
      for (int k3 = 0; k3 <= b; ++k3) {
        if (!is_representative(k1, k2, k3)) continue;
        const double re = normal(rng);
        const double im = normal(rng);
        const double kn = std::sqrt(double(k1 * k1 + k2 * k2 + k3 * k3));
        const double envelope = std::pow(kn, -spec.amplitude_decay);
        f.set_coeff(k1, k2, k3, envelope * Complex(re, im));
      }
    }
  }
  return f;
}

double monomial_norm(const SpectralScalar& f, const std::array<double, 3>& exponents) {
  const Grid& g = f.grid();
  const Complex* c = f.data();
  const double s = sum_over_spectrum(g, [&](int i1, int i2, int i3, std::size_t idx) {
    const Wavevector k = wavevector_at(g, i1, i2, i3);
    double w = 1.0;
    for (std::size_t a = 0; a < 3; ++a) w *= abs_pow(k[a], 2.0 * exponents[a]);
    return w * std::norm(c[idx]);
  });
  return std::sqrt(g.volume() * s);
}

double axis_sobolev_norm(const SpectralScalar& f, int order) {
  if (order < 0) throw InvalidParameter("Sobolev order must be >= 0");
  const Grid& g = f.grid();
  const Complex* c = f.data();
  const double s = sum_over_spectrum(g, [&](int i1, int i2, int i3, std::size_t idx) {
    const Wavevector k = wavevector_at(g, i1, i2, i3);
    const double w = order == 0 ? 1.0 : 1.0 + std::pow(k[0], 2 * order) + std::pow(k[1], 2 * order) + std::pow(k[2], 2 * order);
    return w * std::norm(c[idx]);
  });
  return std::sqrt(g.volume() * s);
}

void InequalityReport::record(double ratio) {
  ++trials;
  if (!std::isfinite(ratio)) {
    ++violations;
    max_ratio = std::numeric_limits<double>::infinity();
    return;
  }
  max_ratio = std::max(max_ratio, ratio);
  if (hard && ratio > 1.0 + tolerance) ++violations;
}

nlohmann::json to_json(const InequalityReport& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["trials"] = r.trials;
  j["max_ratio"] = r.max_ratio;
  j["violations"] = r.violations;
  j["tolerance"] = r.tolerance;
  j["seed_range"] = {r.seed_first, r.seed_last};
  j["grid"] = {r.grid.n1, r.grid.n2, r.grid.n3};
  j["reconstructed"] = r.reconstructed;
  j["hard"] = r.hard;
  return j;
}

nlohmann::json to_json(const std::vector<InequalityReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr;
}

double AnisotropicInterpolation::interpolation_ratio() const { return ratio_or_zero(lhs, middle); }
double AnisotropicInterpolation::sobolev_ratio() const { return ratio_or_zero(middle, sobolev); }

AnisotropicInterpolation check_lemma_2_4(const SpectralScalar& f, Axis i, Axis j, int m, int n, double s) {
  if (!(s > 0.0 && s < 1.0)) throw InvalidParameter("s must lie in (0, 1)");
  if (i == j) throw InvalidParameter("axes i and j must differ");
  if (m < 0 || n < 0) throw InvalidParameter("derivative orders must be >= 0");
  const auto ii = std::size_t(index_of(i));
  const auto jj = std::size_t(index_of(j));
  auto exps = [&](double ei, double ej) {
    std::array<double, 3> e{0.0, 0.0, 0.0};
    e[ii] = ei;
    e[jj] = ej;
    return e;
  };
  AnisotropicInterpolation out;
  out.lhs = monomial_norm(f, exps(m + 1, n + s));
  const double a = monomial_norm(f, exps(m + s, n + 1));
  const double b = monomial_norm(f, exps(m + 1 + s, n));
  out.middle = std::pow(a, s) * std::pow(b, 1.0 - s);
  out.sobolev = axis_sobolev_norm(directional_fractional(f, i, s), m + n + 1);
  return out;
}

namespace {
double lq_norm(const RealField& f, double q) {
  const std::span<const double> v = f.values();
  if (std::isinf(q)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x), q);
  return std::pow(s * f.grid().cell_volume(), 1.0 / q);
}

// ||f||^{1-1/(2e)} ||Lambda_axis^e f||^{1/(2e)}
double fractional_factor(const SpectralScalar& f, Axis axis, double e) {
  std::array<double, 3> ex{0.0, 0.0, 0.0};
  ex[std::size_t(index_of(axis))] = e;
  const double w = 1.0 / (2.0 * e);
  return std::pow(l2_norm(f), 1.0 - w) * std::pow(monomial_norm(f, ex), w);
}
}  // namespace

RatioCheck check_interpolation_Lq(const SpectralScalar& f, double q, double s) {
  if (!(q >= 2.0)) throw InvalidParameter("q must lie in [2, infinity]");
  const double gap = 0.5 - (std::isinf(q) ? 0.0 : 1.0 / q);
  if (!(s > 3.0 * gap)) throw InvalidParameter("interpolation requires s > 3 (1/2 - 1/q)");
  const double theta = 3.0 / s * gap;
  RatioCheck out;
  out.lhs = lq_norm(f.to_physical(), q);
  const Grid& g = f.grid();
  const Complex* c = f.data();
  const double lam = std::sqrt(g.volume() * sum_over_spectrum(g, [&](int i1, int i2, int i3, std::size_t idx) {
                                 const Wavevector k = wavevector_at(g, i1, i2, i3);
                                 const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
                                 return (k2 == 0.0 ? 0.0 : std::pow(k2, s)) * std::norm(c[idx]);
                               }));
  out.rhs = theta == 0.0 ? l2_norm(f) : std::pow(l2_norm(f), 1.0 - theta) * std::pow(lam, theta);
  out.ratio = ratio_or_zero(out.lhs, out.rhs);
  return out;
}

const char* to_string(TripleProductForm form) {
  return form == TripleProductForm::kFractional ? "fractional" : "mixed";
}

RatioCheck check_triple_product(const SpectralScalar& f, const SpectralScalar& g, const SpectralScalar& h,
                                const std::array<Axis, 3>& axes, const std::array<double, 3>& exponents,
                                TripleProductForm form) {
  if (!(f.grid() == g.grid()) || !(f.grid() == h.grid())) throw GridMismatch();
  if (axes[0] == axes[1] || axes[0] == axes[2] || axes[1] == axes[2]) {
    throw InvalidParameter("triple product needs three distinct axes (eps_ijk != 0)");
  }
  for (double e : exponents) {
    if (!(e > 0.5 && e <= 1.0)) throw InvalidParameter("triple product exponents must lie in (1/2, 1]");
  }
  const RealField fp = f.to_physical();
  const RealField gp = g.to_physical();
  const RealField hp = h.to_physical();
  double integral = 0.0;
  for (std::size_t x = 0; x < fp.values().size(); ++x) {
    integral += std::abs(fp.values()[x] * gp.values()[x] * hp.values()[x]);
  }
  RatioCheck out;
  out.lhs = integral * f.grid().cell_volume();
  double third = 0.0;
  if (form == TripleProductForm::kFractional) {
    third = fractional_factor(h, axes[2], exponents[2]);
  } else {
    std::array<double, 3> ex{0.0, 0.0, 0.0};
    ex[std::size_t(index_of(axes[2]))] = 1.0;
    third = std::sqrt(l2_norm(h) * monomial_norm(h, ex));
  }
  out.rhs = fractional_factor(f, axes[0], exponents[0]) * fractional_factor(g, axes[1], exponents[1]) * third;
  out.ratio = ratio_or_zero(out.lhs, out.rhs);
  return out;
}

namespace {
constexpr std::array<std::array<Axis, 2>, 6> kAxisPairs = {{{Axis::x1, Axis::x2},
                                                            {Axis::x2, Axis::x1},
                                                            {Axis::x1, Axis::x3},
                                                            {Axis::x3, Axis::x1},
                                                            {Axis::x2, Axis::x3},
                                                            {Axis::x3, Axis::x2}}};

constexpr std::array<std::array<Axis, 3>, 6> kPermutations = {{{Axis::x1, Axis::x2, Axis::x3},
                                                               {Axis::x2, Axis::x3, Axis::x1},
                                                               {Axis::x3, Axis::x1, Axis::x2},
                                                               {Axis::x1, Axis::x3, Axis::x2},
                                                               {Axis::x3, Axis::x2, Axis::x1},
                                                               {Axis::x2, Axis::x1, Axis::x3}}};

RandomFieldSpec field_spec(const TrialConfig& c, std::uint64_t seed) {
  return RandomFieldSpec{c.grid, c.band, seed, c.amplitude_decay};
}

InequalityReport make_report(std::string name, const TrialConfig& c, std::uint64_t seed_last, double tol, bool hard) {
  InequalityReport r;
  r.name = std::move(name);
  r.tolerance = tol;
  r.seed_first = c.seed;
  r.seed_last = seed_last;
  r.grid = c.grid;
  r.hard = hard;
  return r;
}
}  // namespace

std::array<InequalityReport, 2> lemma_2_4_trials(const TrialConfig& config, double tolerance) {
  static constexpr double kS[3] = {0.55, 0.75, 1.0 - 1e-9};
  const std::uint64_t last = config.seed + (config.trials == 0 ? 0 : config.trials - 1);
  std::array<InequalityReport, 2> reports = {
      make_report("anisotropic_interpolation", config, last, tolerance, true),
      make_report("anisotropic_interpolation_sobolev_bound", config, last, tolerance, true)};
  std::vector<AnisotropicInterpolation> results(config.trials);
  parallel_for(int(config.trials), [&](int t) {
    const auto trial = std::size_t(t);
    const SpectralScalar f = generate_field(field_spec(config, config.seed + trial));
    const int m = int(trial % 3);
    const int n = int((trial / 3) % 3);
    const double s = kS[(trial / 9) % 3];
    const auto& pair = kAxisPairs[(trial / 27) % 6];
    results[trial] = check_lemma_2_4(f, pair[0], pair[1], m, n, s);
  });
  for (const auto& r : results) {
    reports[0].record(r.interpolation_ratio());
    reports[1].record(r.sobolev_ratio());
  }
  return reports;
}

InequalityReport interpolation_trials(const TrialConfig& config) {
  struct QS {
    double q, s;
  };
  static const QS kPairs[] = {{3.0, 1.0}, {4.0, 1.0}, {6.0, 1.5}, {4.0, 2.0},
                              {std::numeric_limits<double>::infinity(), 2.0},
                              {std::numeric_limits<double>::infinity(), 1.75}};
  const std::uint64_t last = config.seed + (config.trials == 0 ? 0 : config.trials - 1);
  InequalityReport report = make_report("lq_interpolation", config, last, 0.0, false);
  std::vector<double> ratios(config.trials);
  parallel_for(int(config.trials), [&](int t) {
    const auto trial = std::size_t(t);
    const SpectralScalar f = generate_field(field_spec(config, config.seed + trial));
    const QS& qs = kPairs[trial % std::size(kPairs)];
    ratios[trial] = check_interpolation_Lq(f, qs.q, qs.s).ratio;
  });
  for (double r : ratios) report.record(r);
  return report;
}

InequalityReport triple_product_trials(const TrialConfig& config, TripleProductForm form) {
  static constexpr double kE[4] = {0.55, 0.7, 0.85, 1.0};
  const std::uint64_t last = config.seed + 3 * (config.trials == 0 ? 0 : config.trials - 1) + 2;
  InequalityReport report =
      make_report(std::string("triple_product_") + to_string(form), config, last, 0.0, false);
  report.reconstructed = true;
  std::vector<double> ratios(config.trials);
  parallel_for(int(config.trials), [&](int t) {
    const auto trial = std::size_t(t);
    const std::uint64_t base = config.seed + 3 * trial;
    const SpectralScalar f = generate_field(field_spec(config, base));
    const SpectralScalar g = generate_field(field_spec(config, base + 1));
    const SpectralScalar h = generate_field(field_spec(config, base + 2));
    const auto& axes = kPermutations[trial % 6];
    const std::array<double, 3> e = {kE[trial % 4], kE[(trial / 4) % 4], kE[(trial / 16) % 4]};
    ratios[trial] = check_triple_product(f, g, h, axes, e, form).ratio;
  });
  for (double r : ratios) report.record(r);
  return report;
}

}  // namespace amhd
