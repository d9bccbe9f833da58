#include "casimir/lifshitz_dynamic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/quadrature.hpp"
#include "spectral.hpp"

namespace casimir {

namespace {

using constants::boltzmann;
using constants::hbar;
using constants::speed_of_light;
constexpr double pi = std::numbers::pi;

void check_velocity(double v, double fraction) {
  if (!std::isfinite(v)) throw Error(ErrorKind::invalid_argument, "velocity must be finite");
  if (std::abs(v) >= fraction * speed_of_light)
    throw Error(ErrorKind::velocity_guard, "velocity exceeds the nonrelativistic guard |V| < " +
                                               std::to_string(fraction) + " c");
}

void require_dynamic_model(const MaterialModel& m) {
  if (m.is_vacuum()) return;
  if (m.is_ideal_metal())
    throw Error(ErrorKind::invalid_model, "the moving-plate force is computed on the real axis; ideal metals are not supported");
  if (!m.lossy()) throw Error(ErrorKind::invalid_model, "the moving-plate force needs lossy materials");
}

// Im Delta1(w+) coth(hbar w+ / 2kT) for both channels.
void im_coth(const SpectralPoint& lab, double omega_plus, const ReflectionPair& r, const MaterialModel& plate1,
             double temperature, double& e, double& m) {
  if (temperature == 0.0) {
    const double s = omega_plus > 0.0 ? 1.0 : (omega_plus < 0.0 ? -1.0 : 0.0);
    e = s * r.e.imag();
    m = s * r.m.imag();
    return;
  }
  const double kt2 = 2.0 * boltzmann * temperature;
  const double x = hbar * omega_plus / kt2;
  if (std::abs(x) >= detail::thermal_limit_threshold) {
    const double c = coth_stable(x);
    e = r.e.imag() * c;
    m = r.m.imag() * c;
    return;
  }
  // coth x ~ 1/x: the product tends to (2kT/hbar) lim Im Delta(h)/h.
  const double h = 1e-4 * detail::smallest_scale({&plate1});
  const double slope_e = detail::odd_slope_at_zero(
      [&](double f) { return reflection(lab.at_frequency(f), plate1).e.imag(); }, h);
  const double slope_m = detail::odd_slope_at_zero(
      [&](double f) { return reflection(lab.at_frequency(f), plate1).m.imag(); }, h);
  e = kt2 / hbar * slope_e;
  m = kt2 / hbar * slope_m;
}

struct Plate2Values {
  cplx q0;
  double abs_q0;
  bool propagating;
  cplx d2[2];
  double coth;
};

// Both blocks for one gap, channels summed into the given slots.
void blocks(const Plate2Values& s, const DopplerAmplitude& d1, double gap, double b1[2], double b2[2]) {
  const cplx decay = std::exp(-2.0 * s.q0 * gap);
  const cplx a1[2] = {d1.e, d1.m};
  const double ic[2] = {d1.im_coth_e, d1.im_coth_m};
  for (int j = 0; j < 2; ++j) {
    const cplx x = decay * a1[j] * s.d2[j];
    if (x == 1.0) throw Error(ErrorKind::loop_divergence, "multiple-reflection series diverges (X = 1)");
    const double den = std::norm(1.0 - x);
    const cplx y = s.q0 * decay * s.d2[j];
    b1[j] = (ic[j] * y.real() + a1[j].real() * y.imag() * s.coth) / den;
    b2[j] = s.propagating ? s.abs_q0 * std::norm(a1[j]) * std::norm(s.d2[j]) * s.coth / den : 0.0;
  }
}

Plate2Values plate2_values(const SpectralPoint& p, const MaterialModel& plate2, double temperature) {
  Plate2Values s;
  s.q0 = vacuum_wavenumber(p);
  s.abs_q0 = std::abs(s.q0);
  s.propagating = p.propagating();
  const ReflectionPair r2 = reflection(p, plate2);
  s.d2[0] = r2.e;
  s.d2[1] = r2.m;
  s.coth = thermal_factor(p.omega, temperature);
  return s;
}

}  // namespace

void DynamicSystem::validate() const {
  base.validate();
  if (!(max_velocity_fraction > 0.0 && max_velocity_fraction < 1.0))
    throw Error(ErrorKind::invalid_argument, "velocity guard fraction must lie in (0, 1)");
  check_velocity(velocity, max_velocity_fraction);
}

DopplerAmplitude doppler_amplitude(const SpectralPoint& lab, double omega_plus, const MaterialModel& plate1,
                                   double temperature, CrossingPath path) {
  const SpectralPoint shifted = lab.at_frequency(omega_plus);
  const ReflectionPair r = (path == CrossingPath::continued && omega_plus < 0.0)
                               ? reflection_continued(shifted, plate1)
                               : reflection(shifted, plate1);
  DopplerAmplitude d;
  d.e = r.e;
  d.m = r.m;
  im_coth(lab, omega_plus, r, plate1, temperature, d.im_coth_e, d.im_coth_m);
  return d;
}

DynamicIntegrand dynamic_integrand(const SpectralPoint& p, const DynamicSystem& sys, CrossingPath path) {
  DynamicIntegrand out;
  const Plate2Values s = plate2_values(p, sys.base.plate2, sys.base.temperature);
  const double omega_plus = p.omega + p.kx * sys.velocity;
  const DopplerAmplitude d1 = doppler_amplitude(p, omega_plus, sys.base.plate1, sys.base.temperature, path);
  blocks(s, d1, sys.base.gap, out.block1, out.block2);
  return out;
}

double integrand_block1(const SpectralPoint& p, const DynamicSystem& sys) {
  const DynamicIntegrand d = dynamic_integrand(p, sys);
  return d.block1[0] + d.block1[1];
}

double integrand_block2(const SpectralPoint& p, const DynamicSystem& sys) {
  if (!p.propagating())
    throw Error(ErrorKind::contract_violation, "second block is defined for propagating waves only (k < w/c)");
  const DynamicIntegrand d = dynamic_integrand(p, sys);
  return d.block2[0] + d.block2[1];
}

// ---------------------------------------------------------------------------

namespace {

// Components per case.
enum Slot : std::size_t { b1e_ev, b1e_pr, b2e, b1m_ev, b1m_pr, b2m, probe, slots };

std::vector<std::size_t> term_slots(DynamicTerm t) {
  switch (t) {
    case DynamicTerm::term1: return {b1e_ev, b1e_pr, b1m_ev, b1m_pr};
    case DynamicTerm::term2: return {b2e, b2m};
    default: return {b1e_ev, b1e_pr, b2e, b1m_ev, b1m_pr, b2m};
  }
}

DynamicBatchResult batch_once(const MaterialModel& plate2, double temperature, const std::vector<DynamicCase>& cases,
                              const std::vector<DynamicCombination>& combinations, const DynamicOptions& opt,
                              double extend) {
  // Distinct (plate-1 model, velocity) pairs need their own Doppler amplitudes.
  struct Source {
    const MaterialModel* model;
    double velocity;
  };
  std::vector<Source> sources;
  std::vector<std::size_t> source_of(cases.size());
  for (std::size_t c = 0; c < cases.size(); ++c) {
    std::size_t i = 0;
    for (; i < sources.size(); ++i)
      if (*sources[i].model == cases[c].plate1 && sources[i].velocity == cases[c].velocity) break;
    if (i == sources.size()) sources.push_back({&cases[c].plate1, cases[c].velocity});
    source_of[c] = i;
  }

  std::vector<const MaterialModel*> plates{&plate2};
  double min_gap = cases.front().gap;
  double map_velocity = 0.0;
  std::vector<double> extra;
  for (const auto& c : cases) {
    plates.push_back(&c.plate1);
    min_gap = std::min(min_gap, c.gap);
    if (std::abs(c.velocity) > std::abs(map_velocity)) map_velocity = c.velocity;
    extra.push_back(speed_of_light / (2.0 * c.gap));
  }
  const double omega_max = extend * detail::omega_cutoff(plates, opt.rel_tol);
  const double probe_from = 0.5 * omega_max;
  {
    auto f = detail::characteristic_frequencies(plates);
    extra.insert(extra.end(), f.begin(), f.end());
  }
  if (temperature > 0.0) extra.push_back(boltzmann * temperature / hbar);
  const auto w_edges = detail::omega_edges(omega_max, detail::smallest_scale(plates), extra);
  std::vector<double> velocities;
  for (const auto& c : cases) velocities.push_back(c.velocity);
  const double shell = detail::shell_width(velocities);
  const std::vector<double> v_edges =
      panel_edges(0.0, 2.0, [&] {
        std::vector<double> e = {0.5, 1.0, 1.5, 1.8};
        if (shell > 0.0) e = {0.5, 1.0, 1.0 + detail::shell_span, 1.6, 1.85};
        const auto se = detail::shell_edges(velocities, shell);
        e.insert(e.end(), se.begin(), se.end());
        return e;
      }());
  const std::vector<double> a_edges = {0.0, 0.5, 1.0};
  const double kappa_scale = 1.0 / (2.0 * min_gap);
  const detail::AngleMap angles{opt.fold_kx, map_velocity};
  // -hbar/(4 pi^3) times 2 for the ky -> -ky symmetry.
  const double prefactor = -2.0 * hbar / (4.0 * pi * pi * pi);

  const std::size_t nc = slots * cases.size();
  const Integrand f = [&](std::span<const double> x, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    const double omega = x[0];
    const detail::RadialSample rs = detail::radial_sample(omega, x[1], kappa_scale, shell);
    double phi[2], jac;
    const int n_angles = angles.sample(omega, rs.k, x[2], phi, jac);
    if (jac == 0.0) return;
    const double weight = prefactor * rs.measure * jac;
    const std::size_t region = rs.propagating ? 1 : 0;

    // kx enters only through w+; |k| and q0^2 are shared by all angles.
    const SpectralPoint base = SpectralPoint::with_q0_squared(omega, rs.k, 0.0, rs.q0_squared);
    const Plate2Values s = plate2_values(base, plate2, temperature);
    std::vector<DopplerAmplitude> d1(sources.size());
    for (int a = 0; a < n_angles; ++a) {
      const double kx = rs.k * std::cos(phi[a]);
      const double ky = rs.k * std::sin(phi[a]);
      const SpectralPoint p = SpectralPoint::with_q0_squared(omega, kx, ky, rs.q0_squared);
      for (std::size_t i = 0; i < sources.size(); ++i)
        d1[i] = doppler_amplitude(p, omega + kx * sources[i].velocity, *sources[i].model, temperature);
      for (std::size_t c = 0; c < cases.size(); ++c) {
        double b1[2], b2[2];
        blocks(s, d1[source_of[c]], cases[c].gap, b1, b2);
        double* o = &out[slots * c];
        o[b1e_ev + region] += weight * b1[0];
        o[b1m_ev + region] += weight * b1[1];
        o[b2e] += weight * b2[0];
        o[b2m] += weight * b2[1];
      }
    }
    if (omega >= probe_from) {
      for (std::size_t c = 0; c < cases.size(); ++c) {
        double* o = &out[slots * c];
        o[probe] = o[b1e_ev] + o[b1e_pr] + o[b2e] + o[b1m_ev] + o[b1m_pr] + o[b2m];
      }
    }
  };

  CubatureOptions co;
  co.max_evaluations = opt.max_evaluations;
  auto make_target = [&](std::size_t c, DynamicTerm t, double rel, double abs, std::ptrdiff_t ref) {
    Target tg;
    tg.weights.assign(nc, 0.0);
    for (auto s : term_slots(t)) tg.weights[slots * c + s] = 1.0;
    tg.rel_tol = rel;
    tg.abs_tol = abs;
    tg.relative_to = ref;
    return tg;
  };
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto total_index = static_cast<std::ptrdiff_t>(co.targets.size());
    const double term_rel = opt.resolve_terms ? opt.rel_tol : 1.0;
    co.targets.push_back(make_target(c, DynamicTerm::total, opt.rel_tol, opt.abs_tol, -1));
    co.targets.push_back(make_target(c, DynamicTerm::term1, term_rel, opt.abs_tol, total_index));
    co.targets.push_back(make_target(c, DynamicTerm::term2, term_rel, opt.abs_tol, total_index));
  }
  const std::size_t first_combination = co.targets.size();
  for (const auto& comb : combinations) {
    Target tg;
    tg.weights.assign(nc, 0.0);
    for (const auto& part : comb.parts) {
      if (part.case_index >= cases.size())
        throw Error(ErrorKind::invalid_argument, "combination refers to a missing case");
      for (auto s : term_slots(part.term)) tg.weights[slots * part.case_index + s] += part.weight;
    }
    tg.rel_tol = comb.rel_tol;
    tg.abs_tol = comb.abs_tol;
    if (comb.relative_to >= 0) {
      if (static_cast<std::size_t>(comb.relative_to) >= combinations.size())
        throw Error(ErrorKind::invalid_argument, "combination refers to a missing combination");
      tg.relative_to = static_cast<std::ptrdiff_t>(first_combination) + comb.relative_to;
    }
    co.targets.push_back(std::move(tg));
  }

  const CubatureResult r = cubature(f, 3, nc, tensor_boxes({w_edges, v_edges, a_edges}), co);

  DynamicBatchResult out;
  out.converged = r.converged;
  out.evaluations = r.evaluations;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const double* v = &r.values[slots * c];
    DynamicPressureResult d;
    d.term1 = v[b1e_ev] + v[b1e_pr] + v[b1m_ev] + v[b1m_pr];
    d.term2 = v[b2e] + v[b2m];
    d.total = r.target_values[3 * c];
    d.electric = v[b1e_ev] + v[b1e_pr] + v[b2e];
    d.magnetic = v[b1m_ev] + v[b1m_pr] + v[b2m];
    d.truncation_error = std::abs(v[probe]);
    d.total_error = r.target_errors[3 * c] + d.truncation_error;
    d.term1_error = r.target_errors[3 * c + 1] + d.truncation_error;
    d.term2_error = r.target_errors[3 * c + 2];
    d.omega_cutoff = omega_max;
    d.converged = r.converged;
    d.evaluations = r.evaluations;
    out.cases.push_back(d);
  }
  for (std::size_t i = 0; i < combinations.size(); ++i) {
    out.combination_values.push_back(r.target_values[first_combination + i]);
    out.combination_errors.push_back(r.target_errors[first_combination + i]);
  }
  return out;
}

}  // namespace

DynamicBatchResult pressure_dynamic_batch(const MaterialModel& plate2, double temperature,
                                          const std::vector<DynamicCase>& cases,
                                          const std::vector<DynamicCombination>& combinations,
                                          const DynamicOptions& opt) {
  if (cases.empty()) throw Error(ErrorKind::invalid_argument, "no cases to integrate");
  DynamicSystem check;
  check.base.temperature = temperature;
  check.base.plate2 = plate2;
  for (const auto& c : cases) {
    check.base.gap = c.gap;
    check.base.plate1 = c.plate1;
    check.velocity = c.velocity;
    check.validate();
  }

  require_dynamic_model(plate2);
  for (const auto& c : cases) require_dynamic_model(c.plate1);
  if (plate2.is_vacuum() ||
      std::all_of(cases.begin(), cases.end(), [](const DynamicCase& c) { return c.plate1.is_vacuum(); })) {
    DynamicBatchResult out;
    out.converged = true;
    out.cases.assign(cases.size(), DynamicPressureResult{});
    for (auto& c : out.cases) c.converged = true;
    out.combination_values.assign(combinations.size(), 0.0);
    out.combination_errors.assign(combinations.size(), 0.0);
    return out;
  }

  // Grow the cutoff until every tail estimate fits in half the tolerance.
  double extend = 1.0;
  for (int attempt = 0;; ++attempt) {
    DynamicBatchResult out = batch_once(plate2, temperature, cases, combinations, opt, extend);
    bool tails_ok = true;
    for (auto& c : out.cases) {
      const double allowed = 0.5 * std::max(opt.abs_tol, opt.rel_tol * std::abs(c.total));
      if (c.truncation_error > allowed) tails_ok = false;
    }
    if (tails_ok || attempt == 3) {
      out.converged = out.converged && tails_ok;
      for (auto& c : out.cases) c.converged = out.converged;
      return out;
    }
    extend *= 2.0;
  }
}

DynamicPressureResult pressure_dynamic(const DynamicSystem& sys, const DynamicOptions& opt) {
  sys.validate();
  const DynamicBatchResult b =
      pressure_dynamic_batch(sys.base.plate2, sys.base.temperature, {{sys.base.plate1, sys.base.gap, sys.velocity}}, {}, opt);
  return b.cases.front();
}

}  // namespace casimir
