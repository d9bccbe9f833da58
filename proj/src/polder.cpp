#include "casimir/polder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/parallel.hpp"
#include "casimir/quadrature.hpp"
#include "spectral.hpp"

namespace casimir {

namespace {

using constants::boltzmann;
using constants::hbar;
using constants::speed_of_light;
constexpr double pi = std::numbers::pi;

ParticleModel effective_particle(const ParticleModel& p, bool magnetic) {
  ParticleModel out = p;
  if (!magnetic) out.magnetic = Response::zero();
  return out;
}

bool particle_is_inert(const ParticleModel& p) { return p.electric.is_zero() && p.magnetic.is_zero(); }

std::vector<double> particle_frequencies(const ParticleModel& p) {
  std::vector<double> out;
  for (const Response* r : {&p.electric, &p.magnetic})
    for (double f : r->characteristic_frequencies())
      if (f > 0.0 && std::isfinite(f)) out.push_back(f);
  return out;
}

void require_real_axis_particle(const ParticleModel& p) {
  for (const Response* r : {&p.electric, &p.magnetic}) {
    if (r->is_zero()) continue;
    if (r->kind() == Response::Kind::drude || r->kind() == Response::Kind::plasma)
      throw Error(ErrorKind::invalid_model, "particle polarizability must be finite at zero frequency");
    if (!r->lossy())
      throw Error(ErrorKind::invalid_model, "real-frequency Casimir-Polder routes need a lossy polarizability");
  }
}

// Components of the analytic integrand.
enum Slot : std::size_t { ev_e, pr_e, ev_m, pr_m, probe, slots };

PolderResult analytic_once(const ParticleSurfaceSystem& sys, const ParticleModel& particle, const PolderOptions& opt,
                           double extend) {
  const double z = sys.separation;
  const double T = sys.temperature;
  const double V = sys.velocity;
  const std::vector<const MaterialModel*> plates{&sys.surface};
  const auto pf = particle_frequencies(particle);

  double omega_max = detail::omega_cutoff(plates, opt.rel_tol);
  for (double f : pf) omega_max = std::max(omega_max, 8.0 * f);
  omega_max *= extend;
  const double probe_from = 0.5 * omega_max;

  std::vector<double> extra = detail::characteristic_frequencies(plates);
  extra.insert(extra.end(), pf.begin(), pf.end());
  extra.push_back(speed_of_light / (2.0 * z));
  if (T > 0.0) extra.push_back(boltzmann * T / hbar);
  double smallest = detail::smallest_scale(plates);
  for (double f : pf) smallest = std::min(smallest, f);
  const auto w_edges = detail::omega_edges(omega_max, smallest, extra);
  const std::vector<double> v_edges = {0.0, 0.5, 1.0, 1.5, 1.8, 2.0};
  const std::vector<double> a_edges = {0.0, 0.5, 1.0};
  const double kappa_scale = 1.0 / (2.0 * z);
  const detail::AngleMap angles{opt.fold_kx, V};
  const double slope_step = 1e-4 * (pf.empty() ? smallest : *std::min_element(pf.begin(), pf.end()));
  const double kt2 = 2.0 * boltzmann * T;
  // -hbar/(2 pi^3), times 2 for ky -> -ky.
  const double prefactor = -2.0 * hbar / (2.0 * pi * pi * pi);
  const double c2 = speed_of_light * speed_of_light;

  // Im alpha(w+) coth(hbar w+ / 2kT), finite through w+ = 0.
  auto im_coth = [&](const Response& r, double wp, cplx value) {
    if (r.is_zero()) return 0.0;
    if (T == 0.0) return wp > 0.0 ? value.imag() : (wp < 0.0 ? -value.imag() : 0.0);
    const double x = hbar * wp / kt2;
    if (std::abs(x) >= detail::thermal_limit_threshold) return value.imag() * coth_stable(x);
    return kt2 / hbar * detail::odd_slope_at_zero([&](double h) { return r.at(h).imag(); }, slope_step);
  };

  const Integrand f = [&](std::span<const double> x, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    const double omega = x[0];
    const detail::RadialSample rs = detail::radial_sample(omega, x[1], kappa_scale);
    double phi[2], jac;
    const int n_angles = angles.sample(omega, rs.k, x[2], phi, jac);
    if (jac == 0.0) return;
    const double weight = prefactor * rs.measure * jac;
    const std::size_t region = rs.propagating ? 1 : 0;

    const SpectralPoint p = SpectralPoint::with_q0_squared(omega, rs.k, 0.0, rs.q0_squared);
    const cplx q0 = vacuum_wavenumber(p);
    const ReflectionPair r2 = reflection(p, sys.surface);
    const cplx decay = std::exp(-2.0 * q0 * z);
    const cplx g[2] = {decay * r2.e, decay * r2.m};
    const double coth = thermal_factor(omega, T);
    const double w2 = omega * omega / c2;
    const double transverse = 2.0 * rs.q0_squared + w2;
    // D1_e = pi [alpha_e transverse + alpha_m w2], D1_m = pi [alpha_m transverse + alpha_e w2].
    const double ce[2] = {pi * transverse, pi * w2};  // alpha_e weight in (e, m) channel
    const double cm[2] = {pi * w2, pi * transverse};  // alpha_m weight

    for (int a = 0; a < n_angles; ++a) {
      const double wp = omega + rs.k * std::cos(phi[a]) * V;
      const cplx ae = particle.electric.is_zero() ? cplx(0.0) : particle.electric.at(wp);
      const cplx am = particle.magnetic.is_zero() ? cplx(0.0) : particle.magnetic.at(wp);
      const double ae_ic = im_coth(particle.electric, wp, ae);
      const double am_ic = im_coth(particle.magnetic, wp, am);
      double se = 0.0, sm = 0.0;
      for (int j = 0; j < 2; ++j) {
        se += ce[j] * (ae_ic * g[j].real() + ae.real() * g[j].imag() * coth);
        sm += cm[j] * (am_ic * g[j].real() + am.real() * g[j].imag() * coth);
      }
      out[ev_e + region] += weight * se;
      out[ev_m + region] += weight * sm;
    }
    if (omega >= probe_from) out[probe] = out[ev_e] + out[pr_e] + out[ev_m] + out[pr_m];
  };

  CubatureOptions co;
  co.max_evaluations = opt.max_evaluations;
  Target total;
  total.weights = {1.0, 1.0, 1.0, 1.0, 0.0};
  total.rel_tol = opt.rel_tol;
  total.abs_tol = opt.abs_tol;
  co.targets.push_back(total);
  const CubatureResult r = cubature(f, 3, slots, tensor_boxes({w_edges, v_edges, a_edges}), co);

  PolderResult res;
  res.force = r.target_values[0];
  res.electric = r.values[ev_e] + r.values[pr_e];
  res.magnetic = r.values[ev_m] + r.values[pr_m];
  res.truncation_error = std::abs(r.values[probe]);
  res.error = r.target_errors[0] + res.truncation_error;
  res.literal_sign_force = -res.force;
  res.omega_cutoff = omega_max;
  res.converged = r.converged;
  res.evaluations = r.evaluations;
  return res;
}

// Sum over channels of (r1 / n1) r2 at imaginary frequency.
double matsubara_kernel(double xi, double k2, const ParticleModel& unit, const MaterialModel& surface) {
  const ImaginaryReflection r1 = rarified_delta_imaginary(xi, k2, unit);
  const ImaginaryReflection r2 = reflection_imaginary(xi, k2, surface);
  return r1.e * r2.e + r1.m * r2.m;
}

struct TermValue {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

// int k dk q^2 exp(-2 q z) G at one Matsubara frequency, q = x / 2z.
TermValue polder_term(double xi, const ParticleSurfaceSystem& sys, const ParticleModel& unit, double rel,
                      std::size_t max_eval) {
  const double z = sys.separation;
  const double x0 = 2.0 * xi * z / speed_of_light;
  const double norm = 1.0 / (16.0 * z * z * z * z);
  const Integrand f = [&](std::span<const double> t, std::span<double> out) {
    const double u = 1.0 - t[0];
    const double y = t[0] / u;
    const double x = x0 + y;
    const double k2 = y * (y + 2.0 * x0) / (4.0 * z * z);
    out[0] = norm * x * x * x * std::exp(-y) / (u * u) * matsubara_kernel(xi, k2, unit, sys.surface);
  };
  CubatureOptions co;
  co.max_evaluations = max_eval;
  co.rel_tol = rel;
  const CubatureResult r = cubature(f, 1, 1, tensor_boxes({{0.0, 0.5, 0.8, 0.95, 1.0}}), co);
  // exp(-x0) is factored out so distant terms stay representable.
  const double scale = std::exp(-x0);
  return {scale * r.values[0], scale * r.abs_errors[0], r.evaluations, r.converged};
}

PolderResult matsubara_zero_temperature(const ParticleSurfaceSystem& sys, const ParticleModel& unit,
                                        const PolderOptions& opt) {
  const double z = sys.separation;
  // F = -(hbar c / pi^2) / (32 z^5) int x^4 e^-x dx int_0^1 dv G, xi = c q v.
  const double prefactor = -hbar * speed_of_light / (pi * pi) / (32.0 * z * z * z * z * z);
  const Integrand f = [&](std::span<const double> p, std::span<double> out) {
    const double u = 1.0 - p[0];
    const double x = p[0] / u;
    const double v = p[1];
    const double q = x / (2.0 * z);
    const double xi = speed_of_light * q * v;
    const double k2 = q * q * (1.0 - v) * (1.0 + v);
    out[0] = prefactor * x * x * x * x * std::exp(-x) / (u * u) * matsubara_kernel(xi, k2, unit, sys.surface);
  };
  CubatureOptions co;
  co.max_evaluations = opt.max_evaluations;
  co.rel_tol = opt.rel_tol;
  co.abs_tol = opt.abs_tol;
  const CubatureResult r = cubature(f, 2, 1, tensor_boxes({{0.0, 0.5, 0.8, 0.95, 1.0}, {0.0, 0.5, 1.0}}), co);
  PolderResult res;
  res.force = r.values[0];
  res.error = r.abs_errors[0];
  res.converged = r.converged;
  res.evaluations = r.evaluations;
  return res;
}

// Splits a result into alpha_e and alpha_m parts by evaluating each alone.
template <class Route>
PolderResult with_channels(const ParticleModel& particle, Route route) {
  PolderResult res = route(particle);
  if (particle.magnetic.is_zero()) {
    res.electric = res.force;
  } else if (particle.electric.is_zero()) {
    res.magnetic = res.force;
  } else {
    ParticleModel only_e = particle, only_m = particle;
    only_e.magnetic = Response::zero();
    only_m.electric = Response::zero();
    res.electric = route(only_e).force;
    res.magnetic = route(only_m).force;
  }
  return res;
}

}  // namespace

void ParticleSurfaceSystem::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::invalid_argument, what);
  };
  require(std::isfinite(separation) && separation > 0.0, "separation z must be positive");
  require(std::isfinite(temperature) && temperature >= 0.0, "temperature must be non-negative");
  require(std::isfinite(velocity), "velocity must be finite");
  require(max_velocity_fraction > 0.0 && max_velocity_fraction < 1.0, "velocity guard fraction must lie in (0, 1)");
  if (std::abs(velocity) >= max_velocity_fraction * speed_of_light)
    throw Error(ErrorKind::velocity_guard, "velocity exceeds the nonrelativistic guard");
  surface.validate();
}

double peak_susceptibility_per_density(const ParticleModel& particle) {
  double peak = 0.0;
  const auto freqs = particle_frequencies(particle);
  for (const Response* r : {&particle.electric, &particle.magnetic}) {
    if (r->is_zero()) continue;
    const StaticLimit s = r->static_limit();
    if (s.divergent) throw Error(ErrorKind::invalid_model, "particle polarizability diverges at zero frequency");
    peak = std::max(peak, std::abs(s.value));
    // Resonances and a log grid around them.
    for (double f0 : freqs) {
      for (int i = -40; i <= 40; ++i) {
        const double w = f0 * std::pow(10.0, i / 20.0);
        peak = std::max(peak, std::abs(r->at(w)));
      }
    }
  }
  return 4.0 * pi * peak;
}

PolderResult cp_force_analytic(const ParticleSurfaceSystem& sys, const PolderOptions& opt) {
  sys.validate();
  const ParticleModel particle = effective_particle(sys.particle, opt.magnetic);
  if (particle_is_inert(particle) || sys.surface.is_vacuum()) {
    PolderResult res;
    res.converged = true;
    return res;
  }
  if (sys.surface.is_ideal_metal())
    throw Error(ErrorKind::invalid_model, "the real-frequency route cannot take an ideal metal; use the Matsubara route");
  if (!sys.surface.lossy()) throw Error(ErrorKind::invalid_model, "the real-frequency route needs a lossy surface");
  require_real_axis_particle(particle);

  double extend = 1.0;
  for (int attempt = 0;; ++attempt) {
    PolderResult res = analytic_once(sys, particle, opt, extend);
    const double allowed = 0.5 * std::max(opt.abs_tol, opt.rel_tol * std::abs(res.force));
    if (res.truncation_error <= allowed || attempt == 3) {
      res.converged = res.converged && res.truncation_error <= allowed;
      return res;
    }
    extend *= 2.0;
  }
}

PolderResult cp_force_matsubara(const ParticleSurfaceSystem& sys, const PolderOptions& opt) {
  sys.validate();
  if (sys.velocity != 0.0)
    throw Error(ErrorKind::invalid_argument, "the Matsubara route describes a particle at rest (V = 0)");
  ParticleModel unit = effective_particle(sys.particle, opt.magnetic);
  unit.density = 1.0;
  if (particle_is_inert(unit) || sys.surface.is_vacuum()) {
    PolderResult res;
    res.converged = true;
    return res;
  }

  if (sys.temperature == 0.0)
    return with_channels(unit, [&](const ParticleModel& p) { return matsubara_zero_temperature(sys, p, opt); });

  const double kt = boltzmann * sys.temperature;
  const double xi1 = 2.0 * pi * kt / hbar;
  const double term_rel = 0.1 * opt.rel_tol;
  const std::size_t block = 8;
  const double prefactor = -2.0 * kt / pi;

  auto route = [&](const ParticleModel& p) {
    PolderResult res;
    res.converged = true;
    double sum = 0.0, err = 0.0, previous = 0.0;
    bool done = false;
    for (std::size_t start = 0; !done; start += block) {
      if (start >= opt.max_matsubara_terms)
        throw Error(ErrorKind::matsubara_divergence,
                    "Matsubara sum not converged within " + std::to_string(opt.max_matsubara_terms) + " terms");
      std::vector<TermValue> terms(block);
      parallel_for(block, [&](std::size_t i) {
        terms[i] = polder_term(xi1 * static_cast<double>(start + i), sys, p, term_rel, opt.max_evaluations);
      });
      for (std::size_t i = 0; i < block; ++i) {
        const std::size_t n = start + i;
        const double weight = n == 0 ? 0.5 : 1.0;
        sum += weight * terms[i].value;
        err += weight * terms[i].error;
        res.evaluations += terms[i].evaluations;
        res.converged = res.converged && terms[i].converged;
        const double mag = std::abs(terms[i].value);
        if (n >= 2) {
          const double ratio = previous > 0.0 ? mag / previous : 0.0;
          if (ratio < 1.0) {
            const double tail = mag * ratio / (1.0 - ratio);
            if (tail <= 0.1 * std::max(opt.rel_tol * std::abs(sum), opt.abs_tol / std::abs(prefactor)) ||
                mag == 0.0) {
              err += tail;
              done = true;
              break;
            }
          }
        }
        previous = mag;
      }
    }
    res.force = prefactor * sum;
    res.error = std::abs(prefactor) * err;
    return res;
  };
  PolderResult res = with_channels(unit, route);
  res.literal_sign_force = -res.force;
  return res;
}

FiniteDifferenceResult cp_force_finite_difference(const ParticleSurfaceSystem& sys,
                                                  const FiniteDifferenceOptions& opt) {
  sys.validate();
  const ParticleModel particle = effective_particle(sys.particle, opt.base.magnetic);
  FiniteDifferenceResult res;
  const double z = sys.separation;
  res.step = opt.step > 0.0 ? opt.step : z / 200.0;
  if (!(res.step < 0.5 * z)) throw Error(ErrorKind::invalid_argument, "difference step must be well below z");
  if (particle_is_inert(particle) || sys.surface.is_vacuum()) {
    res.converged = true;
    return res;
  }
  require_real_axis_particle(particle);

  const double peak = peak_susceptibility_per_density(particle);
  if (opt.density > 0.0) {
    res.density = opt.density;
    if (peak * res.density >= 1e-3)
      throw Error(ErrorKind::not_rarified, "|eps1 - 1| = 4 pi n1 |alpha| reaches " + std::to_string(peak * res.density) +
                                              "; the dilute limit needs it below 1e-3");
  } else {
    res.density = 1e-6 / peak;
  }

  const double n = res.density;
  const double d = res.step;
  const MaterialModel dense = rarified_material(particle, n);
  const MaterialModel half = rarified_material(particle, 0.5 * n);
  // Cases: for each density, gaps z -+ d, z -+ d/2, z -+ d/4.
  const double offsets[3] = {d, 0.5 * d, 0.25 * d};
  std::vector<DynamicCase> cases;
  for (const MaterialModel* m : {&dense, &half})
    for (double o : offsets) {
      cases.push_back({*m, z - o, sys.velocity});
      cases.push_back({*m, z + o, sys.velocity});
    }
  auto index = [](int density, int offset, bool plus) {
    return static_cast<std::size_t>(6 * density + 2 * offset + (plus ? 1 : 0));
  };
  // P(z + o) - P(z - o), weighted.
  auto difference = [&](int density, int offset, DynamicTerm term, double w) {
    return std::vector<DynamicCombination::Part>{{index(density, offset, true), term, w},
                                                  {index(density, offset, false), term, -w}};
  };
  auto join = [](std::vector<DynamicCombination::Part> a, const std::vector<DynamicCombination::Part>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  const double rel = opt.base.rel_tol;
  std::vector<DynamicCombination> combos;
  // 0, 1, 2: first differences at (n, d), (n/2, d), (n, d/2).
  combos.push_back({difference(0, 0, DynamicTerm::total, 1.0), 0.5 * rel, 0.0});
  combos.push_back({difference(1, 0, DynamicTerm::total, 1.0), 0.5 * rel, 0.0});
  combos.push_back({difference(0, 1, DynamicTerm::total, 1.0), 0.5 * rel, 0.0});
  // 3, 4: Richardson numerator and denominator, scaled by 2d.
  combos.push_back({join(difference(0, 0, DynamicTerm::total, 1.0), difference(0, 1, DynamicTerm::total, -2.0)),
                    0.05, 0.0, 0});
  combos.push_back({join(difference(0, 1, DynamicTerm::total, 2.0), difference(0, 2, DynamicTerm::total, -4.0)),
                    0.05, 0.0, 0});
  // 5, 6, 7: block contributions.
  combos.push_back({difference(0, 0, DynamicTerm::term1, 1.0), rel, 0.0, 0});
  if (opt.resolve_term2) {
    combos.push_back({difference(0, 0, DynamicTerm::term2, 1.0), 0.02, 0.0});
    combos.push_back({difference(1, 0, DynamicTerm::term2, 1.0), 0.02, 0.0});
  } else {
    combos.push_back({difference(0, 0, DynamicTerm::term2, 1.0), rel, 0.0, 0});
    combos.push_back({difference(1, 0, DynamicTerm::term2, 1.0), rel, 0.0, 1});
  }

  DynamicOptions dopt;
  dopt.rel_tol = rel;
  dopt.abs_tol = opt.base.abs_tol;
  dopt.max_evaluations = opt.base.max_evaluations;
  dopt.fold_kx = opt.base.fold_kx;
  dopt.resolve_terms = false;
  const DynamicBatchResult b = pressure_dynamic_batch(sys.surface, sys.temperature, cases, combos, dopt);

  const auto& v = b.combination_values;
  const auto& e = b.combination_errors;
  // F = -(1/n1) dP/dl.
  const double to_force = -1.0 / (2.0 * d * n);
  res.force = to_force * v[0];
  res.error = std::abs(to_force) * e[0];
  res.literal_sign_force = -res.force;
  res.force_half_density = -v[1] / (2.0 * d * 0.5 * n);
  res.force_half_step = -v[2] / (d * n);
  res.richardson_ratio = v[4] != 0.0 ? v[3] / v[4] : 0.0;
  res.term1_derivative = v[5] / (2.0 * d);
  res.term2_derivative = v[6] / (2.0 * d);
  res.term2_derivative_half_density = v[7] / d;
  res.omega_cutoff = b.cases.front().omega_cutoff;
  res.converged = b.converged;
  res.evaluations = b.evaluations;

  if (opt.check_linearity) {
    const double half_error = e[1] / (2.0 * d * 0.5 * n);
    const double allowed = res.error + half_error + rel * std::abs(res.force);
    if (std::abs(res.force - res.force_half_density) > allowed)
      throw Error(ErrorKind::not_rarified,
                  "halving n1 changes the force from " + std::to_string(res.force) + " N to " +
                      std::to_string(res.force_half_density) + " N; not in the rarified regime");
  }
  return res;
}

}  // namespace casimir
