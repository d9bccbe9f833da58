#include "casimir/lifshitz_static.hpp"

#include <array>
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

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::invalid_argument, what);
}

// Real-frequency routes need dissipation; a vacuum plate makes the pressure vanish.
bool trivially_zero(const PlateSystem& sys) { return sys.plate1.is_vacuum() || sys.plate2.is_vacuum(); }

void require_lossy(const PlateSystem& sys) {
  for (const MaterialModel* m : {&sys.plate1, &sys.plate2}) {
    if (m->is_ideal_metal())
      throw Error(ErrorKind::invalid_model, "real-frequency routes cannot take an ideal metal; use the Matsubara route");
    if (!m->lossy())
      throw Error(ErrorKind::invalid_model, "real-frequency routes need lossy materials");
  }
}

std::array<cplx, 2> pair_of(const ReflectionPair& r) { return {r.e, r.m}; }

struct StaticDomain {
  double omega_max = 0.0;
  std::vector<Box> boxes;
  double kappa_scale = 0.0;
};

StaticDomain static_domain(const PlateSystem& sys, double tol, double extend) {
  StaticDomain d;
  const std::vector<const MaterialModel*> plates{&sys.plate1, &sys.plate2};
  d.omega_max = extend * detail::omega_cutoff(plates, tol);
  std::vector<double> extra = detail::characteristic_frequencies(plates);
  extra.push_back(speed_of_light / (2.0 * sys.gap));
  if (sys.temperature > 0.0) extra.push_back(boltzmann * sys.temperature / hbar);
  const auto w = detail::omega_edges(d.omega_max, detail::smallest_scale(plates), extra);
  const std::vector<double> v = {0.0, 0.5, 1.0, 1.5, 1.8, 2.0};
  d.boxes = tensor_boxes({w, v});
  d.kappa_scale = 1.0 / (2.0 * sys.gap);
  return d;
}

Target sum_target(std::size_t components, const std::vector<std::size_t>& picks, double rel, double abs,
                  std::ptrdiff_t relative_to = -1) {
  Target t;
  t.relative_to = relative_to;
  t.weights.assign(components, 0.0);
  for (auto i : picks) t.weights[i] = 1.0;
  t.rel_tol = rel;
  t.abs_tol = abs;
  return t;
}

// Tail beyond the cutoff, taken equal to the last octave below it. After the
// angular integration the oscillating zero-point part of the propagating waves
// decays only like w^-2, for which the two are equal.
double tail_estimate(double last_octave) { return std::abs(last_octave); }

}  // namespace

void PlateSystem::validate() const {
  require(gap > 0.0 && std::isfinite(gap), "gap must be positive");
  require(temperature >= 0.0 && std::isfinite(temperature), "temperature must be non-negative");
  plate1.validate();
  plate2.validate();
}

double thermal_factor(double omega, double temperature) {
  if (temperature == 0.0) return omega > 0.0 ? 1.0 : (omega < 0.0 ? -1.0 : 0.0);
  return coth_stable(hbar * omega / (2.0 * boltzmann * temperature));
}

StaticIntegrand static_integrand(const SpectralPoint& p, const PlateSystem& sys) {
  StaticIntegrand out;
  const ReflectionPair r1 = reflection(p, sys.plate1);
  const ReflectionPair r2 = reflection(p, sys.plate2);
  const cplx q0 = vacuum_wavenumber(p);
  const cplx decay = std::exp(-2.0 * q0 * sys.gap);
  const cplx decay_both = std::exp(-2.0 * (q0 + std::conj(q0)) * sys.gap);
  const auto d1 = pair_of(r1), d2 = pair_of(r2);
  for (int j = 0; j < 2; ++j) {
    out.loop[j] = (q0 * loop_function(d1[j], d2[j], q0, sys.gap)).imag();
    const cplx x = decay * d1[j] * d2[j];
    const double den = std::norm(1.0 - x);
    const cplx y = q0 * decay * d2[j];
    out.cross[j] = (d1[j].imag() * y.real() + d1[j].real() * y.imag()) / den;
    out.second[j] = -std::norm(d1[j]) * std::norm(d2[j]) * (q0 * decay_both).imag() / den;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Real-frequency routes

namespace {

enum class Form { loop, split };

PressureResult realfreq_once(const PlateSystem& sys, const StaticOptions& opt, Form form,
                             const StaticDomain& dom);

PressureResult realfreq(const PlateSystem& sys, const StaticOptions& opt, Form form) {
  sys.validate();
  PressureResult res;
  res.breakdown.has_regions = true;
  res.breakdown.has_terms = form == Form::split;
  if (trivially_zero(sys)) {
    res.converged = true;
    return res;
  }
  require_lossy(sys);

  // Grow the cutoff until the tail estimate fits in half the tolerance.
  double extend = 1.0;
  for (int attempt = 0;; ++attempt) {
    const StaticDomain dom = static_domain(sys, opt.rel_tol, extend);
    res = realfreq_once(sys, opt, form, dom);
    const double allowed = 0.5 * std::max(opt.abs_tol, opt.rel_tol * std::abs(res.value));
    if (res.truncation_error <= allowed || attempt == 3) {
      res.converged = res.converged && res.truncation_error <= allowed;
      return res;
    }
    extend *= 2.0;
  }
}

PressureResult realfreq_once(const PlateSystem& sys, const StaticOptions& opt, Form form,
                             const StaticDomain& dom) {
  PressureResult res;
  res.breakdown.has_regions = true;
  res.breakdown.has_terms = form == Form::split;
  res.omega_cutoff = dom.omega_max;
  const double probe_from = 0.5 * dom.omega_max;
  const double prefactor = -hbar / (2.0 * pi * pi);

  // loop:  e_ev e_pr m_ev m_pr probe
  // split: cross_e_ev cross_e_pr second_e cross_m_ev cross_m_pr second_m probe
  const std::size_t nc = form == Form::loop ? 5 : 7;
  const std::size_t probe = nc - 1;

  const Integrand f = [&](std::span<const double> x, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    const double omega = x[0];
    const detail::RadialSample s = detail::radial_sample(omega, x[1], dom.kappa_scale);
    const SpectralPoint p = SpectralPoint::with_q0_squared(omega, s.k, 0.0, s.q0_squared);
    const StaticIntegrand g = static_integrand(p, sys);
    const double w = prefactor * thermal_factor(omega, sys.temperature) * s.measure;
    const std::size_t region = s.propagating ? 1 : 0;
    double total = 0.0;
    if (form == Form::loop) {
      out[region] = w * g.loop[0];
      out[2 + region] = w * g.loop[1];
      total = out[region] + out[2 + region];
    } else {
      for (int j = 0; j < 2; ++j) {
        out[3 * j + region] = w * g.cross[j];
        out[3 * j + 2] = w * g.second[j];
        total += out[3 * j + region] + out[3 * j + 2];
      }
    }
    if (omega >= probe_from) out[probe] = total;
  };

  CubatureOptions co;
  co.max_evaluations = opt.max_evaluations;
  const double rel = opt.rel_tol;
  if (form == Form::loop) {
    co.targets.push_back(sum_target(nc, {0, 1, 2, 3}, rel, opt.abs_tol));
    co.targets.push_back(sum_target(nc, {0, 1}, 10 * rel, opt.abs_tol, 0));
    co.targets.push_back(sum_target(nc, {2, 3}, 10 * rel, opt.abs_tol, 0));
  } else {
    co.targets.push_back(sum_target(nc, {0, 1, 2, 3, 4, 5}, rel, opt.abs_tol));
    co.targets.push_back(sum_target(nc, {0, 1, 3, 4}, rel, opt.abs_tol, 0));
    co.targets.push_back(sum_target(nc, {2, 5}, rel, opt.abs_tol, 0));
  }
  const CubatureResult r = cubature(f, 2, nc, dom.boxes, co);
  const auto& v = r.values;

  res.value = r.target_values[0];
  res.truncation_error = tail_estimate(v[probe]);
  res.error = r.target_errors[0] + res.truncation_error;
  res.converged = r.converged;
  res.evaluations = r.evaluations;
  auto& b = res.breakdown;
  if (form == Form::loop) {
    b.electric = v[0] + v[1];
    b.magnetic = v[2] + v[3];
    b.evanescent = v[0] + v[2];
    b.propagating = v[1] + v[3];
  } else {
    b.electric = v[0] + v[1] + v[2];
    b.magnetic = v[3] + v[4] + v[5];
    b.evanescent = v[0] + v[3];
    b.propagating = v[1] + v[2] + v[4] + v[5];
    b.cross_term = v[0] + v[1] + v[3] + v[4];
    b.second_term = v[2] + v[5];
  }
  return res;
}

}  // namespace

PressureResult pressure_realfreq_loop(const PlateSystem& sys, const StaticOptions& opt) {
  return realfreq(sys, opt, Form::loop);
}

PressureResult pressure_realfreq_split(const PlateSystem& sys, const StaticOptions& opt) {
  return realfreq(sys, opt, Form::split);
}

// ---------------------------------------------------------------------------
// Imaginary frequency

namespace {

// X/(1 - X) for real amplitudes.
double real_loop(double r1, double r2, double x) {
  const double big_x = r1 * r2 * std::exp(-x);
  if (big_x == 1.0) throw Error(ErrorKind::loop_divergence, "multiple-reflection series diverges (X = 1)");
  return big_x / (1.0 - big_x);
}

struct TermValue {
  double e = 0.0, m = 0.0, error = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

// (1/8 l^3) int_{x0}^inf x^2 sum_j X/(1-X) dx with x = 2 q l, q^2 = k^2 + xi^2/c^2.
TermValue matsubara_term(double xi, const PlateSystem& sys, double rel, std::size_t max_eval) {
  const double l = sys.gap;
  const double x0 = 2.0 * xi * l / speed_of_light;
  const double norm = 1.0 / (8.0 * l * l * l);
  const Integrand f = [&](std::span<const double> t, std::span<double> out) {
    const double u = 1.0 - t[0];
    const double y = t[0] / u;
    const double x = x0 + y;
    const double k2 = y * (y + 2.0 * x0) / (4.0 * l * l);
    const ImaginaryReflection r1 = reflection_imaginary(xi, k2, sys.plate1);
    const ImaginaryReflection r2 = reflection_imaginary(xi, k2, sys.plate2);
    const double w = norm * x * x / (u * u);
    out[0] = w * real_loop(r1.e, r2.e, x);
    out[1] = w * real_loop(r1.m, r2.m, x);
  };
  CubatureOptions co;
  co.max_evaluations = max_eval;
  co.targets.push_back(sum_target(2, {0, 1}, rel, 0.0));
  co.targets.push_back(sum_target(2, {0}, rel, 0.0, 0));
  co.targets.push_back(sum_target(2, {1}, rel, 0.0, 0));
  const CubatureResult r = cubature(f, 1, 2, tensor_boxes({{0.0, 0.5, 0.8, 0.95, 1.0}}), co);
  TermValue tv;
  tv.e = r.values[0];
  tv.m = r.values[1];
  tv.error = r.target_errors[0];
  tv.evaluations = r.evaluations;
  tv.converged = r.converged;
  return tv;
}

PressureResult matsubara_zero_temperature(const PlateSystem& sys, const StaticOptions& opt) {
  PressureResult res;
  const double l = sys.gap;
  // P = -(hbar c / 2 pi^2) int q^3 dq int_0^1 dv sum_j X/(1-X), xi = c q v.
  const double prefactor = -hbar * speed_of_light / (2.0 * pi * pi) / (16.0 * l * l * l * l);
  const Integrand f = [&](std::span<const double> p, std::span<double> out) {
    const double u = 1.0 - p[0];
    const double x = p[0] / u;
    const double v = p[1];
    const double q = x / (2.0 * l);
    const double xi = speed_of_light * q * v;
    const double k2 = q * q * (1.0 - v) * (1.0 + v);
    const ImaginaryReflection r1 = reflection_imaginary(xi, k2, sys.plate1);
    const ImaginaryReflection r2 = reflection_imaginary(xi, k2, sys.plate2);
    const double w = prefactor * x * x * x / (u * u);
    out[0] = w * real_loop(r1.e, r2.e, x);
    out[1] = w * real_loop(r1.m, r2.m, x);
  };
  CubatureOptions co;
  co.max_evaluations = opt.max_evaluations;
  co.targets.push_back(sum_target(2, {0, 1}, opt.rel_tol, opt.abs_tol));
  co.targets.push_back(sum_target(2, {0}, 10 * opt.rel_tol, opt.abs_tol, 0));
  co.targets.push_back(sum_target(2, {1}, 10 * opt.rel_tol, opt.abs_tol, 0));
  const auto boxes = tensor_boxes({{0.0, 0.5, 0.8, 0.95, 1.0}, {0.0, 0.5, 1.0}});
  const CubatureResult r = cubature(f, 2, 2, boxes, co);
  res.value = r.target_values[0];
  res.error = r.target_errors[0];
  res.breakdown.electric = r.values[0];
  res.breakdown.magnetic = r.values[1];
  res.converged = r.converged;
  res.evaluations = r.evaluations;
  return res;
}

}  // namespace

PressureResult pressure_matsubara(const PlateSystem& sys, const StaticOptions& opt) {
  sys.validate();
  if (trivially_zero(sys)) {
    PressureResult res;
    res.converged = true;
    return res;
  }
  if (sys.temperature == 0.0) return matsubara_zero_temperature(sys, opt);

  const double kt = boltzmann * sys.temperature;
  const double xi1 = 2.0 * pi * kt / hbar;
  const double term_rel = 0.1 * opt.rel_tol;
  const std::size_t block = 8;

  PressureResult res;
  res.converged = true;
  double sum_e = 0.0, sum_m = 0.0, err = 0.0, previous = 0.0;
  bool done = false;
  for (std::size_t start = 0; !done; start += block) {
    if (start >= opt.max_matsubara_terms)
      throw Error(ErrorKind::matsubara_divergence,
                  "Matsubara sum not converged within " + std::to_string(opt.max_matsubara_terms) +
                      " terms; use T = 0 for very low temperatures");
    std::vector<TermValue> terms(block);
    parallel_for(block, [&](std::size_t i) {
      terms[i] = matsubara_term(xi1 * static_cast<double>(start + i), sys, term_rel, opt.max_evaluations);
    });
    for (std::size_t i = 0; i < block; ++i) {
      const std::size_t n = start + i;
      const double weight = n == 0 ? 0.5 : 1.0;
      const TermValue& t = terms[i];
      sum_e += weight * t.e;
      sum_m += weight * t.m;
      err += weight * t.error;
      res.evaluations += t.evaluations;
      res.converged = res.converged && t.converged;
      const double mag = std::abs(t.e + t.m);
      if (n >= 2) {
        const double ratio = previous > 0.0 ? mag / previous : 0.0;
        if (ratio < 1.0) {
          const double tail = mag * ratio / (1.0 - ratio);
          const double scale = std::abs(sum_e + sum_m);
          if (tail <= 0.1 * std::max(opt.rel_tol * scale, opt.abs_tol / (kt / pi)) || mag == 0.0) {
            err += tail;
            done = true;
            break;
          }
        }
      }
      previous = mag;
    }
  }
  const double prefactor = -kt / pi;
  res.value = prefactor * (sum_e + sum_m);
  res.error = std::abs(prefactor) * err;
  res.breakdown.electric = prefactor * sum_e;
  res.breakdown.magnetic = prefactor * sum_m;
  return res;
}

}  // namespace casimir
