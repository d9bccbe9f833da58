#include "casimir/verification.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/lifshitz_dynamic.hpp"
#include "casimir/lifshitz_static.hpp"
#include "casimir/optics.hpp"
#include "casimir/polder.hpp"

namespace casimir {

namespace {

using constants::boltzmann;
using constants::hbar;
using constants::pi;
using constants::speed_of_light;

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

MaterialModel test_metal() { return MaterialModel::drude(2e14, 5e13); }

CheckOutcome loop_identity() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  int used = 0;
  while (used < 1000) {
    const cplx d1(u(rng), u(rng)), d2(u(rng), u(rng));
    const cplx q0(std::abs(u(rng)) * 1e7, u(rng) * 1e7);
    const double l = 1e-8 + 1e-6 * std::abs(u(rng));
    const cplx x = d1 * d2 * std::exp(-2.0 * q0 * l);
    if (std::abs(1.0 - x) < 1e-3 || std::abs(x) < 1e-12) continue;
    const cplx direct = 1.0 / (1.0 / d1 / d2 * std::exp(2.0 * q0 * l) - 1.0);
    worst = std::max(worst, std::abs(loop_function(d1, d2, q0, l) - direct) / std::abs(direct));
    ++used;
  }
  return {"loop_identity", worst <= 1e-12, fmt("max relative deviation %.2e over 1000 tuples", worst)};
}

CheckOutcome crossing_paths() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const MaterialModel models[] = {test_metal(), MaterialModel::lorentz({{3.0, 2e15, 1e14}}),
                                  MaterialModel::constant(4.0, 1e15)};
  double worst = 0.0;
  for (int i = 0; i < 300; ++i) {
    const double w = -1e13 * std::pow(1e3, u(rng));
    const double k = std::abs(w) / speed_of_light * 3.0 * u(rng);
    const SpectralPoint p = SpectralPoint::make(w, k, 0.0);
    for (const auto& m : models) {
      const ReflectionPair a = reflection(p, m), b = reflection_continued(p, m);
      worst = std::max({worst, std::abs(a.e - b.e) / std::max(std::abs(a.e), 1e-300),
                        std::abs(a.m - b.m) / std::max(std::abs(a.m), 1e-300)});
    }
  }
  return {"negative_frequency_paths", worst <= 1e-12, fmt("max relative deviation %.2e", worst)};
}

CheckOutcome passivity() {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const MaterialModel models[] = {test_metal(), MaterialModel::lorentz({{3.0, 2e15, 1e14}})};
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double w = 1e12 * std::pow(1e5, u(rng));
    const double k = w / speed_of_light * u(rng);
    for (const auto& m : models) {
      const ReflectionPair r = reflection(SpectralPoint::make(w, k, 0.0), m);
      worst = std::max({worst, std::abs(r.e), std::abs(r.m)});
    }
  }
  return {"passivity_propagating", worst <= 1.0, fmt("max |Delta| = %.15f", worst)};
}

CheckOutcome ideal_metal_limit() {
  const double l = 1e-6;
  const PressureResult r = pressure_matsubara({l, 0.0, MaterialModel::ideal_metal(), MaterialModel::ideal_metal()});
  const double exact = -pi * pi * hbar * speed_of_light / (240.0 * std::pow(l, 4));
  const double d = rel_diff(r.value, exact);
  return {"ideal_metal_zero_temperature", d < 5e-3, fmt("P = %.6e Pa, closed form %.6e Pa", r.value, exact)};
}

CheckOutcome classical_limit() {
  const double l = 1e-5, T = 300.0;
  const PressureResult r = pressure_matsubara({l, T, MaterialModel::ideal_metal(), MaterialModel::ideal_metal()});
  const double zeta3 = 1.2020569031595942;
  const double exact = -zeta3 * boltzmann * T / (8.0 * pi * l * l * l);
  return {"ideal_metal_high_temperature", rel_diff(r.value, exact) < 1e-2,
          fmt("P = %.6e Pa, classical limit %.6e Pa", r.value, exact)};
}

CheckOutcome route_agreement() {
  const PlateSystem sys{1e-7, 300.0, test_metal(), test_metal()};
  StaticOptions o;
  o.rel_tol = 1e-3;
  const double m = pressure_matsubara(sys, o).value;
  const double a = pressure_realfreq_loop(sys, o).value;
  const double b = pressure_realfreq_split(sys, o).value;
  const double d = std::max(rel_diff(m, a), rel_diff(m, b));
  return {"static_route_agreement", d < 1e-2, fmt("imaginary axis %.6e, loop %.6e, split %.6e", m, a, b)};
}

CheckOutcome dynamic_reduction() {
  const PlateSystem sys{1e-7, 300.0, test_metal(), MaterialModel::lorentz({{3.0, 1e14, 3e13}})};
  StaticOptions so;
  so.rel_tol = 1e-3;
  const PressureResult s = pressure_realfreq_split(sys, so);
  DynamicOptions dopt;
  dopt.rel_tol = 1e-3;
  const DynamicPressureResult d = pressure_dynamic({sys, 0.0}, dopt);
  return {"dynamic_at_rest", std::abs(d.total - s.value) <= 2e-3 * std::abs(s.value),
          fmt("moving-plate route %.6e, static route %.6e", d.total, s.value)};
}

CheckOutcome velocity_parity() {
  const PlateSystem sys{1e-7, 300.0, test_metal(), test_metal()};
  DynamicOptions o;
  o.fold_kx = false;
  const double v = 1e-4 * speed_of_light;
  const DynamicPressureResult a = pressure_dynamic({sys, v}, o), b = pressure_dynamic({sys, -v}, o);
  return {"velocity_parity", std::abs(a.total - b.total) <= a.total_error + b.total_error,
          fmt("F(V) = %.9e, F(-V) = %.9e", a.total, b.total)};
}

ParticleModel test_particle() {
  ParticleModel p;
  p.electric = Response::lorentz({{1e-30, 1e14, 2e13}});
  return p;
}

CheckOutcome polder_routes() {
  ParticleSurfaceSystem s;
  s.particle = test_particle();
  s.surface = test_metal();
  s.separation = 1e-7;
  s.temperature = 300.0;
  s.velocity = 1e-4 * speed_of_light;
  const PolderResult a = cp_force_analytic(s);
  const FiniteDifferenceResult f = cp_force_finite_difference(s);
  return {"polder_route_agreement", rel_diff(a.force, f.force) < 1e-2,
          fmt("analytic %.6e N, finite difference %.6e N", a.force, f.force)};
}

CheckOutcome polder_ideal_limit() {
  ParticleSurfaceSystem s;
  const double alpha0 = 1e-30, z = 1e-6;
  s.particle.electric = Response::constant(alpha0);
  s.surface = MaterialModel::ideal_metal();
  s.separation = z;
  const PolderResult r = cp_force_matsubara(s);
  const double exact = -3.0 * hbar * speed_of_light * alpha0 / (2.0 * pi * std::pow(z, 5));
  return {"polder_ideal_metal", rel_diff(r.force, exact) < 1e-2, fmt("F = %.6e N, closed form %.6e N", r.force, exact)};
}

CheckOutcome determinism() {
  const PlateSystem sys{2e-7, 300.0, test_metal(), test_metal()};
  const PressureResult a = pressure_realfreq_loop(sys), b = pressure_realfreq_loop(sys);
  return {"determinism", a.value == b.value && a.error == b.error, fmt("P = %.17g Pa twice", a.value)};
}

}  // namespace

std::vector<CheckOutcome> run_verification() {
  const std::function<CheckOutcome()> checks[] = {
      loop_identity,     crossing_paths,    passivity,       ideal_metal_limit, classical_limit, route_agreement,
      dynamic_reduction, velocity_parity,   polder_routes,   polder_ideal_limit, determinism,
  };
  std::vector<CheckOutcome> out;
  for (const auto& c : checks) {
    try {
      out.push_back(c());
    } catch (const Error& e) {
      out.push_back({"exception", false, std::string(to_string(e.kind())) + ": " + e.what()});
    }
  }
  return out;
}

}  // namespace casimir
