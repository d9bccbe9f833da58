#include <doctest.h>

#include <cmath>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/polder.hpp"

using namespace casimir;
using constants::hbar;
using constants::pi;
using constants::speed_of_light;

namespace {

ParticleSurfaceSystem system_at(double v) {
  ParticleSurfaceSystem s;
  s.particle.electric = Response::lorentz({{1e-30, 1e14, 2e13}});
  s.surface = MaterialModel::drude(2e14, 5e13);
  s.separation = 1e-7;
  s.temperature = 300.0;
  s.velocity = v;
  return s;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("no polarizability, no force") {
  ParticleSurfaceSystem s = system_at(1e3);
  s.particle = ParticleModel{};
  CHECK(cp_force_analytic(s).force == 0.0);
  s.velocity = 0.0;
  CHECK(cp_force_matsubara(s).force == 0.0);
}

TEST_CASE("ideal metal, static polarizability, zero temperature") {
  ParticleSurfaceSystem s;
  s.particle.electric = Response::constant(2e-30);
  s.surface = MaterialModel::ideal_metal();
  for (double z : {1e-7, 1e-6}) {
    s.separation = z;
    const double exact = -3.0 * hbar * speed_of_light * 2e-30 / (2.0 * pi * std::pow(z, 5));
    CHECK(rel(cp_force_matsubara(s).force, exact) < 1e-2);
  }
}

TEST_CASE("analytic route at rest against the Matsubara sum") {
  const ParticleSurfaceSystem s = system_at(0.0);
  const PolderResult a = cp_force_analytic(s), m = cp_force_matsubara(s);
  CHECK(a.force < 0.0);
  CHECK(rel(a.force, m.force) < 1e-2);
  CHECK(a.literal_sign_force == -a.force);
}

TEST_CASE("finite difference of the dilute-plate pressure") {
  const ParticleSurfaceSystem s = system_at(1e-4 * speed_of_light);
  const PolderResult a = cp_force_analytic(s);
  const FiniteDifferenceResult f = cp_force_finite_difference(s);
  CHECK(rel(f.force, a.force) < 1e-2);
  CHECK(std::abs(f.force - f.force_half_density) < 1e-2 * std::abs(f.force));
  CHECK(f.richardson_ratio == doctest::Approx(4.0).epsilon(0.1));
  CHECK(f.density * peak_susceptibility_per_density(s.particle) == doctest::Approx(1e-6));
}

TEST_CASE("velocity guard and unsupported particles") {
  ParticleSurfaceSystem s = system_at(0.05 * speed_of_light);
  CHECK_THROWS_AS(cp_force_analytic(s), Error);
  s = system_at(1e3);
  CHECK_THROWS_AS(cp_force_matsubara(s), Error);
}
