#include <doctest.h>

#include <cmath>
#include <random>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/lifshitz_dynamic.hpp"

using namespace casimir;
using constants::pi;
using constants::speed_of_light;

namespace {
MaterialModel metal() { return MaterialModel::drude(2e14, 5e13); }
MaterialModel dielectric() { return MaterialModel::lorentz({{3.0, 1e14, 3e13}}); }
double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
}  // namespace

TEST_CASE("at rest the integrand reduces to the static one") {
  const PlateSystem base{1e-7, 300.0, metal(), dielectric()};
  const DynamicSystem sys{base, 0.0};
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 300; ++i) {
    const double w = 1e12 * std::pow(1e4, u(rng));
    const double k = w / speed_of_light * 3 * u(rng);
    const SpectralPoint p = SpectralPoint::make(w, k * 0.6, k * 0.8);
    const StaticIntegrand s = static_integrand(p, base);
    const DynamicIntegrand d = dynamic_integrand(p, sys);
    const double th = thermal_factor(w, base.temperature);
    for (int c = 0; c < 2; ++c) {
      CHECK(std::abs(d.block1[c] - th * s.cross[c]) <= 1e-10 * std::abs(th * s.cross[c]) + 1e-300);
      CHECK(std::abs(d.block2[c] - th * s.second[c]) <= 1e-10 * std::abs(th * s.second[c]) + 1e-300);
    }
  }
}

TEST_CASE("joint flip of kx and V") {
  const PlateSystem base{1e-7, 300.0, metal(), dielectric()};
  const double v = 1e-3 * speed_of_light;
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 200; ++i) {
    const double w = 1e12 * std::pow(1e4, u(rng));
    const double k = w / speed_of_light * 3 * u(rng);
    const double phi = pi * u(rng);
    const SpectralPoint a = SpectralPoint::make(w, k * std::cos(phi), k * std::sin(phi));
    const SpectralPoint b = SpectralPoint::make(w, -k * std::cos(phi), k * std::sin(phi));
    const DynamicIntegrand fa = dynamic_integrand(a, {base, v});
    const DynamicIntegrand fb = dynamic_integrand(b, {base, -v});
    for (int c = 0; c < 2; ++c) {
      CHECK(fa.block1[c] == doctest::Approx(fb.block1[c]).epsilon(1e-12));
      CHECK(fa.block2[c] == doctest::Approx(fb.block2[c]).epsilon(1e-12));
    }
  }
}

TEST_CASE("finite limit where the shifted frequency vanishes") {
  const PlateSystem base{1e-7, 300.0, metal(), dielectric()};
  const double v = 1e-3 * speed_of_light;
  const double w = 2e13;
  const double kx = -w / v;  // w+ = 0
  const SpectralPoint p = SpectralPoint::make(w, kx, 0.0);
  const DopplerAmplitude at = doppler_amplitude(p, 0.0, base.plate1, base.temperature);
  CHECK(std::isfinite(at.im_coth_e));
  // approach sequence from both sides
  double prev_gap = 1e300;
  for (double h = 1e10; h > 1e6; h /= 10) {
    const DopplerAmplitude lo = doppler_amplitude(p, -h, base.plate1, base.temperature);
    const DopplerAmplitude hi = doppler_amplitude(p, h, base.plate1, base.temperature);
    const double g = std::abs(0.5 * (lo.im_coth_e + hi.im_coth_e) - at.im_coth_e);
    CHECK(g <= prev_gap);
    prev_gap = g;
  }
  CHECK(prev_gap < 1e-6 * std::abs(at.im_coth_e));
}

TEST_CASE("block 2 contract and scaling") {
  const PlateSystem base{1e-7, 300.0, metal(), dielectric()};
  const DynamicSystem sys{base, 1e-4 * speed_of_light};
  CHECK_THROWS_AS(integrand_block2(SpectralPoint::make(1e14, 2e14 / speed_of_light, 0.0), sys), Error);

  const DynamicSystem empty{{1e-7, 300.0, MaterialModel::vacuum(), dielectric()}, 1e-4 * speed_of_light};
  const SpectralPoint p = SpectralPoint::make(3e14, 0.5e14 / speed_of_light, 0.2e14 / speed_of_light);
  CHECK(integrand_block1(p, empty) == 0.0);
  CHECK(integrand_block2(p, empty) == 0.0);

  ParticleModel particle;
  particle.electric = Response::lorentz({{1e-30, 1e14, 2e13}});
  std::vector<double> vals;
  for (double n : {1e20, 1e21, 1e22}) {
    const DynamicSystem d{{1e-7, 300.0, rarified_material(particle, n), metal()}, 1e-4 * speed_of_light};
    vals.push_back(integrand_block2(p, d));
  }
  const double p1 = std::log10(vals[1] / vals[0]), p2 = std::log10(vals[2] / vals[1]);
  CHECK(p1 == doctest::Approx(2.0).epsilon(0.01));
  CHECK(p2 == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("block 2 oscillates in the gap without decay") {
  const double w = 4e14, k = 0.5 * w / speed_of_light;
  const SpectralPoint p = SpectralPoint::make(w, k, 0.0);
  const ReflectionPair r1 = reflection(p, metal()), r2 = reflection(p, dielectric());
  const double a = std::abs(r1.e * r2.e);
  const double amp = std::norm(r1.e) * std::norm(r2.e);
  double lo = 1e300, hi = 0;
  for (double l = 1e-7; l < 1e-5; l *= 1.01) {
    const DynamicSystem d{{l, 0.0, metal(), dielectric()}, 0.0};
    const double v = dynamic_integrand(p, d).block2[0] / (std::abs(vacuum_wavenumber(p)) * amp);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo >= 1.0 / ((1 + a) * (1 + a)) * (1 - 1e-12));
  CHECK(hi <= 1.0 / ((1 - a) * (1 - a)) * (1 + 1e-12));
  CHECK(hi / lo > 0.9 * ((1 + a) * (1 + a)) / ((1 - a) * (1 - a)));
}

TEST_CASE("moving-plate pressure") {
  const PlateSystem base{1e-7, 300.0, metal(), metal()};
  CHECK(pressure_dynamic({{1e-7, 300.0, MaterialModel::vacuum(), metal()}, 1e3}).total == 0.0);
  CHECK_THROWS_AS(pressure_dynamic({base, 0.02 * speed_of_light}), Error);
  CHECK_THROWS_AS(pressure_dynamic({{1e-7, 300.0, MaterialModel::ideal_metal(), metal()}, 0.0}), Error);

  StaticOptions so;
  so.rel_tol = 1e-3;
  const double stat = pressure_realfreq_split(base, so).value;
  const DynamicPressureResult rest = pressure_dynamic({base, 0.0});
  CHECK(std::abs(rest.total - stat) <= 2e-3 * std::abs(stat));
  CHECK(std::abs(rest.term1 + rest.term2 - rest.total) < 1e-12 * std::abs(rest.total));

  DynamicOptions unfolded;
  unfolded.fold_kx = false;
  const double v = 1e-4 * speed_of_light;
  const DynamicPressureResult a = pressure_dynamic({base, v}, unfolded), b = pressure_dynamic({base, -v}, unfolded);
  CHECK(std::abs(a.total - b.total) <= a.total_error + b.total_error);
  const DynamicPressureResult folded = pressure_dynamic({base, v});
  CHECK(std::abs(folded.total - a.total) <= 2e-3 * std::abs(a.total));
}

TEST_CASE("velocity differences do not depend on the other cases in a batch") {
  const double v = 1e-4 * speed_of_light;
  const std::vector<DynamicCombination> combos = {
      {{{1, DynamicTerm::total, 1.0}, {0, DynamicTerm::total, -1.0}}, 2e-3},
      {{{1, DynamicTerm::term1, 1.0}, {0, DynamicTerm::term1, -1.0}}, 2e-3}};
  const DynamicBatchResult pair =
      pressure_dynamic_batch(metal(), 300.0, {{metal(), 1e-7, 0.0}, {metal(), 1e-7, v}}, combos);
  const DynamicBatchResult triple = pressure_dynamic_batch(
      metal(), 300.0, {{metal(), 1e-7, 0.0}, {metal(), 1e-7, v}, {metal(), 1e-7, 10 * v}}, combos);
  for (int i = 0; i < 2; ++i) {
    const double a = pair.combination_values[i], b = triple.combination_values[i];
    CHECK(std::abs(a - b) <= 2e-3 * (std::abs(a) + std::abs(b)));
  }
  // quadratic onset of the total
  CHECK(pair.combination_values[0] > 0.0);
}
