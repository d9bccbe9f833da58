#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/optics.hpp"

using namespace casimir;
using constants::pi;
using constants::speed_of_light;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Straightforward Fresnel amplitudes with the same branch rules.
void fresnel(double w, double k, cplx eps, cplx mu, cplx& de, cplx& dm) {
  const double c = speed_of_light;
  const double s0 = k * k - w * w / (c * c);
  const cplx q0 = s0 >= 0 ? cplx(std::sqrt(s0)) : cplx(0.0, -std::sqrt(-s0));
  cplx q1 = std::sqrt(cplx(k * k) - w * w / (c * c) * eps * mu);
  if (q1.real() < 0) q1 = -q1;
  de = (eps * q0 - q1) / (eps * q0 + q1);
  dm = (mu * q0 - q1) / (mu * q0 + q1);
}

}  // namespace

TEST_CASE("materials: Drude against direct formula") {
  const double wp = 1.37e16, g = 5.3e13, w = 1e15;
  const MaterialModel m = MaterialModel::drude(wp, g);
  const cplx direct = 1.0 - wp * wp / (cplx(w) * cplx(w, g));
  CHECK(rel(permittivity(m, w), direct) < 1e-14);
  CHECK(permittivity(m, -w) == std::conj(permittivity(m, w)));
  CHECK(permittivity(MaterialModel::vacuum(), 3e15) == cplx(1.0));
}

TEST_CASE("materials: imaginary axis") {
  CHECK(imag_axis_permittivity(MaterialModel::vacuum(), 1e15) == 1.0);
  const MaterialModel d = MaterialModel::drude(2e14, 5e13);
  double prev = imag_axis_permittivity(d, 1e12);
  for (double xi = 2e12; xi < 1e18; xi *= 2) {
    const double e = imag_axis_permittivity(d, xi);
    CHECK(e < prev);
    CHECK(e >= 1.0);
    prev = e;
  }
  CHECK(prev - 1.0 < 1e-6);
  const Oscillator o{2.5, 3e15, 1e14};
  const MaterialModel l = MaterialModel::lorentz({o});
  const double xi = 1.7e15;
  CHECK(std::abs(imag_axis_permittivity(l, xi) - (1 + o.strength * o.resonance * o.resonance /
                                                          (o.resonance * o.resonance + xi * xi + o.damping * xi))) <
        1e-14);
}

TEST_CASE("materials: polarizability") {
  ParticleModel zero;
  CHECK(polarizability(zero, Channel::electric, 1e15) == cplx(0.0));
  ParticleModel p;
  p.electric = Response::lorentz({{1e-30, 1e14, 2e13}});
  CHECK(polarizability(p, Channel::electric, -3e14) == std::conj(polarizability(p, Channel::electric, 3e14)));
  ParticleModel s;
  s.electric = Response::constant(2e-30);
  CHECK(polarizability(s, Channel::electric, 1e10) == cplx(2e-30));
  CHECK(polarizability(s, Channel::electric, 1e17) == cplx(2e-30));
}

TEST_CASE("materials: invalid models rejected") {
  CHECK_THROWS_AS(MaterialModel::constant(4.0, std::numeric_limits<double>::infinity()).validate(), Error);
  CHECK_THROWS_AS(MaterialModel::drude(-1.0, 1e13).validate(), Error);
}

TEST_CASE("wavenumbers") {
  CHECK(vacuum_wavenumber(SpectralPoint::make(0.0, 1e7, 0.0)) == cplx(1e7));
  const cplx q = vacuum_wavenumber(SpectralPoint::make(3e15, 0.0, 0.0));
  CHECK(q.real() == 0.0);
  CHECK(std::abs(q.imag() + 3e15 / speed_of_light) < 1e-9 * 1e7);
  CHECK(std::abs(vacuum_wavenumber(SpectralPoint::make(3e15, 3e15 / speed_of_light, 0.0))) < 1.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 500; ++i) {
    const double w = 1e13 * std::pow(1e4, u(rng));
    const double k = w / speed_of_light * 3 * u(rng);
    const SpectralPoint p = SpectralPoint::make(w, k, 0.0);
    CHECK(medium_wavenumber(p, 1.0, 1.0) == vacuum_wavenumber(p));
    const cplx eps(10 * u(rng) - 5, 0.01 + 5 * u(rng));
    const cplx q1 = medium_wavenumber(p, eps, 1.0);
    CHECK(q1.real() > 0.0);
    const cplx target = cplx(k * k) - w * w / (speed_of_light * speed_of_light) * eps;
    CHECK(rel(q1 * q1, target) < 1e-13);
  }
}

TEST_CASE("reflection: limits and independent Fresnel") {
  const SpectralPoint p = SpectralPoint::make(1e15, 2e6, 1e6);
  const ReflectionPair v = reflection(p, MaterialModel::vacuum());
  CHECK(v.e == cplx(0.0));
  CHECK(v.m == cplx(0.0));

  const cplx eps(4.0, 0.5);
  const double w = 1e15;
  const ReflectionPair nr = reflection(SpectralPoint::make(w, 1e3 * w / speed_of_light, 0.0), eps, 1.0);
  CHECK(rel(nr.e, (eps - 1.0) / (eps + 1.0)) < 1e-6);

  const MaterialModel d = MaterialModel::drude(1.37e16, 5.3e13);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 500; ++i) {
    const double wi = 1e12 * std::pow(1e5, u(rng));
    const double k = wi / speed_of_light * 4 * u(rng);
    cplx de, dm;
    fresnel(wi, k, 1.0 - 1.37e16 * 1.37e16 / (cplx(wi) * cplx(wi, 5.3e13)), 1.0, de, dm);
    const ReflectionPair r = reflection(SpectralPoint::make(wi, k, 0.0), d);
    CHECK(rel(r.e, de) < 1e-10);
    CHECK(rel(r.m, dm) < 1e-10);
  }
}

TEST_CASE("reflection: crossing and passivity") {
  const MaterialModel d = MaterialModel::drude(2e14, 5e13);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 300; ++i) {
    const double w = 1e12 * std::pow(1e4, u(rng));
    const double k = w / speed_of_light * 2 * u(rng);
    const ReflectionPair a = reflection(SpectralPoint::make(w, k, 0.0), d);
    const ReflectionPair b = reflection(SpectralPoint::make(-w, k, 0.0), d);
    CHECK(b.e == std::conj(a.e));
    CHECK(rel(reflection_continued(SpectralPoint::make(-w, k, 0.0), d).e, b.e) < 1e-12);
    if (k < w / speed_of_light) {
      CHECK(std::abs(a.e) <= 1.0);
      CHECK(std::abs(a.m) <= 1.0);
    }
  }
}

TEST_CASE("rarified amplitudes") {
  ParticleModel none;
  none.density = 1e25;
  const ReflectionPair z = rarified_delta(SpectralPoint::make(1e14, 1e7, 0.0), none);
  CHECK(z.e == cplx(0.0));
  CHECK(z.m == cplx(0.0));

  ParticleModel p;
  p.electric = Response::constant(3e-30);
  p.density = 1e22;
  const ReflectionPair s = rarified_delta(SpectralPoint::make(0.0, 1e7, 0.0), p);
  CHECK(std::abs(s.e.real() - 2 * pi * p.density * 3e-30) < 1e-15 * 2 * pi * p.density * 3e-30 + 1e-30);

  // first order in n: full Fresnel of eps = 1 + 4 pi n alpha at low w, large k
  p.electric = Response::lorentz({{3e-30, 1e15, 1e14}});
  const double w = 1e12, k = 1e4 * w / speed_of_light;
  const SpectralPoint pt = SpectralPoint::make(w, k, 0.0);
  const cplx a0 = rarified_delta(pt, p).e;
  for (double n : {1e20, 1e19}) {
    const cplx full = reflection(pt, 1.0 + 4 * pi * n * p.electric.at(w), 1.0).e;
    const cplx linear = a0 * (n / p.density);
    CHECK(rel(full, linear) < 10 * std::abs(4 * pi * n * 3e-30) + 1e-6);
  }
}

TEST_CASE("loop function") {
  CHECK(loop_function(0.0, 0.5, 1e7, 1e-7) == cplx(0.0));
  const double q = 1e7, l = 1e-7;
  const double e = std::exp(-2 * q * l);
  const cplx v = loop_function(1.0, 1.0, q, l);
  CHECK(v.imag() == 0.0);
  CHECK(std::abs(v.real() - e / (1 - e)) < 1e-14);

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    const cplx d1(u(rng), u(rng)), d2(u(rng), u(rng));
    const cplx q0(std::abs(u(rng)) * 1e7, u(rng) * 1e7);
    const double gap = 1e-8 + 1e-6 * std::abs(u(rng));
    const cplx x = d1 * d2 * std::exp(-2.0 * q0 * gap);
    if (std::abs(1.0 - x) < 1e-3 || std::abs(x) < 1e-12) continue;
    const cplx direct = 1.0 / (std::exp(2.0 * q0 * gap) / (d1 * d2) - 1.0);
    worst = std::max(worst, rel(loop_function(d1, d2, q0, gap), direct));
  }
  CHECK(worst <= 1e-12);
}
