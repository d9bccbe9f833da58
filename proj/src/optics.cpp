#include "casimir/optics.hpp"

#include <cmath>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"

namespace casimir {

namespace {

constexpr double c_light = constants::speed_of_light;

// Principal square root with the tie-break for a purely imaginary result chosen
// by the sign of the frequency (retarded continuation).
cplx branch_sqrt(cplx s, bool negative_frequency) {
  cplx q = std::sqrt(s);
  if (q.real() == 0.0) {
    const double mag = std::abs(q.imag());
    q = cplx(0.0, negative_frequency ? mag : -mag);
  }
  return q;
}

cplx vacuum_wavenumber_signed(double q0_squared, bool negative_frequency) {
  if (q0_squared >= 0.0) return std::sqrt(q0_squared);
  const double mag = std::sqrt(-q0_squared);
  return cplx(0.0, negative_frequency ? mag : -mag);
}

ReflectionPair build_reflection(const SpectralPoint& p, cplx chi_e, cplx chi_m, bool negative_frequency) {
  ReflectionPair r;
  const double w2 = p.omega * p.omega / (c_light * c_light);
  const cplx eps_mu_minus_one = chi_e + chi_m + chi_e * chi_m;
  r.q0 = vacuum_wavenumber_signed(p.q0_squared, negative_frequency);
  r.q1 = branch_sqrt(p.q0_squared - w2 * eps_mu_minus_one, negative_frequency);
  if (chi_e == 0.0 && chi_m == 0.0) return r;

  const cplx sum = r.q0 + r.q1;
  // q0 - q1 = (q0^2 - q1^2) / (q0 + q1), free of cancellation for dilute media.
  const cplx diff = sum == 0.0 ? cplx(0.0) : w2 * eps_mu_minus_one / sum;
  const cplx den_e = sum + r.q0 * chi_e;
  const cplx den_m = sum + r.q0 * chi_m;
  if (den_e == 0.0 || den_m == 0.0)
    throw Error(ErrorKind::reflection_pole, "vanishing reflection denominator");
  r.e = (diff + r.q0 * chi_e) / den_e;
  r.m = (diff + r.q0 * chi_m) / den_m;
  return r;
}

ReflectionPair ideal_reflection(const SpectralPoint& p) {
  ReflectionPair r;
  r.e = 1.0;
  r.m = -1.0;
  r.q0 = vacuum_wavenumber(p);
  r.q1 = cplx(std::numeric_limits<double>::infinity(), 0.0);
  return r;
}

}  // namespace

SpectralPoint SpectralPoint::make(double omega, double kx, double ky) {
  const double k = std::hypot(kx, ky);
  const double kw = std::abs(omega) / c_light;
  return {omega, kx, ky, (k - kw) * (k + kw)};
}

SpectralPoint SpectralPoint::with_q0_squared(double omega, double kx, double ky, double q0_squared) {
  return {omega, kx, ky, q0_squared};
}

double SpectralPoint::k() const noexcept { return std::hypot(kx, ky); }

SpectralPoint SpectralPoint::at_frequency(double omega_shifted) const {
  const double shift = (omega_shifted - omega) * (omega_shifted + omega) / (c_light * c_light);
  return {omega_shifted, kx, ky, q0_squared - shift};
}

cplx vacuum_wavenumber(const SpectralPoint& p) {
  return vacuum_wavenumber_signed(p.q0_squared, false);
}

cplx medium_wavenumber_chi(const SpectralPoint& p, cplx chi_e, cplx chi_m) {
  const double w2 = p.omega * p.omega / (c_light * c_light);
  return branch_sqrt(p.q0_squared - w2 * (chi_e + chi_m + chi_e * chi_m), false);
}

cplx medium_wavenumber(const SpectralPoint& p, cplx eps, cplx mu) {
  return medium_wavenumber_chi(p, eps - 1.0, mu - 1.0);
}

ReflectionPair reflection_chi(const SpectralPoint& p, cplx chi_e, cplx chi_m) {
  return build_reflection(p, chi_e, chi_m, false);
}

ReflectionPair reflection(const SpectralPoint& p, cplx eps, cplx mu) {
  return build_reflection(p, eps - 1.0, mu - 1.0, false);
}

ReflectionPair reflection(const SpectralPoint& p, const MaterialModel& model) {
  if (model.is_ideal_metal()) return ideal_reflection(p);
  if (model.is_vacuum()) {
    ReflectionPair r;
    r.q0 = r.q1 = vacuum_wavenumber(p);
    return r;
  }
  if (p.omega < 0.0) {
    SpectralPoint mirrored = p;
    mirrored.omega = -p.omega;
    ReflectionPair r = build_reflection(mirrored, model.electric().at(mirrored.omega),
                                        model.magnetic().at(mirrored.omega), false);
    return {std::conj(r.e), std::conj(r.m), std::conj(r.q0), std::conj(r.q1)};
  }
  if (p.omega == 0.0) {
    const ImaginaryReflection s = reflection_imaginary(0.0, p.k_squared(), model);
    ReflectionPair r;
    r.e = s.e;
    r.m = s.m;
    r.q0 = r.q1 = std::sqrt(std::max(p.q0_squared, 0.0));
    return r;
  }
  return build_reflection(p, model.electric().at(p.omega), model.magnetic().at(p.omega), false);
}

ReflectionPair reflection_continued(const SpectralPoint& p, const MaterialModel& model) {
  if (model.is_ideal_metal()) return ideal_reflection(p);
  return build_reflection(p, model.electric().closed_form(p.omega),
                          model.magnetic().closed_form(p.omega), p.omega < 0.0);
}

ImaginaryReflection reflection_imaginary(double xi, double k_squared, const MaterialModel& model) {
  if (xi < 0.0) throw Error(ErrorKind::invalid_argument, "imaginary frequency must be non-negative");
  if (model.is_ideal_metal()) {
    // Static TE amplitude of a perfect conductor taken as the limit of a lossy metal.
    return {1.0, xi > 0.0 ? -1.0 : 0.0};
  }
  if (model.is_vacuum()) return {};

  const double q = std::sqrt(k_squared + xi * xi / (c_light * c_light));
  if (xi > 0.0) {
    const double chi_e = model.electric().at_imaginary(xi);
    const double chi_m = model.magnetic().at_imaginary(xi);
    const double x2 = xi * xi / (c_light * c_light);
    const double excess = chi_e + chi_m + chi_e * chi_m;
    const double q1 = std::sqrt(q * q + x2 * excess);
    const double diff = -x2 * excess / (q + q1);
    return {(diff + q * chi_e) / (q + q1 + q * chi_e), (diff + q * chi_m) / (q + q1 + q * chi_m)};
  }

  // xi = 0: static limits.
  const StaticLimit le = model.electric().static_limit();
  const StaticLimit lm = model.magnetic().static_limit();
  const double c2 = c_light * c_light;
  auto amplitude = [&](const StaticLimit& self, const StaticLimit& other) -> double {
    if (self.divergent) return 1.0;
    const double factor = 1.0 + self.value;
    // q1^2 = k^2 + lim xi^2 (eps mu - 1) / c^2
    const double extra = other.divergent ? other.xi2_chi * factor / c2 : 0.0;
    const double q1 = std::sqrt(k_squared + extra);
    const double num = q * factor - q1;
    const double den = q * factor + q1;
    return den == 0.0 ? 0.0 : num / den;
  };
  return {amplitude(le, lm), amplitude(lm, le)};
}

ReflectionPair rarified_delta(const SpectralPoint& p, const ParticleModel& particle, double response_omega) {
  if (p.q0_squared == 0.0)
    throw Error(ErrorKind::light_cone_singular, "rarified substitution singular on light cone");
  const double w2 = p.omega * p.omega / (c_light * c_light);
  const double transverse = 2.0 * p.q0_squared + w2;  // 2k^2 - w^2/c^2
  const cplx alpha_e = particle.electric.at(response_omega);
  const cplx alpha_m = particle.magnetic.at(response_omega);
  const double scale = constants::pi * particle.density / p.q0_squared;
  ReflectionPair r;
  r.e = scale * (alpha_e * transverse + alpha_m * w2);
  r.m = scale * (alpha_m * transverse + alpha_e * w2);
  r.q0 = vacuum_wavenumber(p);
  r.q1 = r.q0;
  return r;
}

ImaginaryReflection rarified_delta_imaginary(double xi, double k_squared, const ParticleModel& particle) {
  const double x2 = xi * xi / (c_light * c_light);
  const double q2 = k_squared + x2;
  if (q2 == 0.0)
    throw Error(ErrorKind::light_cone_singular, "rarified substitution singular at k = xi = 0");
  const double alpha_e = particle.electric.at_imaginary(xi);
  const double alpha_m = particle.magnetic.at_imaginary(xi);
  const double transverse = 2.0 * k_squared + x2;
  const double scale = constants::pi * particle.density / q2;
  return {scale * (alpha_e * transverse - alpha_m * x2), scale * (alpha_m * transverse - alpha_e * x2)};
}

cplx round_trip(cplx delta1, cplx delta2, cplx q0, double gap) {
  return delta1 * delta2 * std::exp(-2.0 * q0 * gap);
}

cplx loop_function(cplx delta1, cplx delta2, cplx q0, double gap) {
  const cplx x = round_trip(delta1, delta2, q0, gap);
  if (x == 1.0) throw Error(ErrorKind::loop_divergence, "multiple-reflection series diverges (X = 1)");
  return (x - std::norm(x)) / std::norm(1.0 - x);
}

}  // namespace casimir
