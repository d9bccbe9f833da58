#pragma once

#include <complex>

#include "casimir/materials.hpp"

namespace casimir {

/// A real frequency and an in-plane wavevector.
///
/// The squared vacuum wavenumber q0^2 = k^2 - w^2/c^2 is stored explicitly so that
/// integrators working in light-cone adapted variables can supply it without the
/// cancellation of forming k^2 and w^2/c^2 separately.
struct SpectralPoint {
  double omega = 0.0;  // rad/s
  double kx = 0.0;     // rad/m
  double ky = 0.0;     // rad/m
  double q0_squared = 0.0;

  static SpectralPoint make(double omega, double kx, double ky);
  /// Caller guarantees q0_squared == kx^2 + ky^2 - omega^2/c^2 up to rounding.
  static SpectralPoint with_q0_squared(double omega, double kx, double ky, double q0_squared);

  double k_squared() const noexcept { return kx * kx + ky * ky; }
  double k() const noexcept;
  bool propagating() const noexcept { return q0_squared < 0.0; }
  bool evanescent() const noexcept { return q0_squared > 0.0; }
  /// Same wavevector seen at another frequency (Doppler-shifted frame).
  SpectralPoint at_frequency(double omega_shifted) const;
};

/// Reflection amplitudes of one interface at one spectral point.
struct ReflectionPair {
  cplx e = 0.0;   // p polarization, Delta_e
  cplx m = 0.0;   // s polarization, Delta_m
  cplx q0 = 0.0;  // vacuum wavenumber used
  cplx q1 = 0.0;  // medium wavenumber used
};

/// q0 = sqrt(k^2 - w^2/c^2): real positive when evanescent, -i|q0| when propagating.
cplx vacuum_wavenumber(const SpectralPoint& p);
/// q_i = sqrt(k^2 - w^2 eps mu / c^2) with Re q >= 0, and Im q <= 0 when Re q == 0.
cplx medium_wavenumber(const SpectralPoint& p, cplx eps, cplx mu);
/// Same branch rule, from the susceptibilities chi_e = eps - 1 and chi_m = mu - 1.
cplx medium_wavenumber_chi(const SpectralPoint& p, cplx chi_e, cplx chi_m);

ReflectionPair reflection(const SpectralPoint& p, cplx eps, cplx mu);
ReflectionPair reflection_chi(const SpectralPoint& p, cplx chi_e, cplx chi_m);
/// Interface reflection of a plate model. Negative frequencies are evaluated as
/// conj(reflection(-w)); ideal metals return the exact limits (1, -1).
ReflectionPair reflection(const SpectralPoint& p, const MaterialModel& model);
/// Independent route for w < 0: material closed form continued to negative
/// frequency and wavenumbers taken on the retarded branch for that sign.
ReflectionPair reflection_continued(const SpectralPoint& p, const MaterialModel& model);

/// Reflection amplitudes at imaginary frequency i xi (real valued). At xi = 0 the
/// static limit of each model is used (Drude-type TE amplitude vanishes).
struct ImaginaryReflection {
  double e = 0.0;
  double m = 0.0;
};
ImaginaryReflection reflection_imaginary(double xi, double k_squared, const MaterialModel& model);

/// First-order-in-density reflection amplitudes of a dilute gas of particles:
///   Delta_e = pi n [alpha_e (2k^2 - w^2/c^2) + alpha_m w^2/c^2] / q0^2,
///   Delta_m = pi n [alpha_m (2k^2 - w^2/c^2) + alpha_e w^2/c^2] / q0^2.
/// Polarizabilities are taken at response_omega (the Doppler-shifted frequency for
/// a moving particle); the kinematic factors use p.
ReflectionPair rarified_delta(const SpectralPoint& p, const ParticleModel& particle,
                              double response_omega);
inline ReflectionPair rarified_delta(const SpectralPoint& p, const ParticleModel& particle) {
  return rarified_delta(p, particle, p.omega);
}
/// Imaginary-frequency form of rarified_delta (w -> i xi), density included.
ImaginaryReflection rarified_delta_imaginary(double xi, double k_squared,
                                             const ParticleModel& particle);

/// (Delta1^-1 Delta2^-1 exp(2 q0 l) - 1)^-1, evaluated as
/// (X - |X|^2) / |1 - X|^2 with X = Delta1 Delta2 exp(-2 q0 l).
cplx loop_function(cplx delta1, cplx delta2, cplx q0, double gap);

/// Multiple-reflection factor X = Delta1 Delta2 exp(-2 q0 l).
cplx round_trip(cplx delta1, cplx delta2, cplx q0, double gap);

}  // namespace casimir
