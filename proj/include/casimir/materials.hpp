#pragma once

#include <complex>
#include <limits>
#include <string>
#include <vector>

namespace casimir {

using cplx = std::complex<double>;

/// One damped oscillator term  s w0^2 / (w0^2 - w^2 - i g w).
struct Oscillator {
  double strength = 0.0;   // static contribution s (dimensionless, or volume for particles)
  double resonance = 0.0;  // w0, rad/s
  double damping = 0.0;    // g, rad/s

  bool operator==(const Oscillator&) const = default;
};

/// Behaviour of a response function as xi -> 0 on the imaginary axis.
struct StaticLimit {
  bool divergent = false;  // chi(i xi) -> infinity (drude, plasma)
  double value = 0.0;      // chi(0) when finite
  double xi2_chi = 0.0;    // lim xi^2 chi(i xi); drude -> 0, plasma -> s wp^2
};

/// A causal linear-response function chi(w), the deviation of a permittivity,
/// permeability or polarizability from its vacuum value.
///
/// Closed forms are evaluated for w > 0 only; negative frequencies go through
/// chi(-w) = conj(chi(w)) so every kind is crossing symmetric by construction.
class Response {
 public:
  enum class Kind { zero, constant, drude, plasma, lorentz };

  Response() = default;

  static Response zero();
  /// chi0 / (1 - i w / cutoff); an infinite cutoff gives a frequency-independent value.
  static Response constant(double chi0, double cutoff = std::numeric_limits<double>::infinity());
  /// -s wp^2 / (w (w + i g))
  static Response drude(double plasma_frequency, double damping, double strength = 1.0);
  /// -s wp^2 / w^2
  static Response plasma(double plasma_frequency, double strength = 1.0);
  static Response lorentz(std::vector<Oscillator> oscillators);

  Kind kind() const noexcept { return kind_; }
  double value() const noexcept { return value_; }
  double cutoff() const noexcept { return cutoff_; }
  double plasma_frequency() const noexcept { return plasma_frequency_; }
  double damping() const noexcept { return damping_; }
  double strength() const noexcept { return strength_; }
  const std::vector<Oscillator>& oscillators() const noexcept { return oscillators_; }

  /// chi(w) on the real axis. Throws ErrorKind::static_pole at w = 0 for drude/plasma.
  cplx at(double omega) const;
  /// Closed form evaluated literally at any sign of w (no crossing reflection);
  /// used to cross-check the crossing-symmetric path.
  cplx closed_form(double omega) const;
  /// chi(i xi), xi >= 0. Throws ErrorKind::zero_frequency_convention at xi = 0
  /// for kinds that diverge there; use static_limit() instead.
  double at_imaginary(double xi) const;
  StaticLimit static_limit() const;

  bool is_zero() const noexcept;
  /// Im chi(w) > 0 somewhere on w > 0.
  bool lossy() const noexcept;
  /// chi(w) -> 0 as w -> infinity.
  bool transparent() const noexcept;
  /// Frequency above which |chi(w)| < threshold (0 for the zero response).
  double transparency_frequency(double threshold) const;
  /// Frequencies where the response has structure (resonances, damping rates).
  std::vector<double> characteristic_frequencies() const;

  /// Same kind with every strength multiplied by factor.
  Response scaled(double factor) const;

  bool operator==(const Response&) const = default;

 private:
  cplx at_positive(double omega) const;

  Kind kind_ = Kind::zero;
  double value_ = 0.0;
  double cutoff_ = std::numeric_limits<double>::infinity();
  double plasma_frequency_ = 0.0;
  double damping_ = 0.0;
  double strength_ = 1.0;
  std::vector<Oscillator> oscillators_;
};

/// Dielectric and magnetic response of a plate.
class MaterialModel {
 public:
  enum class Kind { vacuum, constant, drude, plasma, lorentz, ideal_metal };

  MaterialModel() = default;

  static MaterialModel vacuum();
  /// Static permittivity with a Debye-type roll-off above cutoff; a finite
  /// cutoff is mandatory unless eps == 1.
  static MaterialModel constant(double eps, double cutoff);
  static MaterialModel drude(double plasma_frequency, double damping);
  static MaterialModel plasma(double plasma_frequency);
  static MaterialModel lorentz(std::vector<Oscillator> oscillators);
  /// Perfect conductor, treated as an exact limit rather than a large plasma frequency.
  static MaterialModel ideal_metal();
  /// Dilute medium eps - 1 = 4 pi n alpha_e, mu - 1 = 4 pi n alpha_m (Gaussian polarizabilities).
  static MaterialModel from_susceptibilities(Response electric, Response magnetic);

  MaterialModel with_magnetic(Response mu_minus_one) const;

  Kind kind() const noexcept { return kind_; }
  bool is_ideal_metal() const noexcept { return kind_ == Kind::ideal_metal; }
  bool is_vacuum() const noexcept;
  const Response& electric() const noexcept { return electric_; }
  const Response& magnetic() const noexcept { return magnetic_; }

  bool lossy() const noexcept;
  /// Throws ErrorKind::invalid_model when the transparency requirement is violated.
  void validate() const;

  bool operator==(const MaterialModel&) const = default;

 private:
  Kind kind_ = Kind::vacuum;
  Response electric_;
  Response magnetic_;
};

/// Small particle: Gaussian-convention polarizabilities (volume units, m^3)
/// and the number density used when the particle is smeared into a dilute plate.
struct ParticleModel {
  Response electric;
  Response magnetic;
  double density = 0.0;  // n1, 1/m^3

  bool operator==(const ParticleModel&) const = default;
};

enum class Channel { electric, magnetic };

/// eps(w); crossing symmetric for w < 0.
cplx permittivity(const MaterialModel& model, double omega);
cplx permeability(const MaterialModel& model, double omega);
/// eps(i xi), real and >= 1 for passive models.
double imag_axis_permittivity(const MaterialModel& model, double xi);
double imag_axis_permeability(const MaterialModel& model, double xi);
cplx polarizability(const ParticleModel& particle, Channel channel, double omega);

/// Dilute plate built from a particle model: eps - 1 = 4 pi n alpha_e, mu - 1 = 4 pi n alpha_m.
MaterialModel rarified_material(const ParticleModel& particle, double density);

}  // namespace casimir
