#pragma once

#include <cstddef>

#include "casimir/lifshitz_dynamic.hpp"

namespace casimir {

/// A polarizable particle at height z above a resting surface, moving with V along x.
struct ParticleSurfaceSystem {
  ParticleModel particle;
  MaterialModel surface;
  double separation = 0.0;   // z, m
  double temperature = 0.0;  // T, K
  double velocity = 0.0;     // V, m/s
  double max_velocity_fraction = 0.01;

  void validate() const;
};

struct PolderOptions {
  double rel_tol = 1e-3;
  double abs_tol = 0.0;
  std::size_t max_evaluations = 60'000'000;
  /// false drops alpha_m, for comparison with electric-only results.
  bool magnetic = true;
  bool fold_kx = true;
  std::size_t max_matsubara_terms = 200'000;
};

/// Force along z in N; negative means attraction.
struct PolderResult {
  double force = 0.0;
  double error = 0.0;
  double electric = 0.0;  // part carried by alpha_e
  double magnetic = 0.0;  // part carried by alpha_m
  /// (1/n1) dP/dl taken without the minus sign that the dilute-slab picture requires;
  /// equals -force and is reported for comparison only.
  double literal_sign_force = 0.0;
  double omega_cutoff = 0.0;
  double truncation_error = 0.0;
  bool converged = false;
  std::size_t evaluations = 0;
};

/// First-order-in-density limit of the moving-plate pressure, differentiated in the gap
/// analytically. The density stored in the particle model does not enter.
PolderResult cp_force_analytic(const ParticleSurfaceSystem& sys, const PolderOptions& opt = {});

/// Imaginary-frequency Casimir-Polder force of a particle at rest (V must be 0).
/// The surface may be an ideal metal.
PolderResult cp_force_matsubara(const ParticleSurfaceSystem& sys, const PolderOptions& opt = {});

struct FiniteDifferenceOptions {
  PolderOptions base;
  /// n1 in 1/m^3; 0 picks the density with max |4 pi n1 alpha| = 1e-6.
  double density = 0.0;
  /// Half-width of the central difference; 0 means z/200.
  double step = 0.0;
  /// Compare against the result at n1/2 and throw ErrorKind::not_rarified on disagreement.
  bool check_linearity = true;
  /// Converge the block-2 parts to 2 % of their own size; otherwise only relative to the force.
  bool resolve_term2 = false;
};

struct FiniteDifferenceResult {
  double force = 0.0;  // at n1, step
  double error = 0.0;
  double literal_sign_force = 0.0;
  double force_half_density = 0.0;  // at n1/2, step
  double force_half_step = 0.0;     // at n1, step/2
  /// [D(step) - D(step/2)] / [D(step/2) - D(step/4)], about 4 for a central difference.
  double richardson_ratio = 0.0;
  /// Contributions of the two pressure blocks to dP/dl (not divided by n1).
  double term1_derivative = 0.0;
  double term2_derivative = 0.0;
  double term2_derivative_half_density = 0.0;
  double density = 0.0;
  double step = 0.0;
  double omega_cutoff = 0.0;
  bool converged = false;
  std::size_t evaluations = 0;
};

/// Central difference of the moving-plate pressure for a dilute plate 1 built from the
/// particle (eps - 1 = 4 pi n1 alpha_e, mu - 1 = 4 pi n1 alpha_m), divided by n1.
FiniteDifferenceResult cp_force_finite_difference(const ParticleSurfaceSystem& sys,
                                                  const FiniteDifferenceOptions& opt = {});

/// Largest |4 pi alpha(w)| of the particle over real frequencies (electric or magnetic).
double peak_susceptibility_per_density(const ParticleModel& particle);

}  // namespace casimir
