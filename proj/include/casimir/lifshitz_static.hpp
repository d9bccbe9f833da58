#pragma once

#include <cstddef>
#include <string>

#include "casimir/materials.hpp"
#include "casimir/optics.hpp"

namespace casimir {

/// Two parallel half-spaces separated by a vacuum gap.
struct PlateSystem {
  double gap = 0.0;          // l, m
  double temperature = 0.0;  // T, K
  MaterialModel plate1;
  MaterialModel plate2;

  void validate() const;
};

/// Optional parts of a pressure; a part is meaningful only when its flag is set.
struct PressureBreakdown {
  double electric = 0.0;
  double magnetic = 0.0;
  bool has_regions = false;
  double evanescent = 0.0;
  double propagating = 0.0;
  bool has_terms = false;
  double cross_term = 0.0;   // Im/Re cross term of the rearranged integrand
  double second_term = 0.0;  // |Delta|^4 term, propagating waves only
};

/// Pressure in Pa; negative means attraction.
struct PressureResult {
  double value = 0.0;
  double error = 0.0;
  PressureBreakdown breakdown;
  bool converged = false;
  std::size_t evaluations = 0;
  double omega_cutoff = 0.0;      // rad/s, 0 when the route needs none
  double truncation_error = 0.0;  // part of error attributed to the cutoff
};

struct StaticOptions {
  double rel_tol = 1e-4;
  double abs_tol = 0.0;
  std::size_t max_evaluations = 40'000'000;
  std::size_t max_matsubara_terms = 200'000;
};

/// Imaginary-frequency Lifshitz sum (integral over xi when T = 0).
PressureResult pressure_matsubara(const PlateSystem& sys, const StaticOptions& opt = {});

/// Real-frequency route with the loop function X/(1 - X). Needs lossy plates.
PressureResult pressure_realfreq_loop(const PlateSystem& sys, const StaticOptions& opt = {});

/// Real-frequency route with the integrand split into the cross term and the
/// propagating-wave |Delta|^4 term. Needs lossy plates.
PressureResult pressure_realfreq_split(const PlateSystem& sys, const StaticOptions& opt = {});

/// Integrand pieces at one real spectral point, without the thermal factor and
/// the -hbar/(4 pi^3) prefactor. Index 0 is the electric channel, 1 the magnetic one.
struct StaticIntegrand {
  double loop[2] = {0.0, 0.0};    // Im[q0 X/(1-X)]
  double cross[2] = {0.0, 0.0};   // (Im D1 Re[q0 e D2] + Re D1 Im[q0 e D2]) / |1-X|^2
  double second[2] = {0.0, 0.0};  // -|D1|^2 |D2|^2 Im[q0 exp(-2(q0+q0*)l)] / |1-X|^2
};
StaticIntegrand static_integrand(const SpectralPoint& p, const PlateSystem& sys);

/// coth(hbar w / 2 k_B T); sign(w) at T = 0.
double thermal_factor(double omega, double temperature);

}  // namespace casimir
