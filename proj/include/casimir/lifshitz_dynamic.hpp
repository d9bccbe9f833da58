#pragma once

#include <cstddef>
#include <vector>

#include "casimir/lifshitz_static.hpp"

namespace casimir {

/// Plate 1 slides parallel to plate 2 with velocity V along x.
struct DynamicSystem {
  PlateSystem base;
  double velocity = 0.0;                // V, m/s
  double max_velocity_fraction = 0.01;  // guard |V| < fraction * c

  void validate() const;
};

struct DynamicPressureResult {
  double total = 0.0;
  double total_error = 0.0;
  double term1 = 0.0;  // cross-term block, whole (w, k) domain
  double term1_error = 0.0;
  double term2 = 0.0;  // |Delta|^4 block, propagating waves only
  double term2_error = 0.0;
  double electric = 0.0;
  double magnetic = 0.0;
  double omega_cutoff = 0.0;
  double truncation_error = 0.0;
  bool converged = false;
  std::size_t evaluations = 0;
};

struct DynamicOptions {
  double rel_tol = 1e-3;
  double abs_tol = 0.0;
  std::size_t max_evaluations = 60'000'000;
  /// Integrate f(phi) + f(pi - phi) over [0, pi/2] instead of f over [0, pi].
  /// Exact either way; folding removes the part odd in V before integration.
  bool fold_kx = true;
  /// Converge term1 and term2 of every case to rel_tol of its total. Without this
  /// only totals and combinations drive the refinement.
  bool resolve_terms = true;
};

/// How plate-1 amplitudes are obtained when the shifted frequency is negative.
enum class CrossingPath { conjugate, continued };

/// Plate-1 amplitudes at w+ = w + kx V, and Im Delta1(w+) coth(hbar w+ / 2 k_B T),
/// which has a finite limit at w+ = 0.
struct DopplerAmplitude {
  cplx e = 0.0;
  cplx m = 0.0;
  double im_coth_e = 0.0;
  double im_coth_m = 0.0;
};
DopplerAmplitude doppler_amplitude(const SpectralPoint& lab, double omega_plus, const MaterialModel& plate1,
                                   double temperature, CrossingPath path = CrossingPath::conjugate);

/// Per-channel integrands (0 electric, 1 magnetic) at a lab-frame spectral point,
/// without the -hbar/(4 pi^3) prefactor. block2 is zero for evanescent points.
struct DynamicIntegrand {
  double block1[2] = {0.0, 0.0};
  double block2[2] = {0.0, 0.0};
};
DynamicIntegrand dynamic_integrand(const SpectralPoint& p, const DynamicSystem& sys,
                                   CrossingPath path = CrossingPath::conjugate);

/// Sum over channels of the first block.
double integrand_block1(const SpectralPoint& p, const DynamicSystem& sys);
/// Sum over channels of the second block; p must be propagating (k < w/c).
double integrand_block2(const SpectralPoint& p, const DynamicSystem& sys);

DynamicPressureResult pressure_dynamic(const DynamicSystem& sys, const DynamicOptions& opt = {});

/// Several plate-1 models, gaps and velocities integrated on shared boxes.
struct DynamicCase {
  MaterialModel plate1;
  double gap = 0.0;
  double velocity = 0.0;
};

enum class DynamicTerm { total, term1, term2 };

/// A linear combination of case results that must itself meet a tolerance
/// (differences between nearby cases, finite-difference quotients, ...).
struct DynamicCombination {
  struct Part {
    std::size_t case_index = 0;
    DynamicTerm term = DynamicTerm::total;
    double weight = 1.0;
  };
  std::vector<Part> parts;
  double rel_tol = 1e-3;
  double abs_tol = 0.0;
  /// Index of an earlier combination whose |value| also scales rel_tol.
  std::ptrdiff_t relative_to = -1;
};

struct DynamicBatchResult {
  std::vector<DynamicPressureResult> cases;
  std::vector<double> combination_values;
  std::vector<double> combination_errors;
  bool converged = false;
  std::size_t evaluations = 0;
};

DynamicBatchResult pressure_dynamic_batch(const MaterialModel& plate2, double temperature,
                                          const std::vector<DynamicCase>& cases,
                                          const std::vector<DynamicCombination>& combinations,
                                          const DynamicOptions& opt = {});

}  // namespace casimir
