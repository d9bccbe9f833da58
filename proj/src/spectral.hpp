#pragma once

// Coordinates and domain helpers shared by the real-frequency routes.

#include <vector>

#include "casimir/materials.hpp"
#include "casimir/optics.hpp"

namespace casimir::detail {

/// Radial wavevector for the coordinate v in [0, 2]:
///   v in [0, 1]: k = (w/c) sin(v pi/2), propagating, light cone at v = 1;
///   v in [1, 2]: q0 = s u/(1 - u), u = v - 1, evanescent.
/// With a shell width sigma > 0 the evanescent part starts with a segment
/// v in [1, 1 + shell_span] where q0 = (w/c) sigma (v - 1)/shell_span, and the
/// rational map takes over from there. measure is k dk/dv.
struct RadialSample {
  double k = 0.0;
  double q0_squared = 0.0;
  double measure = 0.0;
  bool propagating = false;
};
inline constexpr double shell_span = 0.25;
RadialSample radial_sample(double omega, double v, double kappa_scale, double shell = 0.0);

/// Moving-frame light cones |w + kx V| = k c lie within c/(c+|V|) < k c/w < c/(c-|V|).
/// shell_width gives the sigma covering every velocity with margin; shell_edges the
/// v coordinates of each shell boundary (independent of w by construction).
double shell_width(const std::vector<double>& velocities);
std::vector<double> shell_edges(const std::vector<double>& velocities, double shell);

/// Above this frequency every response of the plates is small enough that the
/// reflection amplitudes satisfy |Delta|^2 < 1e-2 tol.
double omega_cutoff(const std::vector<const MaterialModel*>& plates, double tol);

/// Lowest structural frequency of the plates (for limits and grading).
double smallest_scale(const std::vector<const MaterialModel*>& plates);
std::vector<double> characteristic_frequencies(const std::vector<const MaterialModel*>& plates);

/// Log-graded panel edges on [0, omega_max] reaching down to about 1e-4 of the
/// smallest scale, plus the given interior points.
std::vector<double> omega_edges(double omega_max, double smallest, std::vector<double> extra);

/// Azimuth of the in-plane wavevector for the coordinate w in [0, 1].
///
/// The line w+ = w + k V cos(phi) = 0, or near k = w/c the light cone of the
/// moving frame |w+| = k c, is kept on the panel boundary w = 1/2.
/// Unfolded: phi in [0, pi]. Folded: psi in [0, pi/2], and the integrand is
/// evaluated at psi and pi - psi. Without a crossing one half-panel collapses
/// to a point (zero jacobian).
struct AngleMap {
  bool folded = true;
  double velocity = 0.0;  // V used to place the crossing line

  /// Returns the number of angles written (1 or 2); jacobian is dphi/dw.
  int sample(double omega, double k, double w, double angles[2], double& jacobian) const;
};

/// lim_{h->0} g(h)/h for an odd function g, by Richardson extrapolation of the
/// even quotient g(h)/h at h and h/2.
template <class G>
double odd_slope_at_zero(const G& g, double h) {
  const double f1 = g(h) / h;
  const double f2 = g(0.5 * h) / (0.5 * h);
  return (4.0 * f2 - f1) / 3.0;
}

/// Below this |hbar w / 2 k_B T| the product Im(f(w)) coth(...) is replaced by its limit.
inline constexpr double thermal_limit_threshold = 1e-9;

}  // namespace casimir::detail
