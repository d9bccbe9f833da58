#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace casimir {

/// Vector integrand: writes one value per component for the point x.
using Integrand = std::function<void(std::span<const double> x, std::span<double> out)>;

struct Box {
  std::vector<double> lower;
  std::vector<double> upper;
};

/// A linear functional sum_c weights[c] * I_c that must be converged.
///
/// The error of a box for a target is |W . (I_high - I_low)| with signed
/// component differences, so pieces that cancel in the functional can be
/// integrated on shared boxes without their individual errors counting.
struct Target {
  std::vector<double> weights;
  double rel_tol = 1e-6;
  double abs_tol = 0.0;
  /// When set, rel_tol also applies to |value| of that target, so a small part of
  /// a larger total only needs accuracy relative to the total.
  std::ptrdiff_t relative_to = -1;
};

struct CubatureOptions {
  std::vector<Target> targets;  // empty: every component with rel_tol/abs_tol below
  double rel_tol = 1e-6;
  double abs_tol = 0.0;
  std::size_t max_evaluations = 4'000'000;
  std::size_t batch = 16;  // boxes split per round; fixed, so results do not depend on threads
};

struct CubatureResult {
  std::vector<double> values;         // per component
  std::vector<double> abs_errors;     // per component, sum of |I_high - I_low| over boxes
  std::vector<double> target_values;
  std::vector<double> target_errors;
  std::size_t evaluations = 0;
  std::size_t boxes = 0;
  bool converged = false;
};

/// Adaptive cubature over a union of boxes: Gauss-Kronrod 7/15 in one dimension,
/// Genz-Malik 7/5 in two or more. Boxes are refined from a global queue until every
/// target meets its tolerance or the evaluation budget is spent.
CubatureResult cubature(const Integrand& f, std::size_t dimension, std::size_t components,
                        std::vector<Box> boxes, const CubatureOptions& options);

/// Tensor grid of boxes from per-dimension edge lists (each sorted, at least two edges).
std::vector<Box> tensor_boxes(const std::vector<std::vector<double>>& edges);

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  std::size_t max_evaluations = 2'000'000;
  /// Mandatory panel boundaries (singular points, light cone, ...).
  std::vector<double> breakpoints;
  /// Natural scale s of the map x = s t / (1 - t) used for semi-infinite ranges.
  double scale = 1.0;
  /// Finite upper cutoff replacing infinity; the caller accounts for the tail.
  double truncation = std::numeric_limits<double>::infinity();
};

struct IntegralEstimate {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  std::size_t panels = 0;
  double truncated_at = std::numeric_limits<double>::infinity();
  bool converged = false;
};

IntegralEstimate integrate_interval(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureSpec& spec);
/// Integral over (0, infinity), or (0, spec.truncation) when that is finite.
IntegralEstimate integrate_semi_infinite(const std::function<double(double)>& f,
                                         const QuadratureSpec& spec);
/// Integral of f(x, y) over the whole plane.
IntegralEstimate integrate_plane_2d(const std::function<double(double, double)>& f,
                                    const QuadratureSpec& spec);
/// Integral of f(x, y) over the disc x^2 + y^2 < radius^2, in polar coordinates.
IntegralEstimate integrate_disc(const std::function<double(double, double)>& f, double radius,
                                const QuadratureSpec& spec);

/// coth(x) without cancellation: 1 + 2/expm1(2x), with a series below |x| = 1e-4.
/// Odd in x; x = 0 throws ErrorKind::invalid_argument.
double coth_stable(double x);

/// Points hi * 2^-j for j = count..1, ascending, followed by hi.
std::vector<double> dyadic_points(double hi, int count);

/// Merges, sorts and deduplicates edges, keeping those inside [lo, hi] and both ends.
std::vector<double> panel_edges(double lo, double hi, std::vector<double> interior);

}  // namespace casimir
