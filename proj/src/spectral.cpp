#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "casimir/constants.hpp"
#include "casimir/quadrature.hpp"

namespace casimir::detail {

namespace {

// Static strength of a response, infinite for conductors.
double reference_magnitude(const Response& r) {
  switch (r.kind()) {
    case Response::Kind::drude:
    case Response::Kind::plasma:
      return std::numeric_limits<double>::infinity();
    case Response::Kind::constant:
      return std::abs(r.value());
    case Response::Kind::lorentz: {
      double s = 0.0;
      for (const auto& o : r.oscillators()) s += std::abs(o.strength);
      return s;
    }
    default:
      return 0.0;
  }
}

double response_cutoff(const Response& r, double tol) {
  if (r.is_zero()) return 0.0;
  // |Delta| is at most about |chi|/2 once |chi| is small.
  const double threshold = 2.0 * std::sqrt(1e-2 * tol) * std::min(1.0, reference_magnitude(r));
  return r.transparency_frequency(threshold);
}

}  // namespace

RadialSample radial_sample(double omega, double v, double kappa_scale, double shell) {
  RadialSample s;
  const double kw = omega / constants::speed_of_light;
  if (v <= 1.0) {
    const double theta = 0.5 * std::numbers::pi * v;
    const double sn = std::sin(theta), cs = std::cos(theta);
    s.k = kw * sn;
    s.q0_squared = -(kw * cs) * (kw * cs);
    s.measure = kw * kw * sn * cs * 0.5 * std::numbers::pi;
    s.propagating = true;
    return s;
  }
  double kappa, dkappa;
  if (shell > 0.0 && v <= 1.0 + shell_span) {
    dkappa = kw * shell / shell_span;
    kappa = (v - 1.0) * dkappa;
  } else {
    const double start = shell > 0.0 ? 1.0 + shell_span : 1.0;
    const double u = (v - start) / (2.0 - start);
    const double w = 1.0 - u;
    kappa = (shell > 0.0 ? kw * shell : 0.0) + kappa_scale * u / w;
    dkappa = kappa_scale / (w * w * (2.0 - start));
  }
  s.k = std::sqrt(kappa * kappa + kw * kw);
  s.q0_squared = kappa * kappa;
  s.measure = kappa * dkappa;
  s.propagating = false;
  return s;
}

double shell_width(const std::vector<double>& velocities) {
  double widest = 0.0;
  for (double v : velocities) {
    const double b = std::abs(v) / constants::speed_of_light;
    if (b > 0.0) widest = std::max(widest, std::sqrt(1.0 / ((1.0 - b) * (1.0 - b)) - 1.0));
  }
  return 4.0 * widest;
}

std::vector<double> shell_edges(const std::vector<double>& velocities, double shell) {
  std::vector<double> out;
  if (shell <= 0.0) return out;
  out.push_back(1.0 + shell_span);
  for (double v : velocities) {
    const double b = std::abs(v) / constants::speed_of_light;
    if (b == 0.0) continue;
    out.push_back(std::asin(1.0 / (1.0 + b)) / (0.5 * std::numbers::pi));
    out.push_back(1.0 + shell_span * std::sqrt(1.0 / ((1.0 - b) * (1.0 - b)) - 1.0) / shell);
  }
  return out;
}

double omega_cutoff(const std::vector<const MaterialModel*>& plates, double tol) {
  double w = 0.0;
  for (const auto* m : plates) {
    w = std::max(w, response_cutoff(m->electric(), tol));
    w = std::max(w, response_cutoff(m->magnetic(), tol));
  }
  return w;
}

std::vector<double> characteristic_frequencies(const std::vector<const MaterialModel*>& plates) {
  std::vector<double> out;
  for (const auto* m : plates) {
    for (const Response* r : {&m->electric(), &m->magnetic()}) {
      for (double f : r->characteristic_frequencies())
        if (f > 0.0 && std::isfinite(f)) out.push_back(f);
    }
  }
  return out;
}

double smallest_scale(const std::vector<const MaterialModel*>& plates) {
  const auto f = characteristic_frequencies(plates);
  if (f.empty()) return 1e12;
  return *std::min_element(f.begin(), f.end());
}

std::vector<double> omega_edges(double omega_max, double smallest, std::vector<double> extra) {
  const double lowest = 1e-4 * std::min(smallest, omega_max);
  int count = static_cast<int>(std::ceil(std::log2(omega_max / lowest)));
  count = std::clamp(count, 1, 80);
  auto pts = dyadic_points(omega_max, count);
  extra.insert(extra.end(), pts.begin(), pts.end());
  return panel_edges(0.0, omega_max, std::move(extra));
}

int AngleMap::sample(double omega, double k, double w, double angles[2], double& jacobian) const {
  constexpr double pi = std::numbers::pi;
  const double span = folded ? 0.5 * pi : pi;
  double split;
  if (velocity == 0.0 || k == 0.0) {
    split = -1.0;
  } else {
    // Either the line w+ = 0 (large k) or the light cone of the moving plate,
    // |w+| = k c, which stays within a shell of relative width |V|/c around k = w/c.
    const double kv = k * velocity;
    const double kc = k * constants::speed_of_light;
    const double cosine = std::abs(kv) >= omega ? -omega / kv : (kc - omega) / kv;
    split = std::acos(std::clamp(folded ? std::abs(cosine) : cosine, -1.0, 1.0));
  }
  double phi;
  if (split < 0.0) {
    phi = span * w;
    jacobian = span;
  } else if (w < 0.5) {
    phi = 2.0 * w * split;
    jacobian = 2.0 * split;
  } else {
    phi = split + (2.0 * w - 1.0) * (span - split);
    jacobian = 2.0 * (span - split);
  }
  angles[0] = phi;
  if (!folded) return 1;
  angles[1] = pi - phi;
  return 2;
}

}  // namespace casimir::detail
