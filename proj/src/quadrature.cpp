#include "casimir/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>
#include <tuple>

#include "casimir/error.hpp"
#include "casimir/parallel.hpp"

namespace casimir {

namespace {

// Gauss-Kronrod 7/15 nodes on [-1, 1] (positive half, centre last).
constexpr double gk_nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double gk_weights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for nodes 1, 3, 5 and the centre.
constexpr double g_weights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Region {
  Box box;
  std::vector<double> value;  // higher-order rule
  std::vector<double> diff;   // higher minus lower rule
  std::vector<double> target_error;
  std::vector<double> fourth_difference;  // dimension-major, per component (GM only)
  unsigned split = 0;
};

std::size_t points_per_box(std::size_t n) {
  if (n == 1) return 15;
  return 1 + 4 * n + 2 * n * (n - 1) + (std::size_t{1} << n);
}

void rule_gk15(const Integrand& f, std::size_t nc, Region& r) {
  const double centre = 0.5 * (r.box.lower[0] + r.box.upper[0]);
  const double half = 0.5 * (r.box.upper[0] - r.box.lower[0]);
  std::vector<double> out(nc), kron(nc, 0.0), gauss(nc, 0.0);
  double x = centre;
  f(std::span<const double>(&x, 1), out);
  for (std::size_t c = 0; c < nc; ++c) {
    kron[c] = gk_weights[7] * out[c];
    gauss[c] = g_weights[3] * out[c];
  }
  std::vector<double> pair(nc);
  for (int i = 0; i < 7; ++i) {
    x = centre - half * gk_nodes[i];
    f(std::span<const double>(&x, 1), out);
    pair = out;
    x = centre + half * gk_nodes[i];
    f(std::span<const double>(&x, 1), out);
    for (std::size_t c = 0; c < nc; ++c) {
      const double s = pair[c] + out[c];
      kron[c] += gk_weights[i] * s;
      if (i % 2 == 1) gauss[c] += g_weights[i / 2] * s;
    }
  }
  r.value.resize(nc);
  r.diff.resize(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    r.value[c] = half * kron[c];
    r.diff[c] = half * (kron[c] - gauss[c]);
  }
}

void rule_genz_malik(const Integrand& f, std::size_t n, std::size_t nc, Region& r) {
  const double lambda2 = std::sqrt(9.0 / 70.0);
  const double lambda4 = std::sqrt(9.0 / 10.0);
  const double lambda5 = std::sqrt(9.0 / 19.0);
  const double dn = static_cast<double>(n);
  const double w1 = (12824.0 - 9120.0 * dn + 400.0 * dn * dn) / 19683.0;
  const double w2 = 980.0 / 6561.0;
  const double w3 = (1820.0 - 400.0 * dn) / 19683.0;
  const double w4 = 200.0 / 19683.0;
  const double w5 = 6859.0 / 19683.0 / std::ldexp(1.0, static_cast<int>(n));
  const double e1 = (729.0 - 950.0 * dn + 50.0 * dn * dn) / 729.0;
  const double e2 = 245.0 / 486.0;
  const double e3 = (265.0 - 100.0 * dn) / 1458.0;
  const double e4 = 25.0 / 729.0;

  std::vector<double> centre(n), half(n);
  double volume = 1.0;
  for (std::size_t d = 0; d < n; ++d) {
    centre[d] = 0.5 * (r.box.lower[d] + r.box.upper[d]);
    half[d] = 0.5 * (r.box.upper[d] - r.box.lower[d]);
    volume *= 2.0 * half[d];
  }

  std::vector<double> x(n), out(nc);
  std::vector<double> s1(nc), s2(nc, 0.0), s3(nc, 0.0), s4(nc, 0.0), s5(nc, 0.0);
  r.fourth_difference.assign(n * nc, 0.0);

  f(centre, out);
  s1 = out;

  std::vector<double> a(nc), b(nc);
  for (std::size_t d = 0; d < n; ++d) {
    x = centre;
    x[d] = centre[d] - lambda2 * half[d];
    f(x, out);
    a = out;
    x[d] = centre[d] + lambda2 * half[d];
    f(x, out);
    for (std::size_t c = 0; c < nc; ++c) a[c] += out[c];

    x[d] = centre[d] - lambda4 * half[d];
    f(x, out);
    b = out;
    x[d] = centre[d] + lambda4 * half[d];
    f(x, out);
    for (std::size_t c = 0; c < nc; ++c) b[c] += out[c];

    for (std::size_t c = 0; c < nc; ++c) {
      s2[c] += a[c];
      s3[c] += b[c];
      r.fourth_difference[d * nc + c] = (a[c] - 2.0 * s1[c]) - (b[c] - 2.0 * s1[c]) / 7.0;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (int signs = 0; signs < 4; ++signs) {
        x = centre;
        x[i] += ((signs & 1) ? 1.0 : -1.0) * lambda4 * half[i];
        x[j] += ((signs & 2) ? 1.0 : -1.0) * lambda4 * half[j];
        f(x, out);
        for (std::size_t c = 0; c < nc; ++c) s4[c] += out[c];
      }
    }
  }

  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    for (std::size_t d = 0; d < n; ++d)
      x[d] = centre[d] + (((mask >> d) & 1) ? 1.0 : -1.0) * lambda5 * half[d];
    f(x, out);
    for (std::size_t c = 0; c < nc; ++c) s5[c] += out[c];
  }

  r.value.resize(nc);
  r.diff.resize(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    const double seventh = w1 * s1[c] + w2 * s2[c] + w3 * s3[c] + w4 * s4[c] + w5 * s5[c];
    const double fifth = e1 * s1[c] + e2 * s2[c] + e3 * s3[c] + e4 * s4[c];
    r.value[c] = volume * seventh;
    r.diff[c] = volume * (seventh - fifth);
  }
}

double dot(const std::vector<double>& w, const double* v, std::size_t nc) {
  double s = 0.0;
  for (std::size_t c = 0; c < nc; ++c) s += w[c] * v[c];
  return s;
}

struct Engine {
  const Integrand& f;
  std::size_t n;
  std::size_t nc;
  std::vector<Target> targets;

  void evaluate(Region& r) const {
    if (n == 1)
      rule_gk15(f, nc, r);
    else
      rule_genz_malik(f, n, nc, r);
    r.target_error.resize(targets.size());
    for (std::size_t t = 0; t < targets.size(); ++t)
      r.target_error[t] = std::abs(dot(targets[t].weights, r.diff.data(), nc));
  }

  // Split dimension from the fourth differences of the worst target functional.
  void choose_split(Region& r, const std::vector<double>& tolerance) const {
    if (n == 1) {
      r.split = 0;
      return;
    }
    std::size_t worst = 0;
    double worst_ratio = -1.0;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const double ratio = r.target_error[t] / tolerance[t];
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        worst = t;
      }
    }
    double best = -1.0;
    unsigned dim = 0;
    for (std::size_t d = 0; d < n; ++d) {
      const double v = std::abs(dot(targets[worst].weights, &r.fourth_difference[d * nc], nc));
      const double width = r.box.upper[d] - r.box.lower[d];
      const double best_width = r.box.upper[dim] - r.box.lower[dim];
      if (v > best * (1.0 + 1e-12) ||
          (std::abs(v - best) <= 1e-12 * best && width > best_width)) {
        best = v;
        dim = static_cast<unsigned>(d);
      }
    }
    r.split = dim;
  }
};

}  // namespace

std::vector<Box> tensor_boxes(const std::vector<std::vector<double>>& edges) {
  std::vector<Box> boxes(1);
  for (const auto& e : edges) {
    if (e.size() < 2) throw Error(ErrorKind::invalid_argument, "tensor_boxes needs two edges per dimension");
    std::vector<Box> next;
    next.reserve(boxes.size() * (e.size() - 1));
    for (const auto& b : boxes) {
      for (std::size_t i = 0; i + 1 < e.size(); ++i) {
        Box nb = b;
        nb.lower.push_back(e[i]);
        nb.upper.push_back(e[i + 1]);
        next.push_back(std::move(nb));
      }
    }
    boxes = std::move(next);
  }
  return boxes;
}

CubatureResult cubature(const Integrand& f, std::size_t dimension, std::size_t components,
                        std::vector<Box> boxes, const CubatureOptions& options) {
  if (dimension == 0 || components == 0)
    throw Error(ErrorKind::invalid_argument, "cubature needs a positive dimension and component count");
  if (dimension > 20) throw Error(ErrorKind::invalid_argument, "cubature dimension too large");

  Engine engine{f, dimension, components, options.targets};
  if (engine.targets.empty()) {
    for (std::size_t c = 0; c < components; ++c) {
      Target t;
      t.weights.assign(components, 0.0);
      t.weights[c] = 1.0;
      t.rel_tol = options.rel_tol;
      t.abs_tol = options.abs_tol;
      engine.targets.push_back(std::move(t));
    }
  }
  for (const auto& t : engine.targets) {
    if (t.weights.size() != components)
      throw Error(ErrorKind::invalid_argument, "target weight count differs from component count");
    if (!(t.rel_tol > 0.0 || t.abs_tol > 0.0))
      throw Error(ErrorKind::invalid_argument, "target needs a positive tolerance");
    if (t.relative_to >= static_cast<std::ptrdiff_t>(engine.targets.size()))
      throw Error(ErrorKind::invalid_argument, "target reference out of range");
  }
  for (const auto& b : boxes) {
    if (b.lower.size() != dimension || b.upper.size() != dimension)
      throw Error(ErrorKind::invalid_argument, "box dimension mismatch");
  }

  const std::size_t nt = engine.targets.size();
  const std::size_t per_box = points_per_box(dimension);

  std::vector<Region> leaves(boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) leaves[i].box = std::move(boxes[i]);
  parallel_for(leaves.size(), [&](std::size_t i) { engine.evaluate(leaves[i]); });

  CubatureResult result;
  result.evaluations = per_box * leaves.size();

  std::vector<double> value_sum(components, 0.0), error_sum(nt, 0.0);
  auto recompute = [&] {
    std::fill(value_sum.begin(), value_sum.end(), 0.0);
    std::fill(error_sum.begin(), error_sum.end(), 0.0);
    for (const auto& r : leaves) {
      for (std::size_t c = 0; c < components; ++c) value_sum[c] += r.value[c];
      for (std::size_t t = 0; t < nt; ++t) error_sum[t] += r.target_error[t];
    }
  };
  std::vector<double> tolerance(nt);
  auto update_tolerance = [&] {
    for (std::size_t t = 0; t < nt; ++t) {
      const auto& tg = engine.targets[t];
      double v = std::abs(dot(tg.weights, value_sum.data(), components));
      if (tg.relative_to >= 0)
        v = std::max(v, std::abs(dot(engine.targets[tg.relative_to].weights, value_sum.data(), components)));
      tolerance[t] = std::max(tg.abs_tol, tg.rel_tol * v);
      if (!(tolerance[t] > 0.0)) tolerance[t] = std::numeric_limits<double>::min();
    }
  };
  auto converged = [&] {
    for (std::size_t t = 0; t < nt; ++t)
      if (error_sum[t] > tolerance[t]) return false;
    return true;
  };
  auto priority = [&](const Region& r) {
    double p = 0.0;
    for (std::size_t t = 0; t < nt; ++t) p = std::max(p, r.target_error[t] / tolerance[t]);
    return p;
  };

  // Max-heap on (priority, -slot) so ties go to the lowest slot.
  using Entry = std::tuple<double, std::ptrdiff_t, std::size_t>;  // priority, -slot, generation
  std::priority_queue<Entry> heap;
  std::vector<std::size_t> generation(leaves.size(), 0);
  auto rebuild = [&] {
    heap = {};
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      engine.choose_split(leaves[i], tolerance);
      heap.emplace(priority(leaves[i]), -static_cast<std::ptrdiff_t>(i), generation[i]);
    }
  };

  recompute();
  update_tolerance();
  rebuild();
  std::size_t next_rebuild = 2 * result.evaluations;

  while (true) {
    update_tolerance();
    if (converged()) {
      recompute();
      update_tolerance();
      if (converged()) {
        result.converged = true;
        break;
      }
    }
    if (result.evaluations + 2 * per_box > options.max_evaluations) break;

    const std::size_t budget = (options.max_evaluations - result.evaluations) / (2 * per_box);
    const std::size_t want = std::max<std::size_t>(1, std::min(options.batch, budget));
    std::vector<std::size_t> chosen;
    while (chosen.size() < want && !heap.empty()) {
      auto [p, neg_slot, gen] = heap.top();
      heap.pop();
      const auto slot = static_cast<std::size_t>(-neg_slot);
      if (gen != generation[slot]) continue;
      if (p <= 0.0 && !chosen.empty()) break;
      chosen.push_back(slot);
    }
    if (chosen.empty()) break;

    std::vector<Region> children(2 * chosen.size());
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      const Region& parent = leaves[chosen[i]];
      const unsigned d = parent.split;
      const double mid = 0.5 * (parent.box.lower[d] + parent.box.upper[d]);
      children[2 * i].box = parent.box;
      children[2 * i].box.upper[d] = mid;
      children[2 * i + 1].box = parent.box;
      children[2 * i + 1].box.lower[d] = mid;
    }
    parallel_for(children.size(), [&](std::size_t i) { engine.evaluate(children[i]); });
    result.evaluations += per_box * children.size();

    for (std::size_t i = 0; i < chosen.size(); ++i) {
      const std::size_t slot = chosen[i];
      Region& parent = leaves[slot];
      for (std::size_t c = 0; c < components; ++c) value_sum[c] -= parent.value[c];
      for (std::size_t t = 0; t < nt; ++t) error_sum[t] -= parent.target_error[t];
      for (std::size_t k = 0; k < 2; ++k) {
        Region& child = children[2 * i + k];
        for (std::size_t c = 0; c < components; ++c) value_sum[c] += child.value[c];
        for (std::size_t t = 0; t < nt; ++t) error_sum[t] += child.target_error[t];
        engine.choose_split(child, tolerance);
      }
      parent = std::move(children[2 * i]);
      ++generation[slot];
      heap.emplace(priority(parent), -static_cast<std::ptrdiff_t>(slot), generation[slot]);
      leaves.push_back(std::move(children[2 * i + 1]));
      generation.push_back(0);
      const std::size_t s2 = leaves.size() - 1;
      heap.emplace(priority(leaves[s2]), -static_cast<std::ptrdiff_t>(s2), 0);
    }

    if (result.evaluations >= next_rebuild) {
      recompute();
      update_tolerance();
      for (auto& g : generation) ++g;
      rebuild();
      next_rebuild = 2 * result.evaluations;
    }
  }

  recompute();
  result.values = value_sum;
  result.abs_errors.assign(components, 0.0);
  for (const auto& r : leaves)
    for (std::size_t c = 0; c < components; ++c) result.abs_errors[c] += std::abs(r.diff[c]);
  result.target_values.resize(nt);
  result.target_errors = error_sum;
  for (std::size_t t = 0; t < nt; ++t)
    result.target_values[t] = dot(engine.targets[t].weights, value_sum.data(), components);
  result.boxes = leaves.size();
  return result;
}

std::vector<double> dyadic_points(double hi, int count) {
  std::vector<double> pts;
  for (int j = count; j >= 1; --j) pts.push_back(std::ldexp(hi, -j));
  pts.push_back(hi);
  return pts;
}

std::vector<double> panel_edges(double lo, double hi, std::vector<double> interior) {
  std::vector<double> e;
  e.push_back(lo);
  for (double x : interior)
    if (x > lo && x < hi) e.push_back(x);
  e.push_back(hi);
  std::sort(e.begin(), e.end());
  const double span = hi - lo;
  std::vector<double> out;
  for (double x : e) {
    if (!out.empty() && x - out.back() <= 1e-12 * span) {
      if (x == hi) out.back() = hi;
      continue;
    }
    out.push_back(x);
  }
  if (out.size() < 2) out = {lo, hi};
  return out;
}

namespace {

IntegralEstimate scalar_cubature(const std::function<double(std::span<const double>)>& g,
                                 std::size_t dim, std::vector<Box> boxes, const QuadratureSpec& spec) {
  CubatureOptions opt;
  opt.rel_tol = spec.rel_tol;
  opt.abs_tol = spec.abs_tol;
  opt.max_evaluations = spec.max_evaluations;
  const Integrand f = [&g](std::span<const double> x, std::span<double> out) { out[0] = g(x); };
  const CubatureResult r = cubature(f, dim, 1, std::move(boxes), opt);
  IntegralEstimate est;
  est.value = r.values[0];
  est.error = r.target_errors[0];
  est.evaluations = r.evaluations;
  est.panels = r.boxes;
  est.converged = r.converged;
  return est;
}

}  // namespace

IntegralEstimate integrate_interval(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureSpec& spec) {
  if (!(b > a)) {
    if (a == b) return {0.0, 0.0, 0, 0, std::numeric_limits<double>::infinity(), true};
    throw Error(ErrorKind::invalid_argument, "integration interval must have b >= a");
  }
  const auto edges = panel_edges(a, b, spec.breakpoints);
  return scalar_cubature([&f](std::span<const double> x) { return f(x[0]); }, 1,
                         tensor_boxes({edges}), spec);
}

IntegralEstimate integrate_semi_infinite(const std::function<double(double)>& f,
                                         const QuadratureSpec& spec) {
  if (std::isfinite(spec.truncation)) {
    IntegralEstimate est = integrate_interval(f, 0.0, spec.truncation, spec);
    est.truncated_at = spec.truncation;
    return est;
  }
  if (!(spec.scale > 0.0)) throw Error(ErrorKind::invalid_argument, "semi-infinite map needs a positive scale");
  const double s = spec.scale;
  std::vector<double> mapped;
  for (double x : spec.breakpoints)
    if (x > 0.0 && std::isfinite(x)) mapped.push_back(x / (x + s));
  const auto edges = panel_edges(0.0, 1.0, mapped);
  auto g = [&f, s](std::span<const double> t) {
    const double u = 1.0 - t[0];
    const double v = f(s * t[0] / u);
    return v == 0.0 ? 0.0 : v * s / (u * u);
  };
  return scalar_cubature(g, 1, tensor_boxes({edges}), spec);
}

IntegralEstimate integrate_plane_2d(const std::function<double(double, double)>& f,
                                    const QuadratureSpec& spec) {
  const double s = spec.scale;
  if (!(s > 0.0)) throw Error(ErrorKind::invalid_argument, "plane map needs a positive scale");
  // x = s u / (1 - u^2) maps (-1, 1) onto the real line.
  auto map = [s](double u, double& jac) {
    const double d = 1.0 - u * u;
    jac = s * (1.0 + u * u) / (d * d);
    return s * u / d;
  };
  auto g = [&](std::span<const double> u) {
    double jx, jy;
    const double x = map(u[0], jx);
    const double y = map(u[1], jy);
    const double v = f(x, y);
    return v == 0.0 ? 0.0 : v * jx * jy;
  };
  const std::vector<double> e = {-1.0, -0.5, 0.0, 0.5, 1.0};
  return scalar_cubature(g, 2, tensor_boxes({e, e}), spec);
}

IntegralEstimate integrate_disc(const std::function<double(double, double)>& f, double radius,
                                const QuadratureSpec& spec) {
  if (!(radius >= 0.0)) throw Error(ErrorKind::invalid_argument, "disc radius must be non-negative");
  if (radius == 0.0) return {0.0, 0.0, 0, 0, std::numeric_limits<double>::infinity(), true};
  constexpr double two_pi = 2.0 * std::numbers::pi;
  auto g = [&](std::span<const double> p) {
    const double r = p[0];
    return r * f(r * std::cos(p[1]), r * std::sin(p[1]));
  };
  const std::vector<double> re = panel_edges(0.0, radius, spec.breakpoints);
  const std::vector<double> pe = {0.0, 0.25 * two_pi, 0.5 * two_pi, 0.75 * two_pi, two_pi};
  return scalar_cubature(g, 2, tensor_boxes({re, pe}), spec);
}

double coth_stable(double x) {
  if (x == 0.0) throw Error(ErrorKind::invalid_argument, "coth of zero");
  const double a = std::abs(x);
  double v;
  if (a < 1e-4) {
    const double a2 = a * a;
    v = 1.0 / a + a / 3.0 - a * a2 / 45.0;
  } else {
    v = 1.0 + 2.0 / std::expm1(2.0 * a);
  }
  return x < 0.0 ? -v : v;
}

}  // namespace casimir
