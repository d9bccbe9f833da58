// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero only when
// a criterion could not be evaluated at all (exception, missing binary).

#include <chrono>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/lifshitz_dynamic.hpp"
#include "casimir/lifshitz_static.hpp"
#include "casimir/optics.hpp"
#include "casimir/polder.hpp"

using namespace casimir;
using constants::boltzmann;
using constants::hbar;
using constants::pi;
using constants::speed_of_light;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

MaterialModel metal() { return MaterialModel::drude(2e14, 5e13); }

// least-squares slope of log|y| against log x
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome loop_identity() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0;
  int used = 0;
  while (used < 10000) {
    const cplx d1(u(rng), u(rng)), d2(u(rng), u(rng));
    const cplx q0(std::abs(u(rng)) * 1e7, u(rng) * 1e7);
    const double l = 1e-8 + 1e-6 * std::abs(u(rng));
    const cplx x = d1 * d2 * std::exp(-2.0 * q0 * l);
    if (std::abs(1.0 - x) < 1e-3 || std::abs(x) < 1e-12) continue;
    const cplx left = 1.0 / (std::exp(2.0 * q0 * l) / (d1 * d2) - 1.0);
    const cplx right = (x - std::norm(x)) / std::norm(1.0 - x);
    worst = std::max({worst, std::abs(left - right) / std::abs(left),
                      std::abs(loop_function(d1, d2, q0, l) - left) / std::abs(left)});
    ++used;
  }
  return {worst <= 1e-12, fmt("max rel deviation %.2e over 10000 tuples (tol 1e-12)", worst)};
}

Outcome ideal_metal() {
  const double l = 1e-6;
  const double p = pressure_matsubara({l, 0.0, MaterialModel::ideal_metal(), MaterialModel::ideal_metal()}).value;
  const double exact = -pi * pi * hbar * speed_of_light / (240 * std::pow(l, 4));
  return {rel(p, exact) <= 5e-3, fmt("P = %.6e Pa vs %.6e Pa, rel %.1e (tol 5e-3)", p, exact, rel(p, exact))};
}

Outcome classical() {
  const double l = 2e-5, T = 300;
  const double p = pressure_matsubara({l, T, MaterialModel::ideal_metal(), MaterialModel::ideal_metal()}).value;
  const double exact = -1.2020569031595942 * boltzmann * T / (8 * pi * l * l * l);
  const double d = rel(p, exact);
  return {d <= 1e-2, fmt("kTl/hbar c = %.2f, P = %.6e Pa vs %.6e Pa, rel %.1e (tol 1e-2)",
                         boltzmann * T * l / (hbar * speed_of_light), p, exact, d)};
}

Outcome formulations() {
  StaticOptions o;
  o.rel_tol = 1e-3;
  double worst = 0, worst_l = 0;
  for (double l : {5e-8, 1e-7, 2e-7, 5e-7, 1e-6, 2e-6, 5e-6}) {
    const PlateSystem s{l, 300.0, metal(), metal()};
    const double m = pressure_matsubara(s, o).value;
    const double a = pressure_realfreq_loop(s, o).value;
    const double b = pressure_realfreq_split(s, o).value;
    const double d = std::max({rel(a, m), rel(b, m), rel(a, b)});
    if (d > worst) worst = d, worst_l = l;
  }
  return {worst <= 2e-2, fmt("7 gaps in [50 nm, 5 um], max pairwise rel %.2e at l = %.0e m (tol 2e-2)", worst, worst_l)};
}

Outcome dynamic_reduction() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0, 1);
  const double tol = 1e-3;
  bool ok = true;
  std::string detail;
  for (int i = 0; i < 3; ++i) {
    const MaterialModel p1 = MaterialModel::drude(1e14 * std::pow(10, u(rng)), 1e13 * std::pow(10, u(rng)));
    const MaterialModel p2 =
        MaterialModel::lorentz({{1 + 5 * u(rng), 5e13 * std::pow(10, u(rng)), 1e13 * std::pow(10, u(rng))}});
    const PlateSystem s{5e-8 * std::pow(10, 1.5 * u(rng)), 300.0, p1, p2};
    StaticOptions so;
    so.rel_tol = tol;
    DynamicOptions dop;
    dop.rel_tol = tol;
    const double st = pressure_realfreq_split(s, so).value;
    const double dy = pressure_dynamic({s, 0.0}, dop).total;
    const double d = rel(dy, st);
    ok = ok && d <= 2 * tol;
    detail += (detail.empty() ? "" : ", ") + fmt("%.1e", d);
  }
  return {ok, "rel deviations " + detail + " (tol 2e-3)"};
}

Outcome parity() {
  const PlateSystem s{1e-7, 300.0, metal(), metal()};
  DynamicOptions o;
  o.fold_kx = false;
  bool ok = true;
  double worst = 0;
  for (double f : {1e-5, 1e-4, 1e-3}) {
    const DynamicPressureResult a = pressure_dynamic({s, f * speed_of_light}, o);
    const DynamicPressureResult b = pressure_dynamic({s, -f * speed_of_light}, o);
    const double diff = std::abs(a.total - b.total);
    ok = ok && diff <= a.total_error + b.total_error;
    worst = std::max(worst, diff / (a.total_error + b.total_error));
  }
  return {ok, fmt("max |F(V)-F(-V)| / combined error = %.2e (tol 1)", worst)};
}

Outcome quadratic_onset() {
  // One batch per velocity: the angular panels follow the crossing line of the fastest case only.
  const std::vector<double> fr = {1e-5, 3e-5, 1e-4};
  std::vector<double> d1, dt;
  bool converged = true;
  for (double f : fr) {
    const std::vector<DynamicCase> cases = {{metal(), 1e-7, 0.0}, {metal(), 1e-7, f * speed_of_light}};
    const std::vector<DynamicCombination> combos = {
        {{{1, DynamicTerm::term1, 1.0}, {0, DynamicTerm::term1, -1.0}}, 2e-3},
        {{{1, DynamicTerm::total, 1.0}, {0, DynamicTerm::total, -1.0}}, 2e-3}};
    const DynamicBatchResult r = pressure_dynamic_batch(metal(), 300.0, cases, combos);
    d1.push_back(r.combination_values[0]);
    dt.push_back(r.combination_values[1]);
    converged = converged && r.converged;
  }
  const double p = loglog_slope(fr, d1), pt = loglog_slope(fr, dt);
  return {std::abs(p - 2.0) <= 0.1 && converged,
          fmt("term1(V)-term1(0) = %.3e, %.3e, %.3e Pa: exponent p = %.3f (want 2.0 +- 0.1)", d1[0], d1[1], d1[2], p) +
              fmt("; total exponent %.3f", pt)};
}

Outcome second_term_evanescent() {
  const PlateSystem s{1e-7, 300.0, metal(), MaterialModel::lorentz({{3.0, 1e14, 3e13}})};
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0, 1);
  int nonzero = 0;
  for (int i = 0; i < 10000; ++i) {
    const double w = 1e11 * std::pow(1e6, u(rng));
    const double k = w / speed_of_light * (1 + 10 * u(rng) + 1e-12);
    const double phi = pi * u(rng);
    const SpectralPoint p = SpectralPoint::make(w, k * std::cos(phi), k * std::sin(phi));
    if (!p.evanescent()) continue;
    const StaticIntegrand st = static_integrand(p, s);
    const DynamicIntegrand dy = dynamic_integrand(p, {s, 1e-3 * speed_of_light});
    for (int c = 0; c < 2; ++c) nonzero += st.second[c] != 0.0 || dy.block2[c] != 0.0;
  }
  return {nonzero == 0, fmt("%.0f nonzero values at 10000 evanescent points", nonzero)};
}

Outcome second_term_distance() {
  StaticOptions o;
  o.rel_tol = 1e-3;
  std::vector<double> t1, t2;
  for (double l : {1e-7, 2e-7, 5e-7, 1e-6}) {
    const PressureResult r = pressure_realfreq_split({l, 300.0, metal(), metal()}, o);
    t1.push_back(r.breakdown.cross_term);
    t2.push_back(r.breakdown.second_term);
  }
  const auto [lo, hi] = std::minmax_element(t2.begin(), t2.end(),
                                            [](double a, double b) { return std::abs(a) < std::abs(b); });
  const double variation = (std::abs(*hi) - std::abs(*lo)) / std::abs(*hi);
  const double span = std::abs(t1.front() / t1.back());
  return {variation < 0.5 && span > 1e3,
          fmt("term2 from %.3e to %.3e Pa, variation %.2f (want < 0.5); term1 span %.3g (want > 1e3)", t2.front(),
              t2.back(), variation, span)};
}

ParticleSurfaceSystem polder_system(double v) {
  ParticleSurfaceSystem s;
  s.particle.electric = Response::lorentz({{1e-30, 1e14, 2e13}});
  s.surface = metal();
  s.separation = 1e-7;
  s.temperature = 300.0;
  s.velocity = v;
  return s;
}

Outcome second_term_rarified() {
  FiniteDifferenceOptions o;
  o.resolve_term2 = true;
  o.check_linearity = false;
  const FiniteDifferenceResult r = cp_force_finite_difference(polder_system(0.0), o);
  const double p = std::log2(r.term2_derivative / r.term2_derivative_half_density);
  return {std::abs(p - 2.0) <= 0.1,
          fmt("term2 dP/dl = %.4e at n1, %.4e at n1/2: exponent %.3f (want 2.0 +- 0.1)", r.term2_derivative,
              r.term2_derivative_half_density, p)};
}

Outcome transition() {
  const ParticleSurfaceSystem s = polder_system(1e-4 * speed_of_light);
  const double a = cp_force_analytic(s).force;
  const double f = cp_force_finite_difference(s).force;
  ParticleSurfaceSystem im;
  const double alpha0 = 1e-30, z = 1e-6;
  im.particle.electric = Response::constant(alpha0);
  im.surface = MaterialModel::ideal_metal();
  im.separation = z;
  const double m = cp_force_matsubara(im).force;
  const double exact = -3 * hbar * speed_of_light * alpha0 / (2 * pi * std::pow(z, 5));
  return {rel(f, a) <= 1e-2 && rel(m, exact) <= 1e-2,
          fmt("analytic %.6e N vs finite difference %.6e N (rel %.1e); ideal metal rel %.1e (tol 1e-2)", a, f,
              rel(f, a), rel(m, exact))};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  bool ok = true;
  std::string detail;
  for (const char* cfg : {"gap_sweep.ini", "sliding_drude.ini", "polder_moving.ini"}) {
    std::string out[2];
    for (int i = 0; i < 2; ++i) {
      const std::string path = "acceptance_run_" + std::to_string(i) + ".csv";
      const std::string cmd = std::string(CASIMIR_CLI) + " --config " + CASIMIR_CONFIGS + "/" + cfg + " --out " + path;
      if (std::system(cmd.c_str()) != 0) throw std::runtime_error(std::string("cli failed on ") + cfg);
      out[i] = slurp(path);
      std::remove(path.c_str());
    }
    ok = ok && !out[0].empty() && out[0] == out[1];
    detail += std::string(detail.empty() ? "" : ", ") + cfg + (out[0] == out[1] ? " identical" : " differs");
  }
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"1  loop identity", loop_identity},
      {"2  ideal-metal Casimir limit", ideal_metal},
      {"3  classical high-T limit", classical},
      {"4  formulation cross-check", formulations},
      {"5  dynamic reduction at V=0", dynamic_reduction},
      {"6  V-parity", parity},
      {"7  quadratic onset", quadratic_onset},
      {"8a second term zero for k>w/c", second_term_evanescent},
      {"8b second term vs distance", second_term_distance},
      {"8c second term rarified scaling", second_term_rarified},
      {"9  transition consistency", transition},
      {"10 CLI determinism", determinism},
  };
  const std::string only = argc > 1 ? argv[1] : "";
  int passed = 0, failed = 0, broken = 0;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && std::string(name).rfind(only, 0) != 0) continue;
    const auto t0 = std::chrono::steady_clock::now();
    std::string status, detail;
    try {
      const Outcome o = fn();
      status = o.pass ? "PASS" : "FAIL";
      detail = o.detail;
      (o.pass ? passed : failed)++;
    } catch (const std::exception& e) {
      status = "FAIL";
      detail = std::string("could not evaluate: ") + e.what();
      ++broken;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  %-34s %s [%.1f s]\n", status.c_str(), name, detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d passed, %d failed, %d not evaluated\n", passed, failed + broken, broken);
  return broken ? 1 : 0;
}
