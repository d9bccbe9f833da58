#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "casimir/error.hpp"
#include "casimir/quadrature.hpp"

using namespace casimir;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("semi-infinite: exponential") {
  const IntegralEstimate r = integrate_semi_infinite([](double x) { return std::exp(-x); }, {});
  CHECK(r.converged);
  CHECK(std::abs(r.value - 1.0) < 1e-10);
}

TEST_CASE("semi-infinite: Planck integral against series") {
  // sum_n 6/n^4, summed directly
  double series = 0.0;
  for (int n = 200000; n >= 1; --n) series += 6.0 / std::pow(double(n), 4);
  QuadratureSpec s;
  s.rel_tol = 1e-11;
  const IntegralEstimate r = integrate_semi_infinite([](double x) { return x * x * x / std::expm1(x); }, s);
  CHECK(std::abs(r.value - series) / series < 1e-8);
}

TEST_CASE("zero integrand gives zero error") {
  const IntegralEstimate r = integrate_semi_infinite([](double) { return 0.0; }, {});
  CHECK(r.value == 0.0);
  CHECK(r.error == 0.0);
}

TEST_CASE("disc and plane") {
  QuadratureSpec s;
  s.rel_tol = 1e-9;
  CHECK(std::abs(integrate_disc([](double, double) { return 1.0; }, 1.0, s).value - pi) < 1e-9);
  CHECK(std::abs(integrate_plane_2d([](double x, double y) { return std::exp(-x * x - y * y); }, s).value - pi) <
        1e-8);
  // sqrt(pi) * sqrt(pi/4)
  const double aniso = std::sqrt(pi) * std::sqrt(pi / 4.0);
  CHECK(std::abs(integrate_plane_2d([](double x, double y) { return std::exp(-x * x - 4 * y * y); }, s).value -
                 aniso) < 1e-8);
}

TEST_CASE("coth_stable") {
  CHECK(coth_stable(800.0) == 1.0);
  CHECK(std::abs(coth_stable(1e-6) - (1e6 + 1e-6 / 3.0)) / 1e6 < 1e-14);
  const double direct = (std::exp(2.0) + 1.0) / (std::exp(2.0) - 1.0);
  CHECK(std::abs(coth_stable(1.0) - direct) / direct < 1e-14);
  CHECK(coth_stable(-2.5) == -coth_stable(2.5));
  for (double x = 1e-3; x < 700.0; x *= 1.7) {
    const double ref = 1.0 / std::tanh(x);
    CHECK(std::abs(coth_stable(x) - ref) / ref < 1e-14);
  }
  CHECK_THROWS_AS(coth_stable(0.0), Error);
}

TEST_CASE("error estimates are honest on closed forms") {
  struct Case {
    std::function<double(double)> f;
    double a, b, exact;
  };
  const std::vector<Case> cases = {
      {[](double x) { return std::sin(x); }, 0, pi, 2.0},
      {[](double x) { return std::sqrt(x); }, 0, 1, 2.0 / 3.0},
      {[](double x) { return std::log(x); }, 0, 1, -1.0},
      {[](double x) { return 1.0 / (1 + x * x); }, -10, 10, 2 * std::atan(10.0)},
      {[](double x) { return std::exp(x); }, 0, 3, std::exp(3.0) - 1},
      {[](double x) { return std::abs(x - 0.3); }, 0, 1, 0.5 * 0.09 + 0.5 * 0.49},
      {[](double x) { return x * x * x * x; }, -1, 2, (32.0 + 1.0) / 5.0},
      {[](double x) { return std::cos(20 * x); }, 0, 1, std::sin(20.0) / 20.0},
      {[](double x) { return 1.0 / std::sqrt(x); }, 0, 4, 4.0},
      {[](double x) { return std::exp(-x * x); }, -6, 6, std::sqrt(pi) * std::erf(6.0)},
      {[](double x) { return x * std::exp(-x); }, 0, 50, 1.0 - 51.0 * std::exp(-50.0)},
      {[](double x) { return std::pow(x, 1.5); }, 0, 2, std::pow(2.0, 2.5) / 2.5},
      {[](double x) { return std::sin(x) * std::sin(x); }, 0, 2 * pi, pi},
      {[](double x) { return 1.0 / (x + 0.01); }, 0, 1, std::log(101.0)},
      {[](double x) { return std::tanh(50 * (x - 0.5)); }, 0, 1, 0.0},
      {[](double x) { return std::cbrt(x); }, -1, 1, 0.0},
      {[](double x) { return std::atan(x); }, 0, 1, pi / 4 - 0.5 * std::log(2.0)},
      {[](double x) { return x * std::log(x); }, 0, 1, -0.25},
      {[](double x) { return 1.0 / (1 + std::exp(x)); }, -5, 5, 5.0},
      {[](double x) { return std::cosh(x); }, -2, 2, 2 * std::sinh(2.0)},
  };
  int honest = 0;
  for (const auto& c : cases) {
    QuadratureSpec s;
    s.rel_tol = 1e-6;
    const IntegralEstimate r = integrate_interval(c.f, c.a, c.b, s);
    if (std::abs(r.value - c.exact) <= std::max(r.error, 1e-15)) ++honest;
  }
  CHECK(honest >= 19);
}

TEST_CASE("breakpoint at a kink does not bias the result") {
  const auto f = [](double x) { return std::abs(x - 0.37) * std::exp(x); };
  QuadratureSpec with, fine;
  with.rel_tol = 1e-8;
  with.breakpoints = {0.37};
  fine.rel_tol = 1e-9;
  for (int i = 1; i < 10; ++i) fine.breakpoints.push_back(0.37 + 0.063 * i - 0.063 * 5);
  fine.breakpoints.push_back(0.37);
  const double a = integrate_interval(f, 0, 1, with).value;
  const double b = integrate_interval(f, 0, 1, fine).value;
  CHECK(std::abs(a - b) < 1e-8 * std::abs(b));
}

TEST_CASE("cubature is deterministic and handles targets") {
  const Integrand f = [](std::span<const double> x, std::span<double> out) {
    out[0] = std::exp(-x[0] - x[1]);
    out[1] = std::exp(-x[0] - x[1]) * (1.0 + 1e-6 * x[0]);
  };
  CubatureOptions o;
  o.targets = {{{1.0, 0.0}, 1e-8}, {{-1.0, 1.0}, 1e-3}};
  const auto boxes = tensor_boxes({{0.0, 0.5, 1.0}, {0.0, 1.0}});
  const CubatureResult a = cubature(f, 2, 2, boxes, o), b = cubature(f, 2, 2, boxes, o);
  const double e1 = (1 - std::exp(-1.0));
  CHECK(a.converged);
  CHECK(std::abs(a.values[0] - e1 * e1) < 1e-8);
  // difference = 1e-6 * (int x e^-x) * (int e^-y)
  const double diff = 1e-6 * (1.0 - 2.0 * std::exp(-1.0)) * e1;
  CHECK(std::abs(a.target_values[1] - diff) < 1e-3 * diff);
  CHECK(a.values == b.values);
  CHECK(a.target_errors == b.target_errors);
}
