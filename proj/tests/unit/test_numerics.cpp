#include "elandau/numerics.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

using namespace elandau;

TEST_CASE("adaptive quadrature integrates smooth functions") {
  CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, kPi, 1e-13) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(integrate_adaptive([](double x) { return std::exp(-x); }, 0.0, 5.0, 1e-13) ==
        doctest::Approx(1.0 - std::exp(-5.0)).epsilon(1e-13));
  CHECK(integrate_adaptive([](double) { return 1.0; }, 2.0, 2.0, 1e-12) == 0.0);
}

TEST_CASE("panel quadrature handles oscillatory complex integrands") {
  const double w = 37.0;
  auto f = [w](double x) { return std::exp(std::complex<double>(-x, w * x)); };
  const auto got = integrate_panels(f, 0.0, 3.0, 64);
  // ∫_0^3 e^{(-1+iw)x} dx
  const std::complex<double> c(-1.0, w);
  const auto ref = (std::exp(3.0 * c) - 1.0) / c;
  CHECK(std::abs(got - ref) < 1e-13);
}

TEST_CASE("power tail extrapolation") {
  const auto t = integrate_with_power_tail([](double x) { return 1.0 / ((1.0 + x) * (1.0 + x)); }, 0.0, 1e4);
  CHECK(t.finite);
  CHECK(t.total() == doctest::Approx(1.0).epsilon(1e-6));
  const auto slow = integrate_with_power_tail([](double x) { return 1.0 / (1.0 + x); }, 0.0, 1e3);
  CHECK_FALSE(slow.finite);
}

TEST_CASE("least squares line") {
  std::vector<double> x{0, 1, 2, 3, 4}, y;
  for (double v : x) y.push_back(3.0 - 0.5 * v);
  const auto f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(-0.5));
  CHECK(f.intercept == doctest::Approx(3.0));
  CHECK(f.r2 == doctest::Approx(1.0));
}

TEST_CASE("rk4 step is fourth order on the harmonic oscillator") {
  auto accel = [](double, double u, double) { return -u; };
  auto err_at = [&](int n) {
    OdeSample s{0.0, 1.0};
    const double h = 2.0 / n;
    for (int i = 0; i < n; ++i) s = rk4_step(accel, i * h, s, h);
    return std::abs(s.u - std::sin(2.0));
  };
  const double ratio = err_at(20) / err_at(40);
  CHECK(ratio > 14.0);
  CHECK(ratio < 18.0);
}

TEST_CASE("symmetric grid is mirror exact") {
  const SymmetricGrid g(5.0, 10);
  CHECK(g.size() == 11);
  CHECK(g.node(g.center()) == 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.node(i) == -g.node(g.size() - 1 - i));
  CHECK(g.contains(5.0));
  CHECK_FALSE(g.contains(5.1));
  CHECK_THROWS_AS(SymmetricGrid(1.0, 7), DomainError);
}

TEST_CASE("cubic interpolation reproduces cubics and vanishes outside") {
  const SymmetricGrid g(4.0, 16);
  std::vector<double> v(g.size());
  auto p = [](double x) { return 1.0 - 2.0 * x + 0.3 * x * x - 0.05 * x * x * x; };
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = p(g.node(i));
  for (double x : {-3.9, -1.23, 0.0, 0.77, 2.5, 3.99}) {
    CHECK(interpolate_cubic<double>(g, v, x) == doctest::Approx(p(x)).epsilon(1e-12));
  }
  CHECK(interpolate_cubic<double>(g, v, 4.5) == 0.0);
}

TEST_CASE("%.17g formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_g17(v)) == v);
}
