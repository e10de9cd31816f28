#include "elandau/cosmology.hpp"
#include "elandau/numerics.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace elandau;

TEST_CASE("tau is the integral of a^-2 and T inverts it") {
  for (double q : {0.1, 0.25, 0.4, 0.5}) {
    const auto m = ScaleFactorModel::power_law(q, 1.5);
    for (double t : {1.5, 2.0, 7.0, 30.0}) {
      const double ref = integrate_adaptive([q](double s) { return std::pow(s, -2.0 * q); }, 1.5, t, 1e-13);
      CHECK(m.tau_of_t(t) == doctest::Approx(ref).epsilon(1e-11));
      CHECK(m.T_of_tau(m.tau_of_t(t)) == doctest::Approx(t).epsilon(1e-12));
      CHECK(m.a_of_T(m.tau_of_t(t)) == doctest::Approx(std::pow(t, q)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(ScaleFactorModel::power_law(0.3, 1.0).tau_of_t(0.5), DomainError);
}

TEST_CASE("q = 1/2 is exponential in tau") {
  const auto m = ScaleFactorModel::power_law(0.5, 2.0);
  for (double tau : {0.0, 1.0, 4.0}) CHECK(m.a_of_T(tau) == doctest::Approx(std::sqrt(2.0) * std::exp(tau / 2)));
  CHECK(std::isinf(m.beta()));
}

TEST_CASE("time derivatives match finite differences") {
  const auto m = ScaleFactorModel::power_law(0.3, 1.0);
  const double t = 3.0, h = 1e-4;
  CHECK(m.a_dot(t) == doctest::Approx((m.a(t + h) - m.a(t - h)) / (2 * h)).epsilon(1e-8));
  CHECK(m.a_ddot(t) == doctest::Approx((m.a(t + h) - 2 * m.a(t) + m.a(t - h)) / (h * h)).epsilon(1e-5));
}

TEST_CASE("second derivative of a(T)^-1/4 against finite differences") {
  for (double q : {0.1, 0.25, 0.4, 0.5}) {
    const auto m = ScaleFactorModel::power_law(q, 1.0);
    auto f = [&](double tau) { return std::pow(m.a_of_T(tau), -0.25); };
    for (double tau : {0.5, 3.0, 11.0}) {
      const double h = 1e-3;
      const double fd = (f(tau + h) - 2 * f(tau) + f(tau - h)) / (h * h);
      CHECK(m.inv_quarter_root_dd(tau) == doctest::Approx(fd).epsilon(1e-5));
    }
  }
  CHECK(ScaleFactorModel::constant().inv_quarter_root_dd(2.0) == 0.0);
}

TEST_CASE("admissibility: beta fit and the Liouville-Green integral at q = 1/4") {
  const auto m = ScaleFactorModel::power_law(0.25, 1.0);
  const auto r = check_admissibility(m, 1e4, 256);
  CHECK(r.beta_closed == doctest::Approx(0.5));
  CHECK(r.beta_rel_gap < 1e-2);
  CHECK(r.lg_integral_finite);
  // B = tau/2 + 1, (a∘T)^{-1/4} = B^{-1/8}: integrand B^{-1/8} (9/256) B^{-17/8},
  // integral 2 (9/256) (4/5) = 9/160.
  CHECK(r.lg_integral == doctest::Approx(9.0 / 160.0).epsilon(1e-7));
  // (1/16)(9/16) ∫ B^{-7/4} = (9/256)(2)(4/3) = 3/32.
  CHECK(r.example_formula_integral == doctest::Approx(3.0 / 32.0).epsilon(1e-7));
}

TEST_CASE("background field closes the Friedman relation") {
  std::vector<double> ts;
  for (int i = 0; i < 200; ++i) ts.push_back(1.0 + 0.05 * i);
  CHECK(friedman_residual({0.5, 1.0}, 3, -1, ts) <= 1e-10);
  CHECK(friedman_residual({2.0 / 3.0, 1.0}, 3, 1, ts) <= 1e-10);
  CHECK(friedman_residual({0.25, 1.0}, 4, -1, ts) <= 1e-10);
  // Independent check of the pointwise identity at one t.
  const double q = 0.25, t = 2.0;
  const double a = std::pow(t, q), add = q * (q - 1) * std::pow(t, q - 2);
  const double phi = background_field({q, 1.0}, 4, -1, t);
  // 4π/d = π at d = 4.
  CHECK(std::abs(add + kPi * (-1) * std::pow(a, -3.0) + phi / a) < 1e-13);
}
