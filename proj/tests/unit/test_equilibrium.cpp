#include "elandau/equilibrium.hpp"
#include "elandau/numerics.hpp"

#include <doctest.h>

#include <cmath>

using namespace elandau;

TEST_CASE("Poisson profile: inverse Fourier transform of exp(-theta0|xi|)") {
  const double th = 0.7;
  const auto eq1 = Equilibrium::poisson(th, 1);
  for (double v : {0.0, 0.4, 2.0}) {
    // (1/π) ∫_0^∞ e^{-θ r} cos(r v) dr
    const double ref =
        integrate_adaptive([&](double r) { return std::exp(-th * r) * std::cos(r * v); }, 0.0, 80.0, 1e-13) / kPi;
    CHECK(mu_value(eq1, v) == doctest::Approx(ref).epsilon(1e-10));
    CHECK(mu_hat(eq1, v) == doctest::Approx(std::exp(-th * v)));
  }
  const auto eq3 = Equilibrium::poisson(th, 3);
  for (double v : {0.3, 1.5}) {
    // radial inverse transform in 3D: (1 / (2π² v)) ∫_0^∞ r sin(r v) e^{-θ r} dr
    const double ref = integrate_adaptive([&](double r) { return r * std::sin(r * v) * std::exp(-th * r); }, 0.0,
                                          100.0, 1e-13) /
                       (2.0 * kPi * kPi * v);
    CHECK(mu_value(eq3, v) == doctest::Approx(ref).epsilon(1e-10));
  }
  CHECK_THROWS_AS(mu_value(Equilibrium::poisson(1.0, 2), 1.0), DomainError);
}

TEST_CASE("Maxwellian transform") {
  const auto eq = Equilibrium::maxwellian(1.3, 0.4, 1);
  for (double xi : {0.0, 0.5, 2.0}) {
    const double ref =
        2.0 * integrate_adaptive([&](double v) { return mu_value(eq, v) * std::cos(xi * v); }, 0.0, 20.0, 1e-13);
    CHECK(mu_hat(eq, xi) == doctest::Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("kernel K") {
  const auto eq = Equilibrium::poisson(1.0, 1);
  const auto flat = ScaleFactorModel::constant();
  const double s = 0.8, k = 2.0;
  CHECK(kernel_K(eq, flat, Interaction::Repulsive, k, 3.0, 3.0 - s) ==
        doctest::Approx(-4.0 * kPi * s * std::exp(-k * s)));
  CHECK(kernel_K(eq, flat, Interaction::Attractive, k, 3.0, 3.0 - s) ==
        doctest::Approx(4.0 * kPi * s * std::exp(-k * s)));
  CHECK(kernel_K(eq, flat, Interaction::Repulsive, k, 1.0, 2.0) == 0.0);
  const auto pl = ScaleFactorModel::power_law(0.25, 1.0);
  const double amp = std::pow(0.5 * 2.2 + 1.0, 0.5 * 1.5);  // (a∘T)(2.2)^{1.5}
  CHECK(kernel_K(eq, pl, Interaction::Repulsive, k, 3.0, 2.2, 1.5) ==
        doctest::Approx(-4.0 * kPi * s * std::exp(-k * s) * amp));
  CHECK_THROWS_AS(kernel_K(eq, flat, Interaction::Repulsive, 0.0, 1.0, 0.0), DomainError);
}

TEST_CASE("constructors validate") {
  CHECK_THROWS_AS(Equilibrium::poisson(0.0, 1), DomainError);
  CHECK_THROWS_AS(Equilibrium::maxwellian(1.0, -1.0, 1), DomainError);
  CHECK_THROWS_AS(interaction_from_eps(0), DomainError);
  CHECK(eps_F(interaction_from_eps(1)) == 1);
}
