#include "elandau/gevrey.hpp"

#include <doctest.h>

#include <cmath>

using namespace elandau;

TEST_CASE("multiplier and sliding radius") {
  GevreyParams p;
  p.gamma = 0.5;
  p.sigma = 2.0;
  const double br = std::sqrt(1.0 + 4.0 + 9.0);
  CHECK(multiplier_A(p, 0.3, 2.0, 3.0) == doctest::Approx(std::exp(0.3 * std::sqrt(br)) * br * br));
  const std::vector<double> k{1.0, 1.0, 0.0}, xi{0.0, 1.0, 3.0};
  CHECK(bracket(k, xi) == doctest::Approx(std::sqrt(13.0)));
  CHECK_THROWS_AS(multiplier_A(p, 1.5, 1.0, 1.0), DomainError);
  CHECK(sliding_z(p, 0.0) == doctest::Approx(2.0 * p.lambda1));
  CHECK(sliding_z(p, 1e6) == doctest::Approx(p.lambda1).epsilon(1e-3));
  CHECK(sliding_z(p, 3.0) < sliding_z(p, 2.0));
}

TEST_CASE("parameter validation") {
  GevreyParams p;
  CHECK_NOTHROW(p.validate());
  p.lambda1 = 0.5;
  CHECK_THROWS_AS(p.validate(), DomainError);
  GevreyParams q;
  q.alpha = 0.2;
  CHECK_THROWS_AS(q.validate(), DomainError);
  GevreyParams r;
  CHECK(r.theorem_admissible(0.5, 0.75));
  r.sigma = 3.0;
  CHECK_FALSE(r.theorem_admissible(0.5, 0.75));
}

TEST_CASE("fourth-order xi derivative") {
  auto err = [](std::size_t n) {
    const double L = 3.0, h = 2 * L / n;
    std::vector<std::complex<double>> f(n + 1);
    for (std::size_t i = 0; i <= n; ++i) f[i] = std::sin(-L + i * h);
    const auto d = xi_derivative(f, h);
    double e = 0;
    for (std::size_t i = 0; i <= n; ++i) e = std::max(e, std::abs(d[i] - std::cos(-L + i * h)));
    return e;
  };
  const double r = err(64) / err(128);
  CHECK(r > 12.0);
  CHECK(err(256) < 1e-7);
}

TEST_CASE("F generator and torus norm") {
  GevreyParams p;
  const std::vector<DensityMode> modes{{{0}, {5.0, 0.0}}, {{1}, {0.0, 2.0}}, {{-2}, {1.0, 0.0}}};
  const double tau = 1.5, z = 0.3;
  auto term = [&](double k, double mag) {
    const double br = std::sqrt(1 + k * k + k * k * tau * tau);
    return std::exp(z * br) * std::pow(br, p.sigma) * std::pow(k, -p.alpha) * mag;
  };
  CHECK(generator_F(p, modes, tau, z) == doctest::Approx(std::max(term(1, 2), term(2, 1))));
  double s = 0.0;
  for (auto [k, m] : {std::pair{0.0, 5.0}, {1.0, 2.0}, {2.0, 1.0}}) {
    const double br = std::sqrt(1 + k * k);
    s += std::pow(std::exp(z * br) * std::pow(br, p.sigma) * m, 2);
  }
  CHECK(gevrey_norm_torus(p, modes, z) == doctest::Approx(std::sqrt(s)));
}

TEST_CASE("G and the phase-space norm on a Gaussian") {
  GevreyParams p;
  p.sigma = 0.0;
  SpectralState st(1, SymmetricGrid(12.0, 1200));
  for (std::size_t i = 0; i < st.grid().size(); ++i) st.at(1, i) = std::exp(-0.5 * std::pow(st.grid().node(i), 2));
  // z = 0, sigma = 0: ∫ e^{-x²} = √π and ∫ x² e^{-x²} = √π/2
  CHECK(gevrey_norm_phase_space(p, st, 0.0) == doctest::Approx(std::sqrt(std::sqrt(kPi))).epsilon(1e-10));
  CHECK(generator_G(p, st, 0.0) == doctest::Approx(1.5 * std::sqrt(kPi)).epsilon(1e-8));
}

TEST_CASE("peak bound") {
  // sup_{y > 0} y^{b1} e^{-c y^{b2}} by dense search
  auto sup = [](double b1, double b2, double c) {
    double m = 0.0;
    for (int i = 1; i < 200000; ++i) {
      const double y = i * 1e-4;
      m = std::max(m, std::pow(y, b1) * std::exp(-c * std::pow(y, b2)));
    }
    return m;
  };
  CHECK(peak_bound_sharp(2.0, 1.5, 0.7) == doctest::Approx(sup(2.0, 1.5, 0.7)).epsilon(1e-6));
  CHECK(peak_bound_sharp(1.0, 1.0, 2.0) == doctest::Approx(peak_bound_printed(1.0, 1.0, 2.0)));
  // the printed form undershoots the true supremum once b2 != 1
  CHECK(peak_bound_printed(1.0, 2.0, 1.0) < sup(1.0, 2.0, 1.0));
}

TEST_CASE("inequality sweep") {
  const auto s = run_inequality_sweep(2000, 11);
  CHECK(s.samples == 2000);
  CHECK(s.triangle_violations == 0);
  CHECK(s.ratio_violations == 0);
  CHECK(s.algebra_violations == 0);
  CHECK(s.peak_sharp_violations == 0);
  CHECK(s.peak_printed_violations > 0);
}
