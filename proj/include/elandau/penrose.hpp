#pragma once

// Dielectric function and Penrose stability margins.
//
// The infimum of |D(k, lambda)| over Re(lambda) >= 0 is approximated by a
// dense scan of the imaginary axis plus a coarse interior grid. D is
// analytic in the open half-plane and tends to 1 at infinity, so by the
// minimum-modulus principle the infimum sits on the axis unless D has a
// zero inside; zeros are hunted separately (a bracketing search on the
// real axis, where D is real, and Newton refinement from the best grid
// point). Any zero with Re(lambda) >= 0 sets kappa = 0.

#include "elandau/equilibrium.hpp"
#include "elandau/numerics.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace elandau {

struct PenroseReport {
  double kappa = 0.0;
  std::complex<double> argmin_lambda{0.0, 0.0};
  double argmin_k = 0.0;
  bool stable = false;
  std::vector<double> k_range;
  double scan_resolution = 0.0;  // largest spacing of the imaginary-axis scan
  double omega_max = 0.0;
  double tolerance = 1e-6;
  /// A zero of D found in the closed right half-plane, if any.
  std::optional<std::complex<double>> root;
};

struct PenroseScanOptions {
  double k_max = 10.0;
  /// Imaginary-axis half-width; 0 selects 50 · theta0 · k_max (Poisson) or
  /// the analogous Gaussian scale.
  double omega_max = 0.0;
  int n_scan = 512;
  std::vector<double> interior_re = {0.05, 0.25, 1.0, 4.0};
  int n_interior_im = 65;
  double tolerance = 1e-6;
  /// Lattice dimension used to enumerate |k|; 0 takes the equilibrium's.
  int dim = 0;
};

/// D(lambda) = 1 - 4π eps_F ∫_0^∞ e^{-lambda s} s mu_hat(|k| s) ds.
std::complex<double> dielectric(const Equilibrium& eq, Interaction sign, double k_abs,
                                std::complex<double> lambda);

/// 1 - 4π a(t0)^{-(d-4)} ∫_0^∞ e^{-lambda s} s |mu_hat(|k| s)| ds.
std::complex<double> dielectric_adapted(const Equilibrium& eq, double a_t0, double k_abs,
                                        std::complex<double> lambda);

PenroseReport penrose_margin(const Equilibrium& eq, Interaction sign,
                             const PenroseScanOptions& opts = {}, Exec exec = Exec::Parallel);

/// Adapted condition for d >= 5 (the d = 4 condition is penrose_margin
/// with an equilibrium of dimension 4).
PenroseReport adapted_margin_d5(const Equilibrium& eq, double a_t0, double k_max,
                                PenroseScanOptions opts = {}, Exec exec = Exec::Parallel);

/// L_J = sqrt(4 T / rho0).
double jeans_length(double temperature, double rho0);

/// Distinct |k| over k in Z^dim \ {0} with |k| <= k_max, ascending.
std::vector<double> lattice_norms(int dim, double k_max);

struct DielectricSample {
  double k_abs;
  double omega;
  std::complex<double> value;
};

/// D(k, i omega) on the same imaginary-axis nodes the margin scan uses.
std::vector<DielectricSample> dielectric_trace(const Equilibrium& eq, Interaction sign,
                                               const PenroseScanOptions& opts);

}  // namespace elandau
